//! Spectral densities on uniform grids and cepstral factorization of the
//! Szegő function `D`, with `|D(e^{iθ})|² = 2πΔ(θ)`.
//!
//! Grids sample `θ_j = -π + 2π(j + offset)/N`. A half-bin offset keeps
//! `θ = 0`, where long-memory densities vanish or blow up, off the grid.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::coeffs::{CoefficientSequence, DecayClass, FarimaSpec, SequenceKind};
use crate::error::{Error, Result};
use crate::fft::fft_in_place;
use crate::numeric::{series_exp, series_reciprocal};

/// Values below this fraction of the grid maximum are raised to it.
pub const DENSITY_FLOOR: f64 = 1e-13;
/// Negative values beyond this fraction of the maximum are rejected.
pub const NEGATIVE_TOL: f64 = 1e-10;
/// Upper limit on the number of autocovariances folded into a grid.
const MAX_FOLD_LEN: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralGrid {
    values: Vec<f64>,
    offset: f64,
    floored: usize,
}

impl SpectralGrid {
    pub fn new(values: Vec<f64>, offset: f64) -> Result<Self> {
        if values.len() < 4 || !values.len().is_power_of_two() {
            return Err(Error::Domain(format!(
                "grid size must be a power of two >= 4, got {}",
                values.len()
            )));
        }
        if !(0.0..1.0).contains(&offset) {
            return Err(Error::Domain(format!(
                "grid offset must lie in [0, 1), got {offset}"
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::NegativeDensity {
                index: i,
                value: *v,
            });
        }
        Ok(Self {
            values,
            offset,
            floored: 0,
        })
    }

    /// Samples `f(θ_j)` on a half-offset grid.
    pub fn from_fn(size: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let offset = 0.5;
        let values = (0..size).map(|j| f(grid_theta(size, offset, j))).collect();
        Self::new(values, offset)
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Number of entries raised to the floor.
    pub fn floored(&self) -> usize {
        self.floored
    }

    pub fn theta(&self, j: usize) -> f64 {
        grid_theta(self.size(), self.offset, j)
    }
}

fn grid_theta(n: usize, offset: f64, j: usize) -> f64 {
    -PI + 2.0 * PI * (j as f64 + offset) / n as f64
}

/// FARIMA spectral density `|Θ/Φ|² |1 - e^{iθ}|^{-2d} / (2π)`.
pub fn farima_density(spec: &FarimaSpec, theta: f64) -> f64 {
    let z = Complex64::from_polar(1.0, theta);
    let eval = |p: &[f64]| {
        p.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    };
    let ratio = (eval(spec.theta()) / eval(spec.phi())).norm_sqr();
    ratio * (Complex64::new(1.0, 0.0) - z).norm().powf(-2.0 * spec.d()) / (2.0 * PI)
}

/// `Δ(θ_j) = (2π)^{-1} Σ_k γ_k e^{-ikθ_j}` on a half-offset grid of `size`
/// points.
///
/// The sum over `|k| < L` is folded modulo `size` and transformed once. For
/// power-law `γ` the remainder `Σ_{k≥L} γ_k e^{-ikθ}` is added by two steps
/// of summation by parts against the fitted `γ_k ≈ γ_{L-1} ((L-1)/k)^p`.
/// Extendable sequences are first grown to `min(64·size, 2^24)` terms.
pub fn density_from_autocov(gamma: &CoefficientSequence, size: usize) -> Result<SpectralGrid> {
    if size < 4 || !size.is_power_of_two() {
        return Err(Error::Domain(format!(
            "grid size must be a power of two >= 4, got {size}"
        )));
    }
    let target = if gamma.is_extendable() {
        (64 * size).min(MAX_FOLD_LEN).max(gamma.len())
    } else {
        gamma.len()
    };
    let g = gamma.prefix(target)?;
    let len = g.len();
    let offset = 0.5;
    let n = size;
    // h[k mod N] accumulates γ_k (-1)^k e^{-2πikδ/N} for k in (-L, L).
    let mut h = vec![Complex64::new(0.0, 0.0); n];
    for (k, &gk) in g.iter().enumerate() {
        let phase = -2.0 * PI * k as f64 * offset / n as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        h[k % n] += Complex64::from_polar(gk * sign, phase);
        if k > 0 {
            h[(n - k % n) % n] += Complex64::from_polar(gk * sign, -phase);
        }
    }
    fft_in_place(&mut h, false);
    let tail_exponent = match gamma.decay() {
        DecayClass::PowerLaw { exponent } => Some(exponent),
        _ => None,
    };
    let mut values: Vec<f64> = (0..n)
        .map(|j| {
            let theta = grid_theta(n, offset, j);
            let mut s = h[j].re;
            if let Some(p) = tail_exponent {
                s += 2.0 * power_tail_fourier(g[len - 1], len - 1, p, theta);
            }
            s / (2.0 * PI)
        })
        .collect();
    let max = values.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(Error::NegativeDensity {
            index: 0,
            value: max,
        });
    }
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < -NEGATIVE_TOL * max)
    {
        return Err(Error::NegativeDensity {
            index: i,
            value: *v,
        });
    }
    let floor = DENSITY_FLOOR * max;
    let mut floored = 0;
    for v in values.iter_mut() {
        if *v < floor {
            *v = floor;
            floored += 1;
        }
    }
    Ok(SpectralGrid {
        values,
        offset,
        floored,
    })
}

/// `Re Σ_{k>last} g_k e^{-ikθ}` for `g_k = g_last (last/k)^p`, by two steps
/// of summation by parts.
fn power_tail_fourier(g_last: f64, last: usize, p: f64, theta: f64) -> f64 {
    let model = |k: usize| g_last * (last as f64 / k as f64).powf(p);
    let z = Complex64::from_polar(1.0, -theta);
    let one = Complex64::new(1.0, 0.0);
    let k0 = last + 1;
    let g0 = model(k0);
    let dg = model(k0 + 1) - g0;
    let zk = z.powf(k0 as f64);
    let first = zk * g0 / (one - z);
    let second = zk * z * dg / ((one - z) * (one - z));
    (first + second).re
}

/// Output of [`factorize`].
#[derive(Debug, Clone)]
pub struct CepstrumResult {
    /// Fourier coefficients `λ_0..=λ_{N/2}` of `log Δ`.
    pub log_coeffs: Vec<f64>,
    pub c: CoefficientSequence,
    pub a: CoefficientSequence,
    /// Max relative error of `|D|²` against `2πΔ` on the grid.
    pub residual: f64,
    /// Max change of `c_k` (`k ≤ min(n_max, N/4)`) when the grid is halved;
    /// a measure of how well the grid resolves the density.
    pub resolution_gap: f64,
    /// Infinite-past prediction variance `c_0² = exp(λ_0) · 2π`.
    pub c0_sq: f64,
}

/// Cepstrum `L_k` of `log(2πΔ)`, `k = 0..=N/2`.
fn cepstrum(values: &[f64], offset: f64) -> Vec<f64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values
        .iter()
        .map(|v| Complex64::new((2.0 * PI * v).ln(), 0.0))
        .collect();
    fft_in_place(&mut buf, false);
    (0..=n / 2)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let phase = Complex64::from_polar(sign, -2.0 * PI * k as f64 * offset / n as f64);
            (buf[k % n] * phase).re / n as f64
        })
        .collect()
}

/// `g_k` of `log D = Σ g_k z^k`.
fn analytic_part(l: &[f64]) -> Vec<f64> {
    let half = l.len() - 1;
    let mut g: Vec<f64> = l.to_vec();
    g[0] *= 0.5;
    g[half] *= 0.5;
    g
}

/// Factorizes `grid` into `c_0..=c_{n_max}` and `a_0..=a_{n_max}`.
pub fn factorize(grid: &SpectralGrid, n_max: usize, tol: f64) -> Result<CepstrumResult> {
    let n = grid.size();
    let l = cepstrum(grid.values(), grid.offset());
    let g = analytic_part(&l);

    // Residual: |D(e^{iθ_j})|² = exp(2 Re log D) against 2πΔ_j.
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (k, gk) in g.iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        buf[k % n] +=
            Complex64::from_polar(gk * sign, 2.0 * PI * k as f64 * grid.offset() / n as f64);
    }
    fft_in_place(&mut buf, true);
    let residual = buf
        .iter()
        .zip(grid.values())
        .map(|(s, v)| ((2.0 * n as f64 * s.re).exp() / (2.0 * PI * v) - 1.0).abs())
        .fold(0.0, f64::max);
    if !(residual <= tol) {
        return Err(Error::FactorizationTolerance { residual, tol });
    }

    let c = series_exp(&g, n_max + 1);
    let a: Vec<f64> = series_reciprocal(&c, n_max + 1)
        .iter()
        .map(|x| -x)
        .collect();

    // Same factorization on every other grid point.
    let half: Vec<f64> = grid.values().iter().step_by(2).copied().collect();
    let lh = cepstrum(&half, grid.offset() / 2.0);
    let check_len = (n_max + 1).min(n / 4).min(lh.len());
    let ch = series_exp(&analytic_part(&lh), check_len);
    let resolution_gap = c
        .iter()
        .zip(&ch)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let c0_sq = c[0] * c[0];
    let log_coeffs: Vec<f64> = l
        .iter()
        .enumerate()
        .map(|(k, v)| if k == 0 { v - (2.0 * PI).ln() } else { *v })
        .collect();
    Ok(CepstrumResult {
        log_coeffs,
        c: CoefficientSequence::new(c, SequenceKind::Ma, DecayClass::Unknown),
        a: CoefficientSequence::new(a, SequenceKind::Ar, DecayClass::Unknown),
        residual,
        resolution_gap,
        c0_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn white_noise_density_and_factors() {
        let g = CoefficientSequence::autocov(
            vec![1.0, 0.0, 0.0],
            DecayClass::Exponential { rate: 0.0 },
        )
        .unwrap();
        let grid = density_from_autocov(&g, 64).unwrap();
        for v in grid.values() {
            assert_abs_diff_eq!(*v, 1.0 / (2.0 * PI), epsilon = 1e-15);
        }
        let f = factorize(&grid, 4, 1e-10).unwrap();
        assert_abs_diff_eq!(f.c.values()[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.a.values()[0], -1.0, epsilon = 1e-14);
        for k in 1..5 {
            assert!(f.c.values()[k].abs() < 1e-14 && f.a.values()[k].abs() < 1e-14);
        }
    }

    #[test]
    fn ma1_factorization() {
        // γ = (1.25, 0.5) ⇒ D(z) = 1 + 0.5 z.
        let g = CoefficientSequence::autocov(
            vec![1.25, 0.5, 0.0],
            DecayClass::Exponential { rate: 0.0 },
        )
        .unwrap();
        let grid = density_from_autocov(&g, 256).unwrap();
        let f = factorize(&grid, 3, 1e-10).unwrap();
        assert_abs_diff_eq!(f.c.values()[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.c.values()[1], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(f.c.values()[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.a.values()[2], -0.25, epsilon = 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert!(SpectralGrid::new(vec![1.0; 6], 0.0).is_err());
        assert!(matches!(
            SpectralGrid::new(vec![1.0, -1.0, 1.0, 1.0], 0.0),
            Err(Error::NegativeDensity { index: 1, .. })
        ));
    }
}
