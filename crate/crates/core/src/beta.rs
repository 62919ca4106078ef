//! The kernel sequence `β(n) = Σ_v c_v a_{v+n}` and its ψ/φ analogue
//! `β_-(n) = Σ_v ψ_v φ_{v+n+1}`.
//!
//! Besides the values at integer lags, a [`BetaSequence`] carries a
//! [`Continuation`]: a smooth extension of `β` to real arguments, used by the
//! PACF representation to replace far-out index sums by integrals.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::coeffs::{CoefficientSequence, DecayClass, FarimaSpec, TruncationPolicy};
use crate::error::{Error, Result};
use crate::numeric::{power_tail_integral, series_div_poly, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaVariant {
    Standard,
    Minus,
}

/// Closed-form `β` of a FARIMA model.
///
/// On the unit circle `Σ_n β(n) z^n = -R(z) F(z)` with
/// `R(z) = Φ(z)Θ(1/z) / (Θ(z)Φ(1/z))` and `F(z) = (1-z)^d (1-1/z)^{-d}`, whose
/// Fourier coefficients are `F_n = -sin(πd) / (π(n - d))` for every integer
/// `n`. Hence `β(n) = sin(πd)/π · Σ_k r_k / (n - k - d)` with `r_k` the
/// (two-sided, geometrically decaying) Laurent coefficients of `R`, and the
/// same expression defines `β` at real arguments. For `d = 0`, `β(n) = -r_n`.
///
/// For `d < 0` the generating function of `φ_{n+1}`, `ψ` gives exactly the
/// same Laurent product, so `β_-(n) = β(n)` for FARIMA models.
#[derive(Debug, Clone)]
pub struct FarimaKernel {
    d: f64,
    scale: f64,
    laurent: Vec<(i64, f64)>,
    smooth_cut: i64,
    decay_rate: f64,
}

impl FarimaKernel {
    pub fn new(spec: &FarimaSpec) -> Self {
        const NEGLIGIBLE: f64 = 1e-21;
        let r_ma = spec.ma_root_radius();
        let r_ar = spec.ar_root_radius();
        let reach = |rate: f64, finite: usize| -> usize {
            if rate == 0.0 {
                finite
            } else {
                (NEGLIGIBLE.ln() / rate.ln()).ceil() as usize + spec.p() + spec.q()
            }
        };
        let kp = reach(r_ma, spec.p());
        let kn = reach(r_ar, spec.q());
        let len = kp + kn + 1;
        // A = Φ/Θ, h = Θ/Φ as power series.
        let a = series_div_poly(spec.phi(), spec.theta(), len + kp);
        let h = series_div_poly(spec.theta(), spec.phi(), len + kn);
        let mut laurent = Vec::new();
        for k in -(kn as i64)..=(kp as i64) {
            let j0 = if k < 0 { (-k) as usize } else { 0 };
            let mut s = CompensatedSum::new();
            for j in j0..len {
                let ia = (j as i64 + k) as usize;
                if ia < a.len() && j < h.len() {
                    s.add(a[ia] * h[j]);
                }
            }
            let v = s.value();
            if v != 0.0 {
                laurent.push((k, v));
            }
        }
        let smooth_cut = if r_ma == 0.0 {
            spec.p() as i64
        } else {
            ((1e-17f64).ln() / r_ma.ln()).ceil() as i64 + spec.q() as i64
        };
        let d = spec.d();
        Self {
            d,
            scale: (PI * d).sin() / PI,
            laurent,
            smooth_cut,
            decay_rate: r_ma.max(r_ar),
        }
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `β(n)` at an integer lag.
    pub fn exact(&self, n: usize) -> f64 {
        if self.d == 0.0 {
            return -self
                .laurent
                .iter()
                .find(|(k, _)| *k == n as i64)
                .map_or(0.0, |(_, r)| *r);
        }
        let mut s = CompensatedSum::new();
        for &(k, r) in &self.laurent {
            s.add(r / (n as f64 - k as f64 - self.d));
        }
        self.scale * s.value()
    }

    /// Smooth part of the continuation, valid for `x` well to the right of
    /// [`Self::smooth_start`]. Terms whose poles lie further right carry
    /// weight below `1e-17` and are dropped.
    pub fn smooth(&self, x: f64) -> f64 {
        let mut s = 0.0;
        for &(k, r) in &self.laurent {
            if k > self.smooth_cut {
                break;
            }
            s += r / (x - k as f64 - self.d);
        }
        self.scale * s
    }

    /// Smallest abscissa at which [`Self::smooth`] may be used: twice the
    /// largest retained pole.
    pub fn smooth_start(&self) -> usize {
        (2 * (self.smooth_cut.max(0) as usize + 1)).max(24)
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }
}

/// Smooth extension of a tabulated power-law `β`: local interpolation of
/// `x^p β(x)` inside the table and a fitted expansion
/// `x^{-p} (b_0 + b_1/x + b_2/x^2)` beyond it.
#[derive(Debug, Clone)]
pub struct PowerLawTail {
    exponent: f64,
    scaled: Vec<f64>,
    coeffs: [f64; 3],
}

impl PowerLawTail {
    /// Fits the tail of `values`; returns `None` if the table is too short
    /// or not eventually of one sign.
    pub fn fit(values: &[f64]) -> Option<Self> {
        let len = values.len();
        if len < 256 {
            return None;
        }
        let lo = len / 4;
        let hi = len - 1;
        if values[lo] == 0.0 || values[lo].signum() != values[hi].signum() {
            return None;
        }
        if values[lo..]
            .iter()
            .any(|v| v.signum() != values[hi].signum() || *v == 0.0)
        {
            return None;
        }
        let mid = len / 2;
        let exponent = -((values[hi] / values[mid]).abs().ln()) / ((hi as f64) / (mid as f64)).ln();
        if !exponent.is_finite() || exponent <= 0.0 {
            return None;
        }
        let scaled: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if i == 0 {
                    0.0
                } else {
                    v * (i as f64).powf(exponent)
                }
            })
            .collect();
        // Least squares for x^p β(x) ≈ b0 + b1/x + b2/x^2 on the last quarter.
        let mut ata = nalgebra::Matrix3::<f64>::zeros();
        let mut atb = nalgebra::Vector3::<f64>::zeros();
        for i in (3 * len / 4)..len {
            let x = i as f64;
            let row = nalgebra::Vector3::new(1.0, 1.0 / x, 1.0 / (x * x));
            ata += row * row.transpose();
            atb += row * scaled[i];
        }
        let sol = ata.lu().solve(&atb)?;
        Some(Self {
            exponent,
            scaled,
            coeffs: [sol[0], sol[1], sol[2]],
        })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Limit of `x^p β(x)`.
    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let len = self.scaled.len();
        let y = if x + 5.0 < len as f64 {
            // 8-point Lagrange interpolation on integer nodes.
            let base = (x.floor() as usize).saturating_sub(3).max(1).min(len - 8);
            let mut acc = 0.0;
            for i in 0..8 {
                let xi = (base + i) as f64;
                let mut l = 1.0;
                for j in 0..8 {
                    if j != i {
                        let xj = (base + j) as f64;
                        l *= (x - xj) / (xi - xj);
                    }
                }
                acc += l * self.scaled[base + i];
            }
            acc
        } else {
            self.coeffs[0] + self.coeffs[1] / x + self.coeffs[2] / (x * x)
        };
        y * x.powf(-self.exponent)
    }
}

/// How `β` is extended past the tabulated lags.
#[derive(Debug, Clone)]
pub enum Continuation {
    /// Exponentially decaying; treated as zero past the table.
    Exponential { rate: f64 },
    /// Closed form for FARIMA models.
    Farima(FarimaKernel),
    /// Interpolated/fitted power-law tail.
    PowerLaw(PowerLawTail),
    /// Nothing known: zero past the table.
    Truncated,
}

/// `β(0..=n_max)` with per-entry truncation estimates.
#[derive(Debug, Clone)]
pub struct BetaSequence {
    values: Vec<f64>,
    variant: BetaVariant,
    tail_bound: Vec<f64>,
    continuation: Continuation,
    closed_form: Option<FarimaKernel>,
}

impl BetaSequence {
    pub fn new(
        values: Vec<f64>,
        variant: BetaVariant,
        tail_bound: Vec<f64>,
        continuation: Continuation,
    ) -> Self {
        assert_eq!(values.len(), tail_bound.len());
        Self {
            values,
            variant,
            tail_bound,
            continuation,
            closed_form: None,
        }
    }

    /// Closed-form `β` for a FARIMA model; the variant is `Minus` when `d < 0`
    /// (the values coincide, see [`FarimaKernel`]).
    pub fn from_farima(spec: &FarimaSpec, n_max: usize) -> Self {
        let kernel = FarimaKernel::new(spec);
        let values: Vec<f64> = (0..=n_max).map(|n| kernel.exact(n)).collect();
        let variant = if spec.d() < 0.0 {
            BetaVariant::Minus
        } else {
            BetaVariant::Standard
        };
        let continuation = if spec.d() == 0.0 {
            Continuation::Exponential {
                rate: kernel.decay_rate(),
            }
        } else {
            Continuation::Farima(kernel.clone())
        };
        Self {
            tail_bound: vec![0.0; values.len()],
            values,
            variant,
            continuation,
            closed_form: Some(kernel),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail_bound(&self) -> &[f64] {
        &self.tail_bound
    }

    pub fn variant(&self) -> BetaVariant {
        self.variant
    }

    pub fn continuation(&self) -> &Continuation {
        &self.continuation
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_tail_bound(&self) -> f64 {
        self.tail_bound.iter().copied().fold(0.0, f64::max)
    }

    /// `β(i)` at an integer index, consulting the continuation past the table.
    pub fn at(&self, i: usize) -> Option<f64> {
        if let Some(v) = self.values.get(i) {
            return Some(*v);
        }
        if let Some(k) = &self.closed_form {
            return Some(k.exact(i));
        }
        match &self.continuation {
            Continuation::PowerLaw(t) => Some(t.eval(i as f64)),
            _ => None,
        }
    }

    /// Smooth extension at a real argument, if one exists.
    pub fn smooth(&self, x: f64) -> Option<f64> {
        match &self.continuation {
            Continuation::Farima(k) => Some(k.smooth(x)),
            Continuation::PowerLaw(t) => Some(t.eval(x)),
            _ => None,
        }
    }
}

/// Shared summation for both variants: `Σ_v first_v second_{v+n+offset}`.
fn summed_beta(
    first: &CoefficientSequence,
    second: &CoefficientSequence,
    offset: usize,
    n_max: usize,
    policy: &TruncationPolicy,
    variant: BetaVariant,
) -> Result<BetaSequence> {
    policy.validate()?;
    let v_max = policy.inner_len;
    let f = first.prefix(v_max + 1)?;
    let s = second.prefix(v_max + n_max + offset + 1)?;
    let (fd, sd) = (first.decay(), second.decay());
    let rate_of = |d: DecayClass| match d {
        DecayClass::Exponential { rate } => Some(rate),
        _ => None,
    };
    let geometric = match (rate_of(fd), rate_of(sd)) {
        (Some(a), Some(b)) => Some(a.max(b).min(a * b).max(a * b)),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    };
    let power = match (fd, sd) {
        (DecayClass::PowerLaw { exponent: p1 }, DecayClass::PowerLaw { exponent: p2 })
            if p1 + p2 > 1.0 =>
        {
            Some((p1, p2))
        }
        _ => None,
    };
    let half_tol = 0.5 * policy.abs_tol;

    let entries: Vec<Result<(f64, f64)>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let shift = n + offset;
            let term = |v: usize| f[v] * s[v + shift];
            let mut acc = CompensatedSum::new();
            let mut v = 0usize;
            let mut block = 256usize.min(v_max + 1);
            // Running sums at each doubling, for the power-law error estimate.
            let mut corrected_prev: Option<f64> = None;
            loop {
                let end = block.min(v_max + 1);
                while v < end {
                    acc.add(term(v));
                    v += 1;
                }
                let last = v - 1;
                let partial = acc.value();
                if let Some(rate) = geometric {
                    let t = term(last).abs();
                    let tail = if rate < 1.0 {
                        t * rate / (1.0 - rate)
                    } else {
                        f64::INFINITY
                    };
                    if tail <= half_tol || t == 0.0 && last > 64 {
                        return Ok((partial, tail.min(half_tol)));
                    }
                } else if let Some((p1, p2)) = power {
                    let lf = last as f64;
                    let k1 = f[last] * lf.powf(p1);
                    let k2 = s[last + shift] * (lf + shift as f64).powf(p2);
                    let tail = k1 * k2 * power_tail_integral(lf + 0.5, shift as f64, p1, p2);
                    if tail.abs() <= half_tol {
                        return Ok((partial, tail.abs()));
                    }
                    let corrected = partial + tail;
                    if end > v_max {
                        let bound = corrected_prev.map_or(tail.abs(), |p| (corrected - p).abs());
                        return Ok((corrected, bound));
                    }
                    corrected_prev = Some(corrected);
                } else {
                    // Unknown decay: compare successive doublings.
                    if let Some(prev) = corrected_prev {
                        if (partial - prev).abs() <= half_tol {
                            return Ok((partial, (partial - prev).abs()));
                        }
                    }
                    corrected_prev = Some(partial);
                }
                if end > v_max {
                    let tail = geometric.map_or(f64::INFINITY, |_| term(last).abs());
                    return Err(Error::Truncation { limit: v_max, tail });
                }
                block *= 2;
            }
        })
        .collect();

    let mut values = Vec::with_capacity(n_max + 1);
    let mut bounds = Vec::with_capacity(n_max + 1);
    for e in entries {
        let (v, b) = e?;
        values.push(v);
        bounds.push(b);
    }
    let continuation = match (geometric, power) {
        (Some(rate), _) => Continuation::Exponential { rate },
        (None, Some(_)) => {
            PowerLawTail::fit(&values).map_or(Continuation::Truncated, Continuation::PowerLaw)
        }
        _ => Continuation::Truncated,
    };
    Ok(BetaSequence {
        values,
        variant,
        tail_bound: bounds,
        continuation,
        closed_form: None,
    })
}

/// `β(n) = Σ_v c_v a_{n+v}` for `n = 0..=n_max`, summed until the tail
/// estimate (geometric or integral) drops below `abs_tol/2`. Power-law sums
/// that cannot get there within `inner_len` terms get the integral tail
/// added as a correction, and the bound is the change of the corrected sum
/// over the last doubling.
pub fn beta_standard(
    c: &CoefficientSequence,
    a: &CoefficientSequence,
    n_max: usize,
    policy: &TruncationPolicy,
) -> Result<BetaSequence> {
    summed_beta(c, a, 0, n_max, policy, BetaVariant::Standard)
}

/// `β_-(n) = Σ_v ψ_v φ_{v+n+1}` for `n = 0..=n_max`.
pub fn beta_minus(
    psi: &CoefficientSequence,
    phi: &CoefficientSequence,
    n_max: usize,
    policy: &TruncationPolicy,
) -> Result<BetaSequence> {
    summed_beta(psi, phi, 1, n_max, policy, BetaVariant::Minus)
}

/// `sup_n n Σ_v |c_v a_{n+v}|` over `1..=n_max`, summing `inner_len` terms:
/// a finite value on growing `n_max` is the numerical face of the O(1/n)
/// condition.
pub fn o_one_over_n_diagnostic(
    c: &CoefficientSequence,
    a: &CoefficientSequence,
    n_max: usize,
    inner_len: usize,
) -> Result<f64> {
    let f = c.prefix(inner_len + 1)?;
    let s = a.prefix(inner_len + n_max + 1)?;
    Ok((1..=n_max)
        .into_par_iter()
        .map(|n| {
            n as f64
                * (0..=inner_len)
                    .map(|v| (f[v] * s[v + n]).abs())
                    .sum::<f64>()
        })
        .reduce(|| 0.0, f64::max))
}
