//! τ_k constants, asymptotic fits and the verification scenarios for the
//! d/n law, ARMA decay, regularly varying covariances, δ(n) and Baxter's
//! condition.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::beta::{beta_standard, BetaSequence};
use crate::coeffs::{
    farima_autocov, CoefficientSequence, DecayClass, FarimaSpec, TruncationPolicy,
};
use crate::error::{Error, Result};
use crate::levinson::{delta_ratio, pacf_via_levinson};
use crate::models::power_law_autocov;
use crate::numeric::gauss_legendre_on;
use crate::pacf_repr::{pacf_at_lag, pacf_via_representation, PacfSeries};
use crate::special::zeta;
use crate::szego::{density_from_autocov, factorize};

/// `τ_{2k-1}` by `τ_1 = 1/π`, `τ_{2k+1} = τ_{2k-1} (2k-1)² / (2k (2k+1))`.
pub fn tau_odd(k: usize) -> f64 {
    assert!(k >= 1, "tau_odd is indexed from 1");
    let mut t = 1.0 / PI;
    for j in 1..k {
        let j = j as f64;
        t *= (2.0 * j - 1.0) * (2.0 * j - 1.0) / (2.0 * j * (2.0 * j + 1.0));
    }
    t
}

/// `Σ_{k=1}^{terms} τ_{2k-1} x^{2k-1}` and the first omitted term.
pub fn arcsin_partial_sum(x: f64, terms: usize) -> (f64, f64) {
    let mut sum = 0.0;
    let mut t = 1.0 / PI;
    let mut pow = x;
    for j in 1..=terms {
        sum += t * pow;
        let jf = j as f64;
        t *= (2.0 * jf - 1.0) * (2.0 * jf - 1.0) / (2.0 * jf * (2.0 * jf + 1.0));
        pow *= x * x;
    }
    (sum, t * pow)
}

/// Nodes for `[0, 1)` on panels `[0, 1/2], [1/2, 3/4], …`, geometrically
/// refined toward 1.
fn graded_unit_rule(points: usize, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(points * panels);
    let mut w = Vec::with_capacity(points * panels);
    let mut lo = 0.0;
    let mut gap = 0.5;
    for _ in 0..panels {
        let (px, pw) = gauss_legendre_on(points, lo, lo + gap);
        x.extend(px);
        w.extend(pw);
        lo += gap;
        gap *= 0.5;
    }
    (x, w)
}

fn tau_quadrature(k: usize, points: usize) -> f64 {
    if k == 1 {
        return 1.0 / PI;
    }
    // With u = s/(1+s) each variable meets exactly two factors (1-u), which
    // cancel the Jacobian: τ_k = π^{-k} ∫_{[0,1]^{k-1}} Π 1/(1 - u_{m+1} u_m).
    let (x, w) = graded_unit_rule(points, 44);
    let mut g = vec![1.0; x.len()];
    for _ in 0..k.saturating_sub(2) {
        g = x
            .iter()
            .map(|&u| {
                x.iter()
                    .zip(&w)
                    .zip(&g)
                    .map(|((&v, &wv), &gv)| wv * gv / (1.0 - u * v))
                    .sum()
            })
            .collect();
    }
    let integral: f64 = w.iter().zip(&g).map(|(a, b)| a * b).sum();
    integral / PI.powi(k as i32)
}

/// `τ_k` from its iterated-integral definition, evaluated as iterated
/// Nyström steps of the compactified kernel. The result is checked against
/// a rule with six more points per panel.
pub fn tau_generic(k: usize, quad_points: usize) -> Result<f64> {
    if k == 0 || k > 6 {
        return Err(Error::Domain(format!(
            "tau_generic supports 1 <= k <= 6, got {k}"
        )));
    }
    if quad_points < 4 {
        return Err(Error::Domain(
            "tau_generic needs at least 4 points per panel".into(),
        ));
    }
    let a = tau_quadrature(k, quad_points);
    let b = tau_quadrature(k, quad_points + 6);
    if (a - b).abs() > 1e-9 * b.abs().max(1e-300) {
        return Err(Error::Accuracy(format!(
            "tau_{k}: {a} vs {b} on the refined rule"
        )));
    }
    Ok(b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauTable {
    /// `τ_1, τ_3, …, τ_{2K-1}`.
    pub odd_taus: Vec<f64>,
    /// `τ_1..τ_k` by quadrature.
    pub generic_taus: Vec<f64>,
}

impl TauTable {
    pub fn build(odd_terms: usize, generic_max: usize, quad_points: usize) -> Result<Self> {
        Ok(Self {
            odd_taus: (1..=odd_terms).map(tau_odd).collect(),
            generic_taus: (1..=generic_max)
                .map(|k| tau_generic(k, quad_points))
                .collect::<Result<_>>()?,
        })
    }
}

/// Power-law fit `y ≈ constant · n^exponent` over a lag window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub exponent: f64,
    pub constant: f64,
    /// Coefficient of determination of the log–log regression; `NaN` when
    /// the values change sign.
    pub r_squared: f64,
    /// Standard deviation of the scaled values behind `constant`.
    pub dispersion: f64,
    pub window: (usize, usize),
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    (slope, intercept, r2)
}

fn check_window(window: &RangeInclusive<usize>, available: usize) -> Result<()> {
    let (lo, hi) = (*window.start(), *window.end());
    if lo == 0 || hi < lo || hi > available {
        return Err(Error::Window(format!(
            "[{lo}, {hi}] with lags 1..={available}"
        )));
    }
    if hi - lo + 1 < 10 {
        return Err(Error::Window(format!(
            "[{lo}, {hi}] has fewer than 10 lags"
        )));
    }
    Ok(())
}

/// Log–log fit of `|values[n-1]|` against `n` over `window`.
pub fn fit_power_law(values: &[f64], window: RangeInclusive<usize>) -> Result<AsymptoticFit> {
    check_window(&window, values.len())?;
    let (lo, hi) = (*window.start(), *window.end());
    let pts: Vec<(f64, f64)> = (lo..=hi).map(|n| (n as f64, values[n - 1])).collect();
    let same_sign = pts.iter().all(|p| p.1 > 0.0) || pts.iter().all(|p| p.1 < 0.0);
    if !same_sign {
        return Err(Error::Window(
            "values change sign or vanish inside the window".into(),
        ));
    }
    let sign = pts[0].1.signum();
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.abs().ln()).collect();
    let (slope, intercept, r2) = linear_fit(&xs, &ys);
    let resid: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).exp())
        .collect();
    Ok(AsymptoticFit {
        exponent: slope,
        constant: sign * intercept.exp(),
        r_squared: r2,
        dispersion: std_dev(&resid) * intercept.exp(),
        window: (lo, hi),
    })
}

fn std_dev(v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt()
}

/// Mean of `n α_n` over `window` (exponent fixed at −1).
pub fn estimate_d(alpha: &PacfSeries, window: RangeInclusive<usize>) -> Result<AsymptoticFit> {
    check_window(&window, alpha.len())?;
    let (lo, hi) = (*window.start(), *window.end());
    let scaled: Vec<f64> = (lo..=hi).map(|n| n as f64 * alpha.alpha_at(n)).collect();
    let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
    let r_squared = fit_power_law(&alpha.alpha, window).map_or(f64::NAN, |f| f.r_squared);
    Ok(AsymptoticFit {
        exponent: -1.0,
        constant: mean,
        r_squared,
        dispersion: std_dev(&scaled),
        window: (lo, hi),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    /// Slope of `log |α_n|` against `n`; `-∞` when the PACF vanishes.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `R = max 1/|u_i|` over MA roots `u_i`.
    pub ma_radius: f64,
    /// `log R + slack`.
    pub bound: f64,
    pub window: (usize, usize),
    pub pass: bool,
}

/// Fits `log |α_n|` linearly in `n` over `window` for a `d = 0` model and
/// checks the slope against `log R + slack`. An identically vanishing PACF
/// (pure AR beyond its order) passes trivially.
pub fn verify_arma_decay(
    spec: &FarimaSpec,
    window: RangeInclusive<usize>,
    slack: f64,
) -> Result<DecayReport> {
    if spec.d() != 0.0 {
        return Err(Error::Domain(format!(
            "ARMA decay needs d = 0, got {}",
            spec.d()
        )));
    }
    let n_max = *window.end();
    check_window(&window, n_max)?;
    let beta = BetaSequence::from_farima(spec, n_max);
    let pacf = pacf_via_representation(&beta, n_max, &TruncationPolicy::default())?;
    let r = spec.ma_root_radius();
    let bound = if r > 0.0 {
        r.ln() + slack
    } else {
        f64::NEG_INFINITY
    };
    let (lo, hi) = (*window.start(), *window.end());
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|n| (n as f64, pacf.alpha_at(n).abs()))
        .filter(|p| p.1 > 0.0 && p.1.is_finite())
        .collect();
    if pts.is_empty() {
        return Ok(DecayReport {
            slope: f64::NEG_INFINITY,
            intercept: f64::NEG_INFINITY,
            r_squared: 1.0,
            ma_radius: r,
            bound,
            window: (lo, hi),
            pass: true,
        });
    }
    if pts.len() < 10 {
        return Err(Error::Window(format!(
            "only {} nonzero α_n in [{lo}, {hi}]",
            pts.len()
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(DecayReport {
        slope,
        intercept,
        r_squared,
        ma_radius: r,
        bound,
        window: (lo, hi),
        pass: slope <= bound,
    })
}

/// Mean `n α_n` over a window for one FARIMA model, by both routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DnLawReport {
    pub d: f64,
    pub window: (usize, usize),
    pub repr_mean: f64,
    pub levinson_mean: f64,
    pub rel_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn verify_dn_law(
    spec: &FarimaSpec,
    window: RangeInclusive<usize>,
    tolerance: f64,
) -> Result<DnLawReport> {
    let d = spec.d();
    if d == 0.0 {
        return Err(Error::Domain("the d/n law needs d != 0".into()));
    }
    let n_max = *window.end();
    let beta = BetaSequence::from_farima(spec, 0);
    let repr = pacf_via_representation(&beta, n_max, &TruncationPolicy::default())?;
    let lev = pacf_via_levinson(&farima_autocov(spec, n_max)?, n_max)?;
    let repr_mean = estimate_d(&repr, window.clone())?.constant;
    let levinson_mean = estimate_d(&lev, window.clone())?.constant;
    let rel_gap = (repr_mean - d).abs() / d.abs();
    Ok(DnLawReport {
        d,
        window: (*window.start(), *window.end()),
        repr_mean,
        levinson_mean,
        rel_gap,
        tolerance,
        pass: rel_gap <= tolerance && repr_mean.signum() == d.signum(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaLawReport {
    pub d: f64,
    pub n: usize,
    /// `n δ(n)`.
    pub scaled_delta: f64,
    pub target: f64,
    pub rel_gap: f64,
    pub pass: bool,
}

/// `n δ(n)` against `d²` for FARIMA(0, d, 0), where `c_0² = 1`.
pub fn verify_delta_law(d: f64, n: usize, tolerance: f64) -> Result<DeltaLawReport> {
    let spec = FarimaSpec::fractional(d)?;
    let gamma = farima_autocov(&spec, n + 1)?;
    let delta = delta_ratio(&gamma, 1.0, n)?;
    let scaled = n as f64 * delta[n - 1];
    let target = d * d;
    let rel_gap = (scaled - target).abs() / target;
    Ok(DeltaLawReport {
        d,
        n,
        scaled_delta: scaled,
        target,
        rel_gap,
        pass: rel_gap <= tolerance,
    })
}

/// Which asymptote of the regularly varying example applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegVarCase {
    /// `α_n ~ d/n`.
    LongMemory,
    /// `α_n ~ 1/(2 n log n)`.
    Logarithmic,
    /// `α_n ~ n^{2d-1} / (2ζ(1-2d) - 1)`.
    Summable,
}

/// The predicted `α_n` for `γ_n = (1+|n|)^{-(1-2d)}`.
pub fn regvar_asymptote(d: f64, n: usize) -> (RegVarCase, f64) {
    let nf = n as f64;
    if d > 0.0 {
        (RegVarCase::LongMemory, d / nf)
    } else if d == 0.0 {
        (RegVarCase::Logarithmic, 1.0 / (2.0 * nf * nf.ln()))
    } else {
        let s = 1.0 - 2.0 * d;
        (RegVarCase::Summable, nf.powf(-s) / (2.0 * zeta(s) - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegVarOptions {
    /// Relative tolerance for `pass`.
    pub tolerance: f64,
    /// Also run the cepstral → β → representation route.
    pub with_repr: bool,
    /// Spectral grid size for that route.
    pub grid_size: usize,
    /// MA/AR coefficients kept from the factorization.
    pub coeff_len: usize,
}

impl Default for RegVarOptions {
    fn default() -> Self {
        Self {
            tolerance: 0.1,
            with_repr: true,
            grid_size: 1 << 20,
            coeff_len: 8192,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteValue {
    pub alpha: f64,
    /// `α / asymptote`.
    pub ratio: f64,
    pub rel_gap: f64,
}

impl RouteValue {
    fn new(alpha: f64, target: f64) -> Self {
        let ratio = alpha / target;
        Self {
            alpha,
            ratio,
            rel_gap: (ratio - 1.0).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegVarReport {
    pub d: f64,
    pub n_probe: usize,
    pub case: RegVarCase,
    pub asymptote: f64,
    /// Durbin–Levinson on the exact `γ`.
    pub levinson: RouteValue,
    /// Factorization route, when requested and successful.
    pub repr: Option<RouteValue>,
    pub repr_trunc_err: Option<f64>,
    pub repr_error: Option<String>,
    pub factorization_residual: Option<f64>,
    pub tolerance: f64,
    /// Both routes within tolerance (only Levinson when the factorization
    /// route was not requested).
    pub pass: bool,
}

/// Checks `α_{n_probe}` for `γ_n = (1+|n|)^{-(1-2d)}` against the asymptote.
pub fn verify_regular_variation(
    d: f64,
    n_probe: usize,
    options: &RegVarOptions,
) -> Result<RegVarReport> {
    if !(d > -0.5 && d < 0.5) || n_probe < 2 {
        return Err(Error::Domain(format!(
            "need -1/2 < d < 1/2 and n_probe >= 2, got d={d}, n={n_probe}"
        )));
    }
    let (case, asymptote) = regvar_asymptote(d, n_probe);
    let gamma = power_law_autocov(d, n_probe + 1);
    let lev = pacf_via_levinson(&gamma, n_probe)?;
    let levinson = RouteValue::new(lev.alpha_at(n_probe), asymptote);
    let mut report = RegVarReport {
        d,
        n_probe,
        case,
        asymptote,
        pass: levinson.rel_gap <= options.tolerance,
        levinson,
        repr: None,
        repr_trunc_err: None,
        repr_error: None,
        factorization_residual: None,
        tolerance: options.tolerance,
    };
    if options.with_repr {
        match regvar_repr_route(d, n_probe, options) {
            Ok((alpha, err, residual)) => {
                let route = RouteValue::new(alpha, asymptote);
                report.pass &= route.rel_gap <= options.tolerance;
                report.repr = Some(route);
                report.repr_trunc_err = Some(err);
                report.factorization_residual = Some(residual);
            }
            Err(e) => {
                report.pass = false;
                report.repr_error = Some(e.to_string());
            }
        }
    }
    Ok(report)
}

fn regvar_repr_route(d: f64, n: usize, options: &RegVarOptions) -> Result<(f64, f64, f64)> {
    let gamma = power_law_autocov(d, 16);
    let fb = factorized_beta(
        &gamma,
        n,
        options.grid_size,
        options.coeff_len,
        &TruncationPolicy::default(),
    )?;
    let est = pacf_at_lag(&fb.beta, n, &fb.policy)?;
    Ok((est.alpha, est.trunc_err, fb.residual))
}

/// β obtained from an autocovariance through the cepstral factorization,
/// with the policy its finite coefficient tables allow.
#[derive(Debug, Clone)]
pub struct FactorizedBeta {
    pub beta: BetaSequence,
    pub policy: TruncationPolicy,
    pub residual: f64,
    pub resolution_gap: f64,
}

/// Factorizes `gamma` on a `grid_size` grid, keeps `coeff_len` MA/AR
/// coefficients and tabulates β far enough for lags up to `n_max`.
///
/// A power-law `γ_n ~ n^{-(1-2d)}` is taken to give `c_n ~ n^{d-1}` and
/// `a_n ~ n^{-d-1}`, so the β sums get an integral tail; any other decay is
/// summed by doubling.
pub fn factorized_beta(
    gamma: &CoefficientSequence,
    n_max: usize,
    grid_size: usize,
    coeff_len: usize,
    base: &TruncationPolicy,
) -> Result<FactorizedBeta> {
    let grid = density_from_autocov(gamma, grid_size)?;
    let f = factorize(&grid, coeff_len, 1e-8)?;
    let (c_decay, a_decay) = match gamma.decay() {
        DecayClass::PowerLaw { exponent } => {
            let d = (1.0 - exponent) / 2.0;
            (
                DecayClass::PowerLaw { exponent: 1.0 - d },
                DecayClass::PowerLaw { exponent: 1.0 + d },
            )
        }
        _ => (DecayClass::Unknown, DecayClass::Unknown),
    };
    let c = CoefficientSequence::new(f.c.values().to_vec(), f.c.kind(), c_decay);
    let a = CoefficientSequence::new(f.a.values().to_vec(), f.a.kind(), a_decay);
    let table = (n_max + 1024).min(coeff_len / 2);
    if table <= n_max + 64 {
        return Err(Error::Length {
            needed: 2 * (n_max + 65),
            available: coeff_len,
        });
    }
    let policy = TruncationPolicy {
        inner_len: coeff_len - table - 1,
        ..*base
    };
    let beta = beta_standard(&c, &a, table, &policy)?;
    Ok(FactorizedBeta {
        beta,
        policy,
        residual: f.residual,
        resolution_gap: f.resolution_gap,
    })
}

/// Growth of a partial-sum sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Growth {
    Bounded,
    Log,
    Power,
}

/// Increment ratio over the last doubling below which partial sums count
/// as convergent.
pub const BOUNDED_RATIO: f64 = 0.85;
/// Increment ratio above which growth is classed as a power.
pub const POWER_RATIO: f64 = 1.12;

/// Classifies `S` by `(S(N) - S(N/2)) / (S(N/2) - S(N/4))` at `N = len - 1`:
/// about `2^{-ε}` for a convergent power tail, 1 for logarithmic growth and
/// `2^{ε}` for power growth.
pub fn classify_growth(partial: &[f64]) -> (Growth, f64) {
    let n = partial.len() - 1;
    let (a, b, c) = (partial[n], partial[n / 2], partial[n / 4]);
    let (late, early) = (a - b, b - c);
    if late <= 1e-12 * a.abs().max(1e-300) || early <= 0.0 {
        return (Growth::Bounded, 0.0);
    }
    let ratio = late / early;
    let g = if ratio < BOUNDED_RATIO {
        Growth::Bounded
    } else if ratio <= POWER_RATIO {
        Growth::Log
    } else {
        Growth::Power
    };
    (g, ratio)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaxterReport {
    pub n_max: usize,
    /// `(n, Σ_{k≤n} |α_k|)` at powers of two and `n_max`.
    pub alpha_partial_sums: Vec<(usize, f64)>,
    /// `(n, Σ_{k≤n} |γ_k|)` at the same lags.
    pub gamma_partial_sums: Vec<(usize, f64)>,
    pub alpha_growth: Growth,
    pub alpha_ratio: f64,
    pub gamma_growth: Growth,
    pub gamma_ratio: f64,
    /// Non-summable autocovariance.
    pub long_memory_classical: bool,
    /// Non-summable PACF, i.e. failure of Baxter's condition.
    pub long_memory_baxter: bool,
    pub definitions_agree: bool,
}

pub fn baxter_diagnostic(alpha: &PacfSeries, gamma: &CoefficientSequence) -> Result<BaxterReport> {
    let n_max = alpha.len();
    if n_max < 8 {
        return Err(Error::Window(format!("need at least 8 lags, got {n_max}")));
    }
    let g = gamma.prefix(n_max + 1)?;
    let mut sa = vec![0.0];
    let mut sg = vec![g[0].abs()];
    for n in 1..=n_max {
        sa.push(sa[n - 1] + alpha.alpha_at(n).abs());
        sg.push(sg[n - 1] + g[n].abs());
    }
    let mut marks: Vec<usize> = (0..)
        .map(|j| 1usize << j)
        .take_while(|&m| m < n_max)
        .collect();
    marks.push(n_max);
    let (alpha_growth, alpha_ratio) = classify_growth(&sa);
    let (gamma_growth, gamma_ratio) = classify_growth(&sg);
    let long_memory_classical = gamma_growth != Growth::Bounded;
    let long_memory_baxter = alpha_growth != Growth::Bounded;
    Ok(BaxterReport {
        n_max,
        alpha_partial_sums: marks.iter().map(|&m| (m, sa[m])).collect(),
        gamma_partial_sums: marks.iter().map(|&m| (m, sg[m])).collect(),
        alpha_growth,
        alpha_ratio,
        gamma_growth,
        gamma_ratio,
        long_memory_classical,
        long_memory_baxter,
        definitions_agree: long_memory_classical == long_memory_baxter,
    })
}

/// Observed ratios over a window; informational only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub window: (usize, usize),
    pub ratios: Vec<(usize, f64)>,
    pub mean: f64,
    /// Set when every ratio in the window is undefined.
    pub skipped: bool,
}

fn ratio_report(window: RangeInclusive<usize>, f: impl Fn(usize) -> (f64, f64)) -> RatioReport {
    let (lo, hi) = (*window.start(), *window.end());
    let ratios: Vec<(usize, f64)> = (lo..=hi)
        .filter_map(|n| {
            let (num, den) = f(n);
            (den != 0.0 && (num != 0.0 || den != 0.0)).then(|| (n, num / den))
        })
        .collect();
    let skipped = ratios.is_empty();
    let mean = if skipped {
        f64::NAN
    } else {
        ratios.iter().map(|r| r.1).sum::<f64>() / ratios.len() as f64
    };
    RatioReport {
        window: (lo, hi),
        ratios,
        mean,
        skipped,
    }
}

/// `α_n / β(n)`; compare with [`alpha_beta_limit`].
pub fn alpha_beta_ratio_probe(
    alpha: &PacfSeries,
    beta: &BetaSequence,
    window: RangeInclusive<usize>,
) -> Result<RatioReport> {
    let hi = *window.end();
    if *window.start() == 0 || hi > alpha.len() || hi >= beta.len() || window.is_empty() {
        return Err(Error::Window(format!(
            "[{}, {hi}] outside the computed lags",
            window.start()
        )));
    }
    Ok(ratio_report(window, |n| {
        (alpha.alpha_at(n), beta.values()[n])
    }))
}

/// Limit of `α_n / β(n)`: `πd / sin(πd)` for `0 < d < 1/2`, else 1.
pub fn alpha_beta_limit(d: f64) -> f64 {
    if d > 0.0 {
        PI * d / (PI * d).sin()
    } else {
        1.0
    }
}

/// `α_n / (γ_n / Σ_{|k|≤n} γ_k)`; the relation is conjectural, so this only
/// reports.
pub fn covariance_ratio_probe(
    alpha: &PacfSeries,
    gamma: &CoefficientSequence,
    window: RangeInclusive<usize>,
) -> Result<RatioReport> {
    let hi = *window.end();
    if *window.start() == 0 || hi > alpha.len() || window.is_empty() {
        return Err(Error::Window(format!(
            "[{}, {hi}] outside the computed lags",
            window.start()
        )));
    }
    let g = gamma.prefix(hi + 1)?;
    let mut two_sided = vec![g[0]];
    for n in 1..=hi {
        two_sided.push(two_sided[n - 1] + 2.0 * g[n]);
    }
    Ok(ratio_report(window, |n| {
        (alpha.alpha_at(n), g[n] / two_sided[n])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn odd_taus_closed_form() {
        assert_relative_eq!(tau_odd(1), 1.0 / PI, max_relative = 1e-15);
        assert_relative_eq!(tau_odd(2), 1.0 / (6.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(tau_odd(3), 3.0 / (40.0 * PI), max_relative = 1e-15);
    }

    #[test]
    fn generic_taus_low_order() {
        assert_relative_eq!(tau_generic(2, 16).unwrap(), 1.0 / (PI * PI), epsilon = 1e-8);
        assert_relative_eq!(tau_generic(3, 16).unwrap(), tau_odd(2), epsilon = 1e-10);
        assert!(tau_generic(7, 16).is_err());
    }

    #[test]
    fn growth_classes() {
        let bounded: Vec<f64> = (0..=4096).map(|n| 1.0 - 1.0 / (1.0 + n as f64)).collect();
        assert_eq!(classify_growth(&bounded).0, Growth::Bounded);
        let log: Vec<f64> = (0..=4096).map(|n| (1.0 + n as f64).ln()).collect();
        assert_eq!(classify_growth(&log).0, Growth::Log);
        let power: Vec<f64> = (0..=4096).map(|n| (n as f64).sqrt()).collect();
        assert_eq!(classify_growth(&power).0, Growth::Power);
    }

    #[test]
    fn regvar_asymptotes() {
        let (case, v) = regvar_asymptote(0.3, 100);
        assert_eq!(case, RegVarCase::LongMemory);
        assert_relative_eq!(v, 0.003, max_relative = 1e-15);
        assert_eq!(regvar_asymptote(0.0, 10).0, RegVarCase::Logarithmic);
        assert_eq!(regvar_asymptote(-0.3, 10).0, RegVarCase::Summable);
    }
}
