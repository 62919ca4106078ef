//! MA(∞), AR(∞), ψ/φ and autocovariance sequences of fractional ARIMA
//! models, all generated from closed-form recursions.
//!
//! Conventions: `D(z) = Θ(z)/Φ(z) · (1 - z)^{-d} = Σ c_n z^n` is the Szegő
//! function and `-1/D(z) = Σ a_n z^n`, so `c_0 = 1` and `a_0 = -1` once the
//! polynomials are normalized to constant term 1. The spectral density is
//! `|D(e^{iθ})|² / (2π)` and `γ_n = Σ_v c_v c_{v+|n|}`.

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    binomial_series, compensated_sum, poly_eval, power_tail_integral, series_div_poly, series_mul,
    CompensatedSum,
};

/// Tolerance on `|root| - 1` when checking the unit-disk condition.
pub const ROOT_MODULUS_TOL: f64 = 1e-8;
/// Two roots closer than this are treated as a common factor.
pub const ROOT_MATCH_TOL: f64 = 1e-6;

/// Parameters of a causal, invertible FARIMA(p, d, q) model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarimaSpec {
    d: f64,
    phi: Vec<f64>,
    theta: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSpec {
    d: f64,
    #[serde(default = "unit_poly")]
    phi: Vec<f64>,
    #[serde(default = "unit_poly")]
    theta: Vec<f64>,
}

fn unit_poly() -> Vec<f64> {
    vec![1.0]
}

impl<'de> Deserialize<'de> for FarimaSpec {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = RawSpec::deserialize(deserializer)?;
        FarimaSpec::new(raw.d, raw.phi, raw.theta).map_err(serde::de::Error::custom)
    }
}

impl FarimaSpec {
    /// Builds and validates a model. Both polynomials are given in ascending
    /// powers and are rescaled so their constant term is 1; trailing zeros
    /// are dropped.
    pub fn new(d: f64, phi: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if !d.is_finite() || d.abs() >= 0.5 {
            return Err(Error::InvalidModel(format!(
                "memory parameter d = {d} must satisfy |d| < 1/2"
            )));
        }
        let phi = normalize_poly("phi", phi)?;
        let theta = normalize_poly("theta", theta)?;
        for (name, p) in [("phi", &phi), ("theta", &theta)] {
            for r in poly_roots(p) {
                if r.norm() <= 1.0 + ROOT_MODULUS_TOL {
                    return Err(Error::InvalidModel(format!(
                        "{name} has a zero at {r:.6} inside or on the unit circle"
                    )));
                }
            }
        }
        for u in poly_roots(&phi) {
            for v in poly_roots(&theta) {
                if (u - v).norm() < ROOT_MATCH_TOL {
                    return Err(Error::InvalidModel(format!(
                        "phi and theta share the zero {u:.6}"
                    )));
                }
            }
        }
        Ok(Self { d, phi, theta })
    }

    /// FARIMA(0, d, 0).
    pub fn fractional(d: f64) -> Result<Self> {
        Self::new(d, vec![1.0], vec![1.0])
    }

    pub fn white_noise() -> Self {
        Self {
            d: 0.0,
            phi: vec![1.0],
            theta: vec![1.0],
        }
    }

    /// Parses `{"d": 0.3, "phi": [1.0, -0.5], "theta": [1.0]}`. The leading
    /// coefficient of each polynomial must be exactly 1.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidModel(format!("model JSON: {e}")))?;
        for (name, p) in [("phi", &raw.phi), ("theta", &raw.theta)] {
            if p.first() != Some(&1.0) {
                return Err(Error::InvalidModel(format!("{name}[0] must be 1.0")));
            }
        }
        Self::new(raw.d, raw.phi, raw.theta)
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn p(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn q(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn is_white_noise(&self) -> bool {
        self.d == 0.0 && self.p() == 0 && self.q() == 0
    }

    /// `K_1 = Θ(1)/Φ(1)` under the constant-term-1 normalization.
    pub fn k1(&self) -> f64 {
        poly_eval(&self.theta, 1.0) / poly_eval(&self.phi, 1.0)
    }

    pub fn phi_roots(&self) -> Vec<Complex64> {
        poly_roots(&self.phi)
    }

    pub fn theta_roots(&self) -> Vec<Complex64> {
        poly_roots(&self.theta)
    }

    /// `R = max 1/|u|` over the zeros of Θ, or 0 when Θ is constant.
    pub fn ma_root_radius(&self) -> f64 {
        inverse_root_radius(&self.theta)
    }

    /// `max 1/|u|` over the zeros of Φ, or 0 when Φ is constant.
    pub fn ar_root_radius(&self) -> f64 {
        inverse_root_radius(&self.phi)
    }
}

impl fmt::Display for FarimaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FARIMA({}, {}, {}) phi={:?} theta={:?}",
            self.p(),
            self.d,
            self.q(),
            self.phi,
            self.theta
        )
    }
}

fn normalize_poly(name: &str, mut p: Vec<f64>) -> Result<Vec<f64>> {
    if p.is_empty() {
        p.push(1.0);
    }
    if p.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidModel(format!(
            "{name} has non-finite coefficients"
        )));
    }
    while p.len() > 1 && *p.last().unwrap() == 0.0 {
        p.pop();
    }
    let c0 = p[0];
    if c0 == 0.0 {
        return Err(Error::InvalidModel(format!(
            "{name} has a zero at the origin"
        )));
    }
    Ok(p.into_iter().map(|c| c / c0).collect())
}

/// Zeros of a polynomial with ascending coefficients, as eigenvalues of the
/// companion matrix.
pub fn poly_roots(p: &[f64]) -> Vec<Complex64> {
    let deg = p.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    if deg == 0 {
        return Vec::new();
    }
    let lead = p[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -p[i] / lead;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

fn inverse_root_radius(p: &[f64]) -> f64 {
    poly_roots(p)
        .iter()
        .map(|r| 1.0 / r.norm())
        .fold(0.0, f64::max)
}

/// Which sequence a [`CoefficientSequence`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Ma,
    Ar,
    Psi,
    Phi,
    Beta,
    Autocov,
}

/// Asymptotic decay of `|x_n|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum DecayClass {
    /// `|x_n| = O(rate^n)` with `rate < 1`.
    Exponential {
        rate: f64,
    },
    /// `|x_n| ~ K n^{-exponent}`.
    PowerLaw {
        exponent: f64,
    },
    Unknown,
}

/// How the outer series over `k` in the PACF representation is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OuterSummation {
    /// Solve `(I - K²) y = b` by GMRES; all `k` are summed at once.
    #[default]
    Resolvent,
    /// Explicit `d_k` iteration with the geometric stopping rule.
    Series,
}

/// Cutoffs and tolerance targets for every infinite sum.
///
/// `mid_len` caps the number of exact integer nodes in each `m`-sum; far
/// tails of those sums are integrated against the smooth continuation of
/// `β` when one exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub inner_len: usize,
    pub mid_len: usize,
    pub outer_depth: usize,
    pub abs_tol: f64,
    #[serde(default)]
    pub outer: OuterSummation,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            inner_len: 1 << 16,
            mid_len: 5000,
            outer_depth: 600,
            abs_tol: 1e-10,
            outer: OuterSummation::Resolvent,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.inner_len == 0 || self.mid_len == 0 || self.outer_depth == 0 {
            return Err(Error::Domain(
                "truncation lengths must be at least 1".into(),
            ));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Domain(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        Ok(())
    }
}

pub type Generator = Arc<dyn Fn(usize) -> Result<Vec<f64>> + Send + Sync>;

/// A real sequence indexed from 0, optionally able to regenerate itself at a
/// longer length.
#[derive(Clone)]
pub struct CoefficientSequence {
    values: Vec<f64>,
    kind: SequenceKind,
    decay: DecayClass,
    generator: Option<Generator>,
}

impl fmt::Debug for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSequence")
            .field("kind", &self.kind)
            .field("decay", &self.decay)
            .field("len", &self.values.len())
            .field("extendable", &self.generator.is_some())
            .finish()
    }
}

impl CoefficientSequence {
    pub fn new(values: Vec<f64>, kind: SequenceKind, decay: DecayClass) -> Self {
        Self {
            values,
            kind,
            decay,
            generator: None,
        }
    }

    /// Attaches a generator; `generator(len)` must return the first `len` values.
    pub fn with_generator(mut self, generator: Generator) -> Self {
        self.generator = Some(generator);
        self
    }

    /// Autocovariance sequence `γ_0, γ_1, ...` supplied directly.
    pub fn autocov(values: Vec<f64>, decay: DecayClass) -> Result<Self> {
        let g0 = *values
            .first()
            .ok_or_else(|| Error::InvalidModel("empty autocovariance".into()))?;
        if !(g0 > 0.0) {
            return Err(Error::InvalidModel(format!(
                "gamma_0 = {g0} must be positive"
            )));
        }
        if let Some((n, g)) = values
            .iter()
            .enumerate()
            .find(|(_, g)| !g.is_finite() || g.abs() > g0 * (1.0 + 1e-12))
        {
            return Err(Error::InvalidModel(format!(
                "|gamma_{n}| = {g} exceeds gamma_0"
            )));
        }
        Ok(Self::new(values, SequenceKind::Autocov, decay))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_extendable(&self) -> bool {
        self.generator.is_some()
    }

    /// Grows the stored values to at least `len` entries.
    pub fn extend_to(&mut self, len: usize) -> Result<()> {
        if len <= self.values.len() {
            return Ok(());
        }
        let gen = self.generator.as_ref().ok_or(Error::Length {
            needed: len - 1,
            available: self.values.len(),
        })?;
        self.values = gen(len)?;
        Ok(())
    }

    /// The first `len` values, generated on the fly if they are not stored.
    pub fn prefix(&self, len: usize) -> Result<Cow<'_, [f64]>> {
        if len <= self.values.len() {
            return Ok(Cow::Borrowed(&self.values[..len]));
        }
        match &self.generator {
            Some(gen) => Ok(Cow::Owned(gen(len)?)),
            None => Err(Error::Length {
                needed: len - 1,
                available: self.values.len(),
            }),
        }
    }
}

fn checked_len(n_max: usize) -> Result<usize> {
    n_max
        .checked_add(1)
        .filter(|&l| l <= isize::MAX as usize / std::mem::size_of::<f64>())
        .ok_or_else(|| Error::Range(format!("n_max = {n_max} overflows the index type")))
}

fn ma_values(spec: &FarimaSpec, len: usize) -> Vec<f64> {
    let frac = binomial_series(spec.d, len);
    let num = series_mul(&frac, &spec.theta, len);
    series_div_poly(&num, &spec.phi, len)
}

fn ar_values(spec: &FarimaSpec, len: usize) -> Vec<f64> {
    let frac = binomial_series(-spec.d, len);
    let num = series_mul(&frac, &spec.phi, len);
    series_div_poly(&num, &spec.theta, len)
        .into_iter()
        .map(|v| -v)
        .collect()
}

fn ma_decay(spec: &FarimaSpec) -> DecayClass {
    if spec.d == 0.0 {
        DecayClass::Exponential {
            rate: spec.ar_root_radius(),
        }
    } else {
        DecayClass::PowerLaw {
            exponent: 1.0 - spec.d,
        }
    }
}

fn ar_decay(spec: &FarimaSpec) -> DecayClass {
    if spec.d == 0.0 {
        DecayClass::Exponential {
            rate: spec.ma_root_radius(),
        }
    } else {
        DecayClass::PowerLaw {
            exponent: 1.0 + spec.d,
        }
    }
}

/// MA coefficients `c_0..=c_{n_max}` of `Θ(z)/Φ(z) (1 - z)^{-d}`.
pub fn farima_ma_coeffs(spec: &FarimaSpec, n_max: usize) -> Result<CoefficientSequence> {
    let len = checked_len(n_max)?;
    let s = spec.clone();
    Ok(
        CoefficientSequence::new(ma_values(spec, len), SequenceKind::Ma, ma_decay(spec))
            .with_generator(Arc::new(move |l| Ok(ma_values(&s, l)))),
    )
}

/// AR coefficients `a_0..=a_{n_max}` of `-Φ(z)/Θ(z) (1 - z)^{d}`; `a_0 = -1`.
pub fn farima_ar_coeffs(spec: &FarimaSpec, n_max: usize) -> Result<CoefficientSequence> {
    let len = checked_len(n_max)?;
    let s = spec.clone();
    Ok(
        CoefficientSequence::new(ar_values(spec, len), SequenceKind::Ar, ar_decay(spec))
            .with_generator(Arc::new(move |l| Ok(ar_values(&s, l)))),
    )
}

fn psi_values(spec: &FarimaSpec, len: usize) -> Vec<f64> {
    // For d < 0, D(1) = 0 so Σ_k c_k = 0 and ψ_n = -Σ_{k>n} c_k = Σ_{k<=n} c_k.
    let c = ma_values(spec, len);
    let mut acc = CompensatedSum::new();
    c.iter()
        .map(|&ck| {
            acc.add(ck);
            acc.value()
        })
        .collect()
}

fn phi_values(spec: &FarimaSpec, len: usize) -> Vec<f64> {
    let a = ar_values(spec, len);
    (0..len)
        .map(|n| if n == 0 { -a[0] } else { a[n - 1] - a[n] })
        .collect()
}

/// `ψ_n = -Σ_{k>n} c_k` and `φ_0 = -a_0`, `φ_n = a_{n-1} - a_n`, defined for
/// `-1/2 < d < 0`.
///
/// The tail sum is never formed: with `d < 0` the factor `(1 - z)^{-d}`
/// vanishes at `z = 1`, so `Σ_k c_k = D(1) = 0` and `ψ_n` equals the partial
/// sum `Σ_{k<=n} c_k`. Equivalently `Σ ψ_n z^n = D(z)/(1 - z)` and
/// `Σ φ_n z^n = -(1 - z) Σ a_n z^n`.
pub fn psi_phi_coeffs(
    spec: &FarimaSpec,
    n_max: usize,
) -> Result<(CoefficientSequence, CoefficientSequence)> {
    if spec.d >= 0.0 {
        return Err(Error::Domain(format!(
            "psi/phi are defined for d < 0, got d = {}",
            spec.d
        )));
    }
    let len = checked_len(n_max)?;
    let q = 1.0 + spec.d;
    let (s1, s2) = (spec.clone(), spec.clone());
    let psi = CoefficientSequence::new(
        psi_values(spec, len),
        SequenceKind::Psi,
        DecayClass::PowerLaw { exponent: 1.0 - q },
    )
    .with_generator(Arc::new(move |l| Ok(psi_values(&s1, l))));
    let phi = CoefficientSequence::new(
        phi_values(spec, len),
        SequenceKind::Phi,
        DecayClass::PowerLaw { exponent: 1.0 + q },
    )
    .with_generator(Arc::new(move |l| Ok(phi_values(&s2, l))));
    Ok((psi, phi))
}

/// `γ_n = Σ_{v=0}^{tail_len} c_v c_{n+v}` for `n = 0..=n_max`, plus an
/// integral estimate of the dropped tail when `c` decays like a power law.
pub fn autocov_from_ma(
    c: &CoefficientSequence,
    n_max: usize,
    tail_len: usize,
) -> Result<CoefficientSequence> {
    let len = checked_len(n_max)?;
    let needed = n_max
        .checked_add(tail_len)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::Range("n_max + tail_len overflows".into()))?;
    let vals = c.prefix(needed)?;
    let v_last = tail_len;
    let gamma: Vec<f64> = (0..len)
        .map(|n| {
            let head = compensated_sum((0..=v_last).map(|v| vals[v] * vals[n + v]));
            let tail = match c.decay() {
                DecayClass::PowerLaw { exponent } if v_last > 0 => {
                    // c_v ≈ K v^{-p}: fit K at the last retained index.
                    let k_at = |i: usize| vals[i] * (i as f64).powf(exponent);
                    let k0 = k_at(v_last);
                    let k1 = k_at(v_last + n);
                    k0 * k1 * power_tail_integral(v_last as f64 + 0.5, n as f64, exponent, exponent)
                }
                _ => 0.0,
            };
            head + tail
        })
        .collect();
    let decay = match c.decay() {
        DecayClass::PowerLaw { exponent } => DecayClass::PowerLaw {
            exponent: 2.0 * exponent - 1.0,
        },
        other => other,
    };
    CoefficientSequence::autocov(gamma, decay)
}

/// Autocovariance of FARIMA(0, d, 0) with unit innovation variance:
/// `γ_0 = Γ(1-2d)/Γ(1-d)^2`, `γ_n = γ_{n-1} (n-1+d)/(n-d)`.
pub fn fractional_noise_autocov(d: f64, len: usize) -> Vec<f64> {
    use crate::special::gamma;
    let g0 = if d == 0.0 {
        1.0
    } else {
        gamma(1.0 - 2.0 * d) / gamma(1.0 - d).powi(2)
    };
    let mut out = Vec::with_capacity(len);
    let mut g = g0;
    for n in 0..len {
        if n > 0 {
            let nf = n as f64;
            g *= (nf - 1.0 + d) / (nf - d);
        }
        out.push(g);
    }
    out
}

/// Exact autocovariance of a FARIMA model: the FARIMA(0, d, 0) covariance
/// convolved with the autocovariance of the ARMA filter `Θ/Φ`.
pub fn farima_autocov(spec: &FarimaSpec, n_max: usize) -> Result<CoefficientSequence> {
    let len = checked_len(n_max)?;
    let rho = spec.ar_root_radius();
    let filter_len = if spec.p() == 0 {
        spec.q() + 1
    } else {
        ((1e-19f64).ln() / rho.ln()).ceil() as usize + spec.q() + 16
    };
    let h = series_div_poly(&spec.theta, &spec.phi, 2 * filter_len);
    let g: Vec<f64> = (0..filter_len)
        .map(|j| compensated_sum((0..filter_len).map(|v| h[v] * h[v + j])))
        .collect();
    let frac = fractional_noise_autocov(spec.d, len + filter_len);
    let gamma = (0..len)
        .map(|n| {
            compensated_sum((0..filter_len).flat_map(|j| {
                let left = g[j] * frac[n.abs_diff(j)];
                let right = if j > 0 { g[j] * frac[n + j] } else { 0.0 };
                [left, right]
            }))
        })
        .collect();
    let decay = if spec.d == 0.0 {
        DecayClass::Exponential { rate: rho }
    } else {
        DecayClass::PowerLaw {
            exponent: 1.0 - 2.0 * spec.d,
        }
    };
    CoefficientSequence::autocov(gamma, decay)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fractional_ma_first_terms() {
        let spec = FarimaSpec::fractional(0.3).unwrap();
        let c = farima_ma_coeffs(&spec, 2).unwrap();
        assert_relative_eq!(c.values()[0], 1.0);
        assert_relative_eq!(c.values()[1], 0.3, epsilon = 1e-15);
        assert_relative_eq!(c.values()[2], 0.195, epsilon = 1e-15);
    }

    #[test]
    fn white_noise_coefficients() {
        let spec = FarimaSpec::white_noise();
        assert_eq!(
            farima_ma_coeffs(&spec, 3).unwrap().values(),
            &[1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            farima_ar_coeffs(&spec, 2).unwrap().values(),
            &[-1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn ar_filtered_fractional_ma() {
        let spec = FarimaSpec::new(0.3, vec![1.0, -0.5], vec![1.0]).unwrap();
        let c = farima_ma_coeffs(&spec, 1).unwrap();
        assert_relative_eq!(c.values()[1], 0.8, epsilon = 1e-15);
    }

    #[test]
    fn fractional_ar_first_terms() {
        let spec = FarimaSpec::fractional(0.3).unwrap();
        let a = farima_ar_coeffs(&spec, 2).unwrap();
        assert_eq!(a.values()[0], -1.0);
        assert_relative_eq!(a.values()[1], 0.3, epsilon = 1e-15);
        assert_relative_eq!(a.values()[2], 0.105, epsilon = 1e-15);
    }

    #[test]
    fn rejects_invalid_models() {
        assert!(matches!(
            FarimaSpec::fractional(0.5),
            Err(Error::InvalidModel(_))
        ));
        assert!(matches!(
            FarimaSpec::fractional(-0.7),
            Err(Error::InvalidModel(_))
        ));
        // unit root
        assert!(FarimaSpec::new(0.0, vec![1.0, -1.0], vec![1.0]).is_err());
        // root inside the disk
        assert!(FarimaSpec::new(0.0, vec![1.0], vec![1.0, 2.0]).is_err());
        // common factor (1 - 0.5 z)
        assert!(FarimaSpec::new(0.1, vec![1.0, -0.5], vec![1.0, -0.5]).is_err());
        assert!(FarimaSpec::new(0.1, vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn normalizes_constant_term() {
        let spec = FarimaSpec::new(0.0, vec![2.0, -1.0], vec![4.0, 0.0]).unwrap();
        assert_eq!(spec.phi(), &[1.0, -0.5]);
        assert_eq!(spec.theta(), &[1.0]);
    }

    #[test]
    fn json_config() {
        let spec =
            FarimaSpec::from_json(r#"{ "d": 0.3, "phi": [1.0, -0.5], "theta": [1.0] }"#).unwrap();
        assert_eq!(spec.phi(), &[1.0, -0.5]);
        assert!(FarimaSpec::from_json(r#"{ "d": 0.3, "phi": [2.0, -0.5] }"#).is_err());
        assert!(FarimaSpec::from_json("{ not json").is_err());
        let via_serde: FarimaSpec = serde_json::from_str(r#"{"d": -0.2}"#).unwrap();
        assert_eq!(via_serde, FarimaSpec::fractional(-0.2).unwrap());
    }

    #[test]
    fn root_radii() {
        let spec = FarimaSpec::new(0.0, vec![1.0, -0.5], vec![1.0, 0.4]).unwrap();
        assert_relative_eq!(spec.ma_root_radius(), 0.4, epsilon = 1e-12);
        assert_relative_eq!(spec.ar_root_radius(), 0.5, epsilon = 1e-12);
        assert_eq!(FarimaSpec::white_noise().ma_root_radius(), 0.0);
        assert_relative_eq!(spec.k1(), 1.4 / 0.5);
    }

    #[test]
    fn psi_phi_domain_and_first_terms() {
        assert!(matches!(
            psi_phi_coeffs(&FarimaSpec::fractional(0.2).unwrap(), 4),
            Err(Error::Domain(_))
        ));
        let spec = FarimaSpec::fractional(-0.3).unwrap();
        let (psi, phi) = psi_phi_coeffs(&spec, 4).unwrap();
        assert_eq!(phi.values()[0], 1.0);
        assert_eq!(psi.values()[0], 1.0);
    }

    #[test]
    fn white_noise_autocov() {
        let c = farima_ma_coeffs(&FarimaSpec::white_noise(), 10).unwrap();
        let g = autocov_from_ma(&c, 4, 5).unwrap();
        assert_eq!(g.values(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn ma1_autocov() {
        let spec = FarimaSpec::new(0.0, vec![1.0], vec![1.0, 0.5]).unwrap();
        let g = farima_autocov(&spec, 3).unwrap();
        assert_relative_eq!(g.values()[0], 1.25, epsilon = 1e-15);
        assert_relative_eq!(g.values()[1], 0.5, epsilon = 1e-15);
        assert_eq!(g.values()[2], 0.0);
    }

    #[test]
    fn length_error_without_generator() {
        let c = CoefficientSequence::new(vec![1.0, 0.5], SequenceKind::Ma, DecayClass::Unknown);
        assert!(matches!(
            autocov_from_ma(&c, 3, 2),
            Err(Error::Length { .. })
        ));
    }

    #[test]
    fn extend_on_demand() {
        let mut c = farima_ma_coeffs(&FarimaSpec::fractional(0.2).unwrap(), 3).unwrap();
        c.extend_to(100).unwrap();
        assert_eq!(c.len(), 100);
        let fresh = farima_ma_coeffs(&FarimaSpec::fractional(0.2).unwrap(), 99).unwrap();
        assert_eq!(c.values(), fresh.values());
    }
}
