//! Durbin–Levinson recursion: PACF and prediction variances from `γ`.

use crate::coeffs::CoefficientSequence;
use crate::error::{Error, Result};
use crate::numeric::compensated_dot;
use crate::pacf_repr::PacfSeries;

/// Order-`n` best linear predictor `X_t ≈ Σ_{j=1}^n coeffs[j-1] X_{t-j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevinsonState {
    order: usize,
    coeffs: Vec<f64>,
    var: f64,
    alphas: Vec<f64>,
}

impl LevinsonState {
    pub fn new(gamma0: f64) -> Result<Self> {
        if !(gamma0 > 0.0) {
            return Err(Error::NotPositiveDefinite {
                order: 0,
                variance: gamma0,
            });
        }
        Ok(Self {
            order: 0,
            coeffs: Vec::new(),
            var: gamma0,
            alphas: Vec::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Prediction variance `v_n` at the current order.
    pub fn var(&self) -> f64 {
        self.var
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Advances one order; `gamma` must hold `γ_0..=γ_{order+1}`.
    pub fn step(&mut self, gamma: &[f64]) -> Result<f64> {
        let n = self.order + 1;
        if gamma.len() <= n {
            return Err(Error::Length {
                needed: n,
                available: gamma.len(),
            });
        }
        // α_n = (γ_n - Σ_j φ_{n-1,j} γ_{n-j}) / v_{n-1}
        let back: Vec<f64> = (1..n).map(|j| gamma[n - j]).collect();
        let num = gamma[n] - compensated_dot(&self.coeffs, &back);
        let alpha = num / self.var;
        let var = self.var * (1.0 - alpha * alpha);
        if !(var > 0.0) || alpha.abs() >= 1.0 {
            return Err(Error::NotPositiveDefinite {
                order: n,
                variance: var,
            });
        }
        let prev = self.coeffs.clone();
        for j in 0..prev.len() {
            self.coeffs[j] = prev[j] - alpha * prev[prev.len() - 1 - j];
        }
        self.coeffs.push(alpha);
        self.var = var;
        self.alphas.push(alpha);
        self.order = n;
        Ok(alpha)
    }
}

/// Reflection coefficients `α_1..α_{n_max}`.
///
/// `v[n-1]` is the prediction variance from `n - 1` past values
/// (`V_n = v_{n-1}`) and `u = α v`, both in the scale of `γ`; for a model
/// with `c_0 = 1` this is the normalized convention of the representation.
pub fn pacf_via_levinson(gamma: &CoefficientSequence, n_max: usize) -> Result<PacfSeries> {
    let g = gamma.prefix(n_max + 1)?;
    let mut state = LevinsonState::new(g[0])?;
    let mut out = PacfSeries {
        alpha: Vec::with_capacity(n_max),
        u: Vec::with_capacity(n_max),
        v: Vec::with_capacity(n_max),
        depth_used: Vec::with_capacity(n_max),
        trunc_err: Vec::with_capacity(n_max),
    };
    for n in 1..=n_max {
        let v_prev = state.var();
        let a = state.step(&g)?;
        out.alpha.push(a);
        out.v.push(v_prev);
        out.u.push(a * v_prev);
        out.depth_used.push(n);
        out.trunc_err.push(0.0);
    }
    Ok(out)
}

/// Prediction variances `v_0..=v_{n_max}`.
pub fn prediction_variances(gamma: &CoefficientSequence, n_max: usize) -> Result<Vec<f64>> {
    let g = gamma.prefix(n_max + 1)?;
    let mut state = LevinsonState::new(g[0])?;
    let mut out = vec![state.var()];
    for _ in 0..n_max {
        state.step(&g)?;
        out.push(state.var());
    }
    Ok(out)
}

/// `δ(n) = (v_{n+1} - c_0²) / c_0²` for `n = 1..=n_max`: predicting `X_1`
/// from `[-n, 0]` uses `n + 1` observations, i.e. recursion order `n + 1`.
pub fn delta_ratio(gamma: &CoefficientSequence, c0_sq: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(c0_sq > 0.0) {
        return Err(Error::Domain(format!(
            "c0_sq must be positive, got {c0_sq}"
        )));
    }
    let v = prediction_variances(gamma, n_max + 1)?;
    Ok((1..=n_max).map(|n| (v[n + 1] - c0_sq) / c0_sq).collect())
}
