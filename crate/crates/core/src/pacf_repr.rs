//! PACF from the kernel `β` via `α_n = Σ_{k odd} d_k(n) / (1 + Σ_{k even} d_k(n))`.
//!
//! With `b[m] = β(m + n)` and the Hankel operator `H[m, m'] = β(m + m' + n)`,
//! `d_1 = β(n)` and `d_k = ⟨b, H^{k-2} b⟩` for `k ≥ 2`. The index sums over
//! `m` are discretized once per lag as a weighted node set:
//!
//! * exact integer nodes `0..x0+G`, the last `G + 1` of them carrying
//!   Gregory endpoint weights;
//! * Gauss–Legendre nodes on logarithmic panels `x = x0 e^u` covering the
//!   far tail, evaluated with the smooth continuation of `β`.
//!
//! Without a smooth continuation (exponentially decaying `β`) only integer
//! nodes are used, out to where `β` is negligible.
//!
//! Both outer sums are then obtained from one linear solve:
//! `Σ_{k even ≥ 2} d_k = bᵀW y` and `Σ_{k odd ≥ 3} d_k = bᵀW K y` where
//! `K = H W` and `(I - K²) y = b`.

use rayon::prelude::*;
use serde::Serialize;

use crate::beta::{BetaSequence, Continuation};
use crate::coeffs::{OuterSummation, TruncationPolicy};
use crate::error::{Error, Result};
use crate::krylov::gmres;
use crate::numeric::{compensated_dot, gauss_legendre};

/// Gregory correction coefficients for `Σ_{m≥0} f(m) - ∫_0^∞ f` in terms of
/// forward differences at 0.
const GREGORY: [f64; 8] = [
    0.5,
    -1.0 / 12.0,
    1.0 / 24.0,
    -19.0 / 720.0,
    3.0 / 160.0,
    -863.0 / 60480.0,
    275.0 / 24192.0,
    -33953.0 / 3628800.0,
];
/// Highest forward difference used.
const GREGORY_ORDER: usize = 6;
/// Relative residual target for the linear solve.
const SOLVE_RTOL: f64 = 1e-13;
const RESTART: usize = 120;

/// PACF with per-lag diagnostics. Index `i` holds lag `i + 1`.
///
/// `u` and `v` are in the `c_0² = 1` convention; see [`PacfSeries::scaled`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacfSeries {
    pub alpha: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub depth_used: Vec<usize>,
    pub trunc_err: Vec<f64>,
}

impl PacfSeries {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `α_n` for `n ≥ 1`.
    pub fn alpha_at(&self, n: usize) -> f64 {
        self.alpha[n - 1]
    }

    /// `(U_n, V_n)` multiplied by a user `c_0²`.
    pub fn scaled(&self, c0_sq: f64) -> (Vec<f64>, Vec<f64>) {
        (
            self.u.iter().map(|x| x * c0_sq).collect(),
            self.v.iter().map(|x| x * c0_sq).collect(),
        )
    }
}

/// Weighted nodes for one family of `m`-sums.
#[derive(Debug, Clone)]
struct Nodes {
    x: Vec<f64>,
    w: Vec<f64>,
    /// The first `discrete` nodes are the integers `0..discrete`.
    discrete: usize,
    /// Largest index past which integer values of `β` may be taken as zero.
    negligible_from: Option<usize>,
}

/// Quadrature density of the continuum part.
#[derive(Debug, Clone, Copy)]
struct Resolution {
    points: usize,
    reach: f64,
}

const FINE: Resolution = Resolution {
    points: 16,
    reach: 1.0,
};
const COARSE: Resolution = Resolution {
    points: 11,
    reach: 0.8,
};

fn gregory_weights() -> [f64; GREGORY_ORDER + 1] {
    // Δ^k f_0 = Σ_j (-1)^{k-j} C(k, j) f_j
    let mut w = [0.0; GREGORY_ORDER + 1];
    for (k, g) in GREGORY.iter().enumerate().take(GREGORY_ORDER + 1) {
        let mut binom = 1.0;
        for j in 0..=k {
            if j > 0 {
                binom *= (k - j + 1) as f64 / j as f64;
            }
            let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
            w[j] += g * sign * binom;
        }
    }
    w
}

/// Decay exponent of the discretization error in the far tail and the
/// start of the continuum, or `None` for a purely discrete layout.
fn continuum_params(beta: &BetaSequence) -> Option<(f64, usize)> {
    match beta.continuation() {
        Continuation::Farima(k) => Some(((1.0 - 2.0 * k.d().abs()).max(0.02), k.smooth_start())),
        Continuation::PowerLaw(t) => {
            let e = if (t.exponent() - 1.0).abs() < 0.05 {
                let s = (std::f64::consts::PI * t.leading().abs()).min(0.99);
                1.0 - 2.0 * s.asin() / std::f64::consts::PI
            } else if t.exponent() > 1.0 {
                (t.exponent() - 1.0).clamp(0.05, 1.0)
            } else {
                0.05
            };
            Some((e.max(0.02), 24))
        }
        _ => None,
    }
}

fn build_nodes(
    beta: &BetaSequence,
    n: usize,
    policy: &TruncationPolicy,
    res: Resolution,
) -> Result<Nodes> {
    match continuum_params(beta) {
        Some((expo, x0)) => {
            let discrete = x0 + GREGORY_ORDER + 1;
            if discrete > policy.mid_len {
                return Err(Error::Length {
                    needed: discrete,
                    available: policy.mid_len,
                });
            }
            let mut x: Vec<f64> = (0..discrete).map(|i| i as f64).collect();
            let mut w = vec![1.0; discrete];
            for (j, g) in gregory_weights().iter().enumerate() {
                w[x0 + j] = *g;
            }
            let umax = (policy.abs_tol.recip().ln().max(8.0) / expo * res.reach).min(400.0);
            let (gx, gw) = gauss_legendre(res.points);
            let mut lo = 0.0;
            let mut width = 0.5;
            while lo < umax {
                let hi = (lo + width).min(umax);
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                for (t, wt) in gx.iter().zip(&gw) {
                    let u = mid + half * t;
                    let xv = x0 as f64 * u.exp();
                    x.push(xv);
                    w.push(wt * half * xv);
                }
                lo = hi;
                width = (width * 2.0).min(4.0);
            }
            Ok(Nodes {
                x,
                w,
                discrete,
                negligible_from: None,
            })
        }
        None => {
            let (limit, negligible_from) = match beta.continuation() {
                Continuation::Exponential { rate } if *rate > 0.0 && *rate < 1.0 => {
                    let reach = ((1e-18f64).ln() / rate.ln()).ceil() as usize + 8;
                    (reach, Some(reach))
                }
                Continuation::Exponential { .. } => {
                    let last = beta
                        .values()
                        .iter()
                        .rposition(|v| *v != 0.0)
                        .map_or(0, |i| i + 1);
                    (last.max(1), Some(last))
                }
                _ => (policy.mid_len, None),
            };
            let discrete = limit.min(policy.mid_len).max(1);
            if negligible_from.is_none() && n + 2 * (discrete - 1) >= beta.len() {
                return Err(Error::Length {
                    needed: n + 2 * (discrete - 1),
                    available: beta.len(),
                });
            }
            Ok(Nodes {
                x: (0..discrete).map(|i| i as f64).collect(),
                w: vec![1.0; discrete],
                discrete,
                negligible_from,
            })
        }
    }
}

fn kernel_int(beta: &BetaSequence, i: usize, negligible_from: Option<usize>) -> Result<f64> {
    match beta.at(i) {
        Some(v) => Ok(v),
        None => match negligible_from {
            Some(z) if i >= z => Ok(0.0),
            _ => Err(Error::Length {
                needed: i,
                available: beta.len(),
            }),
        },
    }
}

/// The operator `K = H W` with `H[i, j] = β(x_i + x_j + n)`, stored in the
/// balanced form `M = S H S`, `S = |W|^{1/2}`, so that `S K S^{-1} = M Σ`
/// with `Σ = sign(W)`. Vectors live in the scaled space: `b` holds `S b`
/// where `b[i] = β(x_i + n)`. Without the balancing, weights that grow like
/// `x` would leave the far nodes out of any residual norm.
struct Operator {
    m: Vec<f64>,
    b: Vec<f64>,
    sign: Vec<f64>,
    size: usize,
}

impl Operator {
    fn build(beta: &BetaSequence, nodes: &Nodes, n: usize) -> Result<Self> {
        let size = nodes.x.len();
        let dn = nodes.discrete;
        let s: Vec<f64> = nodes.w.iter().map(|w| w.abs().sqrt()).collect();
        let sign: Vec<f64> = nodes.w.iter().map(|w| w.signum()).collect();
        let mut m = vec![0.0; size * size];
        let value = |i: usize, j: usize| -> Result<f64> {
            if i < dn && j < dn {
                kernel_int(beta, i + j + n, nodes.negligible_from)
            } else {
                Ok(beta
                    .smooth(nodes.x[i] + nodes.x[j] + n as f64)
                    .unwrap_or(0.0))
            }
        };
        for i in 0..size {
            for j in i..size {
                let v = value(i, j)? * s[i] * s[j];
                m[i * size + j] = v;
                m[j * size + i] = v;
            }
        }
        let b = (0..size)
            .map(|i| {
                let v = if i < dn {
                    kernel_int(beta, i + n, nodes.negligible_from)?
                } else {
                    beta.smooth(nodes.x[i] + n as f64).unwrap_or(0.0)
                };
                Ok(v * s[i])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { m, b, sign, size })
    }

    /// `out = M Σ v`.
    fn apply_k(&self, v: &[f64], out: &mut [f64]) {
        let sv: Vec<f64> = v.iter().zip(&self.sign).map(|(a, b)| a * b).collect();
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.m[i * self.size..(i + 1) * self.size];
            *o = row.iter().zip(&sv).map(|(a, b)| a * b).sum();
        }
    }

    /// `xᵀ Σ y`.
    fn wdot(&self, x: &[f64], y: &[f64]) -> f64 {
        let xs: Vec<f64> = x.iter().zip(&self.sign).map(|(a, b)| a * b).collect();
        compensated_dot(&xs, y)
    }
}

/// Outcome for one lag: odd sum, even sum (k ≥ 2), depth.
struct LagSums {
    odd: f64,
    even: f64,
    depth: usize,
    series_tail: f64,
}

fn resolvent_sums(op: &Operator, d1: f64, n: usize, policy: &TruncationPolicy) -> Result<LagSums> {
    let mut t = vec![0.0; op.size];
    let out = gmres(
        |v, o| {
            op.apply_k(v, &mut t);
            op.apply_k(&t, o);
            for (oi, vi) in o.iter_mut().zip(v) {
                *oi = vi - *oi;
            }
        },
        &op.b,
        SOLVE_RTOL,
        RESTART,
        policy.outer_depth,
    );
    if let Some(m) = out.ritz_min_re {
        // Ritz values of I - K² approximate 1 - λ(K²).
        if m <= 0.0 {
            return Err(Error::Divergence {
                lag: n,
                ratio: (1.0 - m).sqrt(),
            });
        }
    }
    if out.rel_residual > 1e-9 {
        let ratio = out.ritz_min_re.map_or(1.0, |m| (1.0 - m).max(0.0).sqrt());
        return Err(Error::Divergence { lag: n, ratio });
    }
    let even = op.wdot(&op.b, &out.x);
    let mut ky = vec![0.0; op.size];
    op.apply_k(&out.x, &mut ky);
    let odd = d1 + op.wdot(&op.b, &ky);
    Ok(LagSums {
        odd,
        even,
        depth: 2 * out.iterations + 1,
        series_tail: 0.0,
    })
}

/// Explicit `d_1..d_k` with the geometric stopping rule. Returns the sums
/// and every computed `d_k`.
fn series_sums(
    op: &Operator,
    d1: f64,
    n: usize,
    policy: &TruncationPolicy,
    k_max: usize,
) -> Result<(LagSums, Vec<f64>)> {
    let mut dks = vec![d1];
    let mut odd = d1;
    let mut even = 0.0;
    let mut v = op.b.clone();
    let mut next = vec![0.0; op.size];
    let mut stalled = 0usize;
    let mut tail = f64::INFINITY;
    for k in 2..=k_max {
        if k > 2 {
            op.apply_k(&v, &mut next);
            std::mem::swap(&mut v, &mut next);
        }
        let dk = op.wdot(&op.b, &v);
        dks.push(dk);
        if k % 2 == 1 {
            odd += dk;
        } else {
            even += dk;
        }
        let prev = if k >= 4 { dks[k - 3] } else { f64::NAN };
        let rho = (dk / prev).abs();
        if k >= 8 && rho >= 1.0 && dk.abs() > policy.abs_tol {
            stalled += 1;
            if stalled >= 3 {
                return Err(Error::Divergence { lag: n, ratio: rho });
            }
        } else {
            stalled = 0;
        }
        tail = if rho.is_finite() && rho < 1.0 {
            dk.abs() * rho / (1.0 - rho)
        } else {
            dk.abs()
        };
        let geometric_stop =
            rho.is_finite() && rho < 1.0 && dk.abs() < policy.abs_tol * (1.0 - rho);
        if dk == 0.0 || (k >= 4 && dk.abs() < policy.abs_tol / 10.0) || geometric_stop {
            tail = tail.min(policy.abs_tol);
            return Ok((
                LagSums {
                    odd,
                    even,
                    depth: k,
                    series_tail: tail,
                },
                dks,
            ));
        }
    }
    Ok((
        LagSums {
            odd,
            even,
            depth: k_max,
            series_tail: tail,
        },
        dks,
    ))
}

/// `d_1(n)..d_{k_max}(n)` by the operator iteration `w ← H w`.
///
/// Unlike the PACF driver this never stops early.
pub fn dk_sequence(
    beta: &BetaSequence,
    n: usize,
    k_max: usize,
    policy: &TruncationPolicy,
) -> Result<Vec<f64>> {
    policy.validate()?;
    if k_max == 0 {
        return Ok(Vec::new());
    }
    let nodes = build_nodes(beta, n, policy, FINE)?;
    let op = Operator::build(beta, &nodes, n)?;
    let d1 = kernel_int(beta, n, nodes.negligible_from)?;
    let mut out = vec![d1];
    let mut v = op.b.clone();
    let mut next = vec![0.0; op.size];
    for k in 2..=k_max {
        if k > 2 {
            op.apply_k(&v, &mut next);
            std::mem::swap(&mut v, &mut next);
        }
        out.push(op.wdot(&op.b, &v));
    }
    Ok(out)
}

fn lag_sums(
    beta: &BetaSequence,
    n: usize,
    policy: &TruncationPolicy,
    res: Resolution,
) -> Result<(LagSums, usize)> {
    let nodes = build_nodes(beta, n, policy, res)?;
    let op = Operator::build(beta, &nodes, n)?;
    let d1 = kernel_int(beta, n, nodes.negligible_from)?;
    let sums = match policy.outer {
        OuterSummation::Resolvent => resolvent_sums(&op, d1, n, policy)?,
        OuterSummation::Series => series_sums(&op, d1, n, policy, policy.outer_depth)?.0,
    };
    Ok((sums, nodes.x.len()))
}

fn lag_result(
    beta: &BetaSequence,
    n: usize,
    policy: &TruncationPolicy,
) -> Result<(f64, f64, f64, usize, f64)> {
    let (fine, _) = lag_sums(beta, n, policy, FINE)?;
    let v = 1.0 + fine.even;
    if v <= 0.0 {
        return Err(Error::Divergence { lag: n, ratio: 1.0 });
    }
    let alpha = fine.odd / v;
    // Error estimate: a coarser continuum grid, plus the β table's own error
    // propagated to first order, plus any unsummed outer tail.
    let mut err = fine.series_tail / v;
    if continuum_params(beta).is_some() {
        let (coarse, _) = lag_sums(beta, n, policy, COARSE)?;
        let alpha_c = coarse.odd / (1.0 + coarse.even);
        err += (alpha - alpha_c).abs();
    }
    let tb = beta.max_tail_bound();
    if tb > 0.0 {
        err += tb * (1.0 + alpha.abs()) / v;
    }
    if alpha.abs() >= 1.0 {
        return Err(Error::Divergence {
            lag: n,
            ratio: alpha.abs(),
        });
    }
    Ok((alpha, fine.odd, v, fine.depth, err))
}

/// α_1..α_{n_max} from the representation; lags are solved in parallel.
pub fn pacf_via_representation(
    beta: &BetaSequence,
    n_max: usize,
    policy: &TruncationPolicy,
) -> Result<PacfSeries> {
    policy.validate()?;
    let rows: Vec<Result<(f64, f64, f64, usize, f64)>> = (1..=n_max)
        .into_par_iter()
        .map(|n| lag_result(beta, n, policy))
        .collect();
    let mut out = PacfSeries {
        alpha: Vec::with_capacity(n_max),
        u: Vec::with_capacity(n_max),
        v: Vec::with_capacity(n_max),
        depth_used: Vec::with_capacity(n_max),
        trunc_err: Vec::with_capacity(n_max),
    };
    for r in rows {
        let (a, u, v, depth, err) = r?;
        out.alpha.push(a);
        out.u.push(u);
        out.v.push(v);
        out.depth_used.push(depth);
        out.trunc_err.push(err);
    }
    Ok(out)
}

/// One lag of the representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagEstimate {
    pub n: usize,
    pub alpha: f64,
    pub u: f64,
    pub v: f64,
    pub depth_used: usize,
    pub trunc_err: f64,
}

/// `α_n` at a single lag, for probes far out where the full series would
/// be wasteful.
pub fn pacf_at_lag(
    beta: &BetaSequence,
    n: usize,
    policy: &TruncationPolicy,
) -> Result<LagEstimate> {
    policy.validate()?;
    if n == 0 {
        return Err(Error::Domain("lags start at 1".into()));
    }
    let (alpha, u, v, depth_used, trunc_err) = lag_result(beta, n, policy)?;
    Ok(LagEstimate {
        n,
        alpha,
        u,
        v,
        depth_used,
        trunc_err,
    })
}

/// Numerator-only approximation `Σ_k d_{2k-1}(n)` for `n = 1..=n_max`.
pub fn corollary_approx(
    beta: &BetaSequence,
    n_max: usize,
    policy: &TruncationPolicy,
) -> Result<Vec<f64>> {
    policy.validate()?;
    (1..=n_max)
        .into_par_iter()
        .map(|n| lag_sums(beta, n, policy, FINE).map(|(s, _)| s.odd))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FarimaSpec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gregory_weights_sum_reproduces_half_shift() {
        // Σ_j g_j = 1/2 (the weights integrate constants with the trapezoid shift).
        let w = gregory_weights();
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 0.5, epsilon = 1e-14);
        // Σ_{m≥0} e^{-m/8} against ∫_0^∞ e^{-x/8} dx = 8; the first omitted
        // difference term is about 3e-9.
        let f = |m: f64| (-m / 8.0).exp();
        let corr: f64 = w.iter().enumerate().map(|(j, g)| g * f(j as f64)).sum();
        let exact = 1.0 / (1.0 - (-1.0f64 / 8.0).exp());
        assert_abs_diff_eq!(8.0 + corr, exact, epsilon = 1e-8);
    }

    #[test]
    fn white_noise_gives_zero() {
        let beta = BetaSequence::from_farima(&FarimaSpec::white_noise(), 10);
        let p = pacf_via_representation(&beta, 5, &TruncationPolicy::default()).unwrap();
        assert!(p.alpha.iter().all(|a| *a == 0.0));
        assert!(p.v.iter().all(|v| *v == 1.0));
        let dk = dk_sequence(&beta, 3, 6, &TruncationPolicy::default()).unwrap();
        assert!(dk.iter().all(|d| *d == 0.0));
    }

    #[test]
    fn fractional_noise_closed_form() {
        for d in [0.3, -0.3] {
            let spec = FarimaSpec::fractional(d).unwrap();
            let beta = BetaSequence::from_farima(&spec, 0);
            let p = pacf_via_representation(&beta, 6, &TruncationPolicy::default()).unwrap();
            for n in 1..=6 {
                assert_abs_diff_eq!(p.alpha_at(n), d / (n as f64 - d), epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn series_and_resolvent_agree() {
        let spec = FarimaSpec::fractional(0.2).unwrap();
        let beta = BetaSequence::from_farima(&spec, 0);
        let res = pacf_via_representation(&beta, 3, &TruncationPolicy::default()).unwrap();
        let policy = TruncationPolicy {
            outer: OuterSummation::Series,
            outer_depth: 400,
            ..TruncationPolicy::default()
        };
        let ser = pacf_via_representation(&beta, 3, &policy).unwrap();
        for (a, b) in res.alpha.iter().zip(&ser.alpha) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn ar1_vanishes_after_lag_one() {
        let spec = FarimaSpec::new(0.0, vec![1.0, -0.5], vec![1.0]).unwrap();
        let beta = BetaSequence::from_farima(&spec, 0);
        let p = pacf_via_representation(&beta, 5, &TruncationPolicy::default()).unwrap();
        assert_abs_diff_eq!(p.alpha_at(1), 0.5, epsilon = 1e-14);
        for n in 2..=5 {
            assert!(p.alpha_at(n).abs() < 1e-12);
        }
    }
}
