//! Independent oracles for derived values: brute-force sums, dense linear
//! algebra and textbook special-function identities.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use nalgebra::{DMatrix, DVector};
use statrs::function::gamma::ln_gamma;

use pacflab_core::special::zeta;
use pacflab_core::szego::farima_density;
use pacflab_core::{
    beta_standard, dk_sequence, factorize, farima_ar_coeffs, farima_autocov, farima_ma_coeffs,
    pacf_at_lag, pacf_via_levinson, pacf_via_representation, tau_generic, BetaSequence, FarimaSpec,
    SpectralGrid, TruncationPolicy,
};

fn arma(phi: &[f64], theta: &[f64]) -> FarimaSpec {
    FarimaSpec::new(0.0, phi.to_vec(), theta.to_vec()).unwrap()
}

/// Coefficient of `z^v` in `(1 - z)^{-e}`, i.e. `Γ(v + e) / (Γ(e) Γ(v + 1))`
/// with `Γ(e) = Γ(e + 1) / e` so that negative `e` works too.
fn binomial(v: usize, e: f64) -> f64 {
    if v == 0 {
        return 1.0;
    }
    let x = v as f64;
    e * (ln_gamma(x + e) - ln_gamma(e + 1.0) - ln_gamma(x + 1.0)).exp()
}

#[test]
fn fractional_coefficients_match_gamma_ratios() {
    for d in [0.3, -0.3, 0.45] {
        let c = farima_ma_coeffs(&FarimaSpec::fractional(d).unwrap(), 300).unwrap();
        let a = farima_ar_coeffs(&FarimaSpec::fractional(d).unwrap(), 300).unwrap();
        for v in [1usize, 2, 10, 100, 300] {
            assert_relative_eq!(c.values()[v], binomial(v, d), max_relative = 1e-11);
            // a_v = -[coefficient of (1-z)^d] = -(ma coefficient at -d).
            assert_relative_eq!(a.values()[v], -binomial(v, -d), max_relative = 1e-11);
        }
    }
}

#[test]
fn beta_matches_brute_force_summation() {
    // β(n) = Σ_v c_v a_{v+n} summed directly, with the v^{-2} tail added.
    let d: f64 = 0.3;
    let spec = FarimaSpec::fractional(d).unwrap();
    let len = 400_000;
    let c = farima_ma_coeffs(&spec, len + 16).unwrap();
    let a = farima_ar_coeffs(&spec, len + 16).unwrap();
    let (c, a) = (c.values(), a.values());
    // c_v a_{v+n} ~ -v^{-2} / (Γ(d) Γ(-d)) = v^{-2} d sin(πd) / π.
    let tail_const = d * (PI * d).sin() / PI;
    let beta = BetaSequence::from_farima(&spec, 8);
    for n in 0..=8 {
        let direct: f64 = (0..len).map(|v| c[v] * a[v + n]).sum();
        let tail = tail_const / len as f64;
        assert_relative_eq!(beta.values()[n], direct + tail, epsilon = 1e-9);
    }
}

#[test]
fn summed_beta_agrees_with_closed_form_for_arma() {
    let spec = arma(&[1.0, -0.5], &[1.0, 0.4]);
    let c = farima_ma_coeffs(&spec, 2000).unwrap();
    let a = farima_ar_coeffs(&spec, 2000).unwrap();
    let policy = TruncationPolicy {
        inner_len: 1500,
        ..TruncationPolicy::default()
    };
    let summed = beta_standard(&c, &a, 40, &policy).unwrap();
    let closed = BetaSequence::from_farima(&spec, 40);
    for n in 0..=40 {
        assert_relative_eq!(summed.values()[n], closed.values()[n], epsilon = 1e-15);
    }
}

#[test]
fn d3_matches_explicit_double_sum() {
    // d_3(n) = Σ_{m,m'} β(m+n) β(m+m'+n) β(m'+n).
    let spec = arma(&[1.0], &[1.0, 0.5]);
    let beta = BetaSequence::from_farima(&spec, 600);
    let b = |i: usize| beta.values()[i];
    let policy = TruncationPolicy::default();
    for n in [1usize, 3, 7] {
        let dk = dk_sequence(&beta, n, 3, &policy).unwrap();
        let mut d2 = 0.0;
        let mut d3 = 0.0;
        for m in 0..200 {
            d2 += b(m + n) * b(m + n);
            for mp in 0..200 {
                d3 += b(m + n) * b(m + mp + n) * b(mp + n);
            }
        }
        assert_relative_eq!(dk[0], b(n), epsilon = 1e-16);
        assert_relative_eq!(dk[1], d2, max_relative = 1e-12);
        assert_relative_eq!(dk[2], d3, max_relative = 1e-12, epsilon = 1e-300);
    }
}

/// α_n as the last coefficient of the order-n normal equations.
fn normal_equation_pacf(gamma: &[f64], n: usize) -> f64 {
    let m = DMatrix::from_fn(n, n, |i, j| gamma[i.abs_diff(j)]);
    let rhs = DVector::from_fn(n, |i, _| gamma[i + 1]);
    let phi = m.lu().solve(&rhs).unwrap();
    phi[n - 1]
}

#[test]
fn levinson_matches_dense_normal_equations() {
    for spec in [
        FarimaSpec::fractional(0.3).unwrap(),
        arma(&[1.0, -0.5], &[1.0, 0.4]),
    ] {
        let gamma = farima_autocov(&spec, 40).unwrap();
        let lev = pacf_via_levinson(&gamma, 40).unwrap();
        for n in [1usize, 2, 5, 20, 40] {
            assert_relative_eq!(
                lev.alpha_at(n),
                normal_equation_pacf(gamma.values(), n),
                epsilon = 1e-12
            );
        }
    }
}

#[test]
fn fractional_pacf_closed_form() {
    for d in [0.2, -0.2] {
        let beta = BetaSequence::from_farima(&FarimaSpec::fractional(d).unwrap(), 0);
        let p = pacf_via_representation(&beta, 30, &TruncationPolicy::default()).unwrap();
        for n in 1..=30 {
            assert_relative_eq!(p.alpha_at(n), d / (n as f64 - d), epsilon = 1e-9);
        }
    }
}

#[test]
fn single_lag_matches_series() {
    let spec = FarimaSpec::new(0.25, vec![1.0, -0.3], vec![1.0]).unwrap();
    let beta = BetaSequence::from_farima(&spec, 0);
    let p = pacf_via_representation(&beta, 12, &TruncationPolicy::default()).unwrap();
    let one = pacf_at_lag(&beta, 12, &TruncationPolicy::default()).unwrap();
    assert_eq!(one.alpha, p.alpha_at(12));
}

#[test]
fn zeta_matches_eta_series() {
    // ζ(s) = η(s) / (1 - 2^{1-s}); η summed with repeated averaging of
    // partial sums, an acceleration unrelated to Euler–Maclaurin.
    fn zeta_eta(s: f64) -> f64 {
        let mut partial = Vec::with_capacity(60);
        let mut acc = 0.0;
        for k in 1..=60 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * (k as f64).powf(-s);
            partial.push(acc);
        }
        while partial.len() > 1 {
            partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        partial[0] / (1.0 - 2f64.powf(1.0 - s))
    }
    assert_relative_eq!(zeta(2.0), PI * PI / 6.0, max_relative = 1e-13);
    assert_relative_eq!(zeta(1.5), 2.612_375_348_685_488, max_relative = 1e-13);
    for s in [1.2, 1.6, 1.9] {
        assert_relative_eq!(zeta(s), zeta_eta(s), max_relative = 1e-11);
    }
}

#[test]
fn even_taus_from_arcsin_squared() {
    // (arcsin x)² / π² = Σ τ_{2k} x^{2k}: τ_2 = 1/π², τ_4 = 1/(3π²), τ_6 = 8/(45π²).
    let pi2 = PI * PI;
    assert_relative_eq!(tau_generic(2, 16).unwrap(), 1.0 / pi2, max_relative = 1e-10);
    assert_relative_eq!(
        tau_generic(4, 16).unwrap(),
        1.0 / (3.0 * pi2),
        max_relative = 1e-10
    );
    assert_relative_eq!(
        tau_generic(6, 16).unwrap(),
        8.0 / (45.0 * pi2),
        max_relative = 1e-8
    );
    assert_relative_eq!(
        tau_generic(5, 16).unwrap(),
        3.0 / (40.0 * PI),
        max_relative = 1e-8
    );
}

#[test]
fn cepstral_factor_recovers_arma_coefficients() {
    let spec = arma(&[1.0, -0.5], &[1.0, 0.4]);
    let grid = SpectralGrid::from_fn(1 << 12, |t| farima_density(&spec, t)).unwrap();
    let f = factorize(&grid, 64, 1e-10).unwrap();
    let c = farima_ma_coeffs(&spec, 64).unwrap();
    let a = farima_ar_coeffs(&spec, 64).unwrap();
    for k in 0..=64 {
        assert_relative_eq!(f.c.values()[k], c.values()[k], epsilon = 1e-12);
        assert_relative_eq!(f.a.values()[k], a.values()[k], epsilon = 1e-12);
    }
}
