//! Special functions needed by the verification scenarios.

/// B_2, B_4, ..., B_20.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Riemann zeta for real `s > 1`, by Euler–Maclaurin summation with ten
/// Bernoulli correction terms after `N = 20` explicit terms.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta is only implemented for s > 1");
    const N: usize = 20;
    let n = N as f64;
    let mut sum = crate::numeric::CompensatedSum::new();
    for k in 1..N {
        sum.add((k as f64).powf(-s));
    }
    sum.add(n.powf(1.0 - s) / (s - 1.0));
    sum.add(0.5 * n.powf(-s));
    // term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    let mut rising = s; // s(s+1)...(s+2j-2), starts at j=1
    let mut fact = 2.0; // (2j)!
    let mut npow = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let jj = (j + 1) as f64;
        sum.add(b / fact * rising * npow);
        rising *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
        fact *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
        npow /= n * n;
    }
    sum.value()
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn zeta_at_two_is_basel() {
        assert_relative_eq!(zeta(2.0), PI * PI / 6.0, max_relative = 1e-14);
    }

    #[test]
    fn zeta_at_four() {
        assert_relative_eq!(zeta(4.0), PI.powi(4) / 90.0, max_relative = 1e-14);
    }

    #[test]
    fn zeta_near_pole_against_brute_force() {
        // Brute force with the integral tail N^{1-s}/(s-1) + N^{-s}/2.
        let s = 1.6;
        let n = 2_000_000usize;
        let head: f64 = crate::numeric::compensated_sum((1..n).map(|k| (k as f64).powf(-s)));
        let nf = n as f64;
        let brute =
            head + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0);
        assert_relative_eq!(zeta(s), brute, max_relative = 1e-12);
        // Reference value 2.2857656... for zeta(1.6)
        assert!((zeta(1.6) - 2.285_765_4).abs() < 1e-6);
    }
}
