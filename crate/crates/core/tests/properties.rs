//! Property tests over randomly drawn FARIMA(1, d, 1) models.

use proptest::prelude::*;

use pacflab_core::asymptotics::arcsin_partial_sum;
use pacflab_core::levinson::prediction_variances;
use pacflab_core::{
    dk_sequence, farima_ar_coeffs, farima_autocov, farima_ma_coeffs, pacf_via_levinson,
    pacf_via_representation, BetaSequence, FarimaSpec, TruncationPolicy,
};

fn model() -> impl Strategy<Value = FarimaSpec> {
    (-0.35f64..0.35, -0.8f64..0.8, -0.8f64..0.8)
        .prop_filter("distinct roots", |(_, p, t)| (p + t).abs() > 0.05)
        .prop_map(|(d, p, t)| FarimaSpec::new(d, vec![1.0, -p], vec![1.0, t]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn convolution_identity(spec in model()) {
        let c = farima_ma_coeffs(&spec, 200).unwrap();
        let a = farima_ar_coeffs(&spec, 200).unwrap();
        for n in 0..=200 {
            let conv: f64 = (0..=n).map(|k| c.values()[k] * a.values()[n - k]).sum();
            let target = if n == 0 { -1.0 } else { 0.0 };
            prop_assert!((conv - target).abs() < 1e-12, "n={} conv={}", n, conv);
        }
    }

    #[test]
    fn levinson_variances_positive_and_nonincreasing(spec in model()) {
        let gamma = farima_autocov(&spec, 300).unwrap();
        let v = prediction_variances(&gamma, 300).unwrap();
        prop_assert!(v.iter().all(|&x| x > 0.0));
        prop_assert!(v.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14)));
    }

    #[test]
    fn arcsin_partial_sums_increase(x in 0.0f64..0.99, k in 1usize..40) {
        let (a, _) = arcsin_partial_sum(x, k);
        let (b, _) = arcsin_partial_sum(x, k + 1);
        prop_assert!(b >= a);
        prop_assert!(b <= x.asin() / std::f64::consts::PI + 1e-15);
    }
}

proptest! {
    // Each case solves the representation at every lag; keep the count low.
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn representation_is_a_valid_pacf(spec in model()) {
        let beta = BetaSequence::from_farima(&spec, 0);
        let p = pacf_via_representation(&beta, 24, &TruncationPolicy::default()).unwrap();
        let lev = pacf_via_levinson(&farima_autocov(&spec, 24).unwrap(), 24).unwrap();
        for n in 1..=24 {
            let i = n - 1;
            prop_assert!(p.alpha[i].abs() < 1.0);
            prop_assert!((p.alpha[i] - lev.alpha[i]).abs() <= 1e-8f64.max(p.trunc_err[i]));
            if i > 0 {
                prop_assert!(p.v[i] <= p.v[i - 1] + p.trunc_err[i] + p.trunc_err[i - 1] + 1e-14);
            }
            prop_assert!(p.v[i] >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn d2_is_nonnegative(spec in model(), n in 1usize..40) {
        let beta = BetaSequence::from_farima(&spec, 0);
        let dk = dk_sequence(&beta, n, 2, &TruncationPolicy::default()).unwrap();
        prop_assert!(dk[1] >= 0.0);
    }
}
