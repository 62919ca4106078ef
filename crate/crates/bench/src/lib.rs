//! Fixture models shared by the benchmarks.

use pacflab_core::FarimaSpec;

/// FARIMA(0, d, 0).
pub fn fractional(d: f64) -> FarimaSpec {
    FarimaSpec::fractional(d).expect("|d| < 1/2")
}

/// FARIMA(1, d, 1) with `Φ = 1 - 0.5z`, `Θ = 1 + 0.4z`.
pub fn farima11(d: f64) -> FarimaSpec {
    FarimaSpec::new(d, vec![1.0, -0.5], vec![1.0, 0.4]).expect("valid model")
}
