//! Partial autocorrelation of stationary processes from their AR(∞) and
//! MA(∞) coefficients, with a Durbin–Levinson cross-check and numerical
//! checks of the asymptotic laws for fractional ARIMA and regularly varying
//! covariances.

pub mod asymptotics;
pub mod beta;
pub mod coeffs;
pub mod error;
pub mod fft;
mod krylov;
pub mod levinson;
pub mod models;
pub mod numeric;
pub mod pacf_repr;
pub mod special;
pub mod szego;

pub use asymptotics::{
    alpha_beta_ratio_probe, baxter_diagnostic, covariance_ratio_probe, estimate_d, factorized_beta,
    tau_generic, tau_odd, verify_arma_decay, verify_delta_law, verify_dn_law,
    verify_regular_variation, AsymptoticFit, FactorizedBeta, RegVarOptions, TauTable,
};
pub use beta::{beta_minus, beta_standard, BetaSequence, BetaVariant, Continuation};
pub use coeffs::{
    autocov_from_ma, farima_ar_coeffs, farima_autocov, farima_ma_coeffs, psi_phi_coeffs,
    CoefficientSequence, DecayClass, FarimaSpec, OuterSummation, SequenceKind, TruncationPolicy,
};
pub use error::{Error, ErrorCategory, Result};
pub use levinson::{delta_ratio, pacf_via_levinson, LevinsonState};
pub use models::BuiltinModel;
pub use pacf_repr::{
    corollary_approx, dk_sequence, pacf_at_lag, pacf_via_representation, LagEstimate, PacfSeries,
};
pub use szego::{density_from_autocov, factorize, CepstrumResult, SpectralGrid};
