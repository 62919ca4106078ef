//! Builtin models: FARIMA, the regularly varying covariance
//! `γ_n = (1 + |n|)^{-(1-2d)}`, and white noise.

use std::sync::Arc;

use serde::Serialize;

use crate::coeffs::{farima_autocov, CoefficientSequence, DecayClass, FarimaSpec, SequenceKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum BuiltinModel {
    Farima { spec: FarimaSpec },
    PowerLaw { d: f64 },
    WhiteNoise,
}

impl BuiltinModel {
    /// Resolves a builtin name; `farima` takes `d`, `phi`, `theta` and
    /// `power_law` takes `d`.
    pub fn from_name(
        name: &str,
        d: Option<f64>,
        phi: Option<Vec<f64>>,
        theta: Option<Vec<f64>>,
    ) -> Result<Self> {
        match name {
            "farima" => Ok(Self::Farima {
                spec: FarimaSpec::new(
                    d.unwrap_or(0.0),
                    phi.unwrap_or_else(|| vec![1.0]),
                    theta.unwrap_or_else(|| vec![1.0]),
                )?,
            }),
            "power_law" => {
                let d = d.ok_or_else(|| Error::InvalidModel("power_law needs d".into()))?;
                Self::power_law(d)
            }
            "white_noise" => Ok(Self::WhiteNoise),
            other => Err(Error::InvalidModel(format!(
                "unknown builtin model `{other}` (expected farima, power_law or white_noise)"
            ))),
        }
    }

    pub fn power_law(d: f64) -> Result<Self> {
        if !(d > -0.5 && d < 0.5) {
            return Err(Error::InvalidModel(format!(
                "power_law needs -1/2 < d < 1/2, got {d}"
            )));
        }
        Ok(Self::PowerLaw { d })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Farima { .. } => "farima",
            Self::PowerLaw { .. } => "power_law",
            Self::WhiteNoise => "white_noise",
        }
    }

    /// The FARIMA spec, with white noise as FARIMA(0, 0, 0).
    pub fn farima_spec(&self) -> Option<FarimaSpec> {
        match self {
            Self::Farima { spec } => Some(spec.clone()),
            Self::WhiteNoise => Some(FarimaSpec::white_noise()),
            Self::PowerLaw { .. } => None,
        }
    }

    /// Memory parameter.
    pub fn d(&self) -> f64 {
        match self {
            Self::Farima { spec } => spec.d(),
            Self::PowerLaw { d } => *d,
            Self::WhiteNoise => 0.0,
        }
    }

    /// `γ_0..=γ_{n_max}`, exact for every builtin.
    pub fn autocov(&self, n_max: usize) -> Result<CoefficientSequence> {
        match self {
            Self::Farima { spec } => farima_autocov(spec, n_max),
            Self::PowerLaw { d } => Ok(power_law_autocov(*d, n_max + 1)),
            Self::WhiteNoise => farima_autocov(&FarimaSpec::white_noise(), n_max),
        }
    }
}

/// `γ_n = (1 + n)^{-(1-2d)}`, extendable.
pub fn power_law_autocov(d: f64, len: usize) -> CoefficientSequence {
    let p = 1.0 - 2.0 * d;
    let gen = move |len: usize| -> Result<Vec<f64>> {
        Ok((0..len).map(|n| (1.0 + n as f64).powf(-p)).collect())
    };
    let values = gen(len).expect("closed form");
    CoefficientSequence::new(
        values,
        SequenceKind::Autocov,
        DecayClass::PowerLaw { exponent: p },
    )
    .with_generator(Arc::new(gen))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in ["farima", "power_law", "white_noise"] {
            let m = BuiltinModel::from_name(name, Some(0.2), None, None).unwrap();
            assert_eq!(m.name(), name);
        }
        assert!(BuiltinModel::from_name("garch", None, None, None).is_err());
        assert!(BuiltinModel::from_name("power_law", None, None, None).is_err());
    }

    #[test]
    fn power_law_values() {
        let g = power_law_autocov(-0.3, 3);
        assert_eq!(g.values()[0], 1.0);
        assert!((g.values()[1] - 2f64.powf(-1.6)).abs() < 1e-15);
        let mut g = g;
        g.extend_to(10).unwrap();
        assert!((g.values()[9] - 10f64.powf(-1.6)).abs() < 1e-15);
    }
}
