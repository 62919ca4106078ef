//! Model sources: inline JSON, `builtin:<name>`, or a file path.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use pacflab_core::numeric::series_reciprocal;
use pacflab_core::{
    autocov_from_ma, factorized_beta, farima_ar_coeffs, farima_autocov, farima_ma_coeffs,
    BetaSequence, BuiltinModel, CoefficientSequence, DecayClass, FarimaSpec, TruncationPolicy,
};

use crate::ConfigError;

/// A resolved model.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Model {
    Builtin {
        model: BuiltinModel,
    },
    /// Autocovariances `γ_0, γ_1, …` read from a file.
    Autocov {
        path: String,
        #[serde(skip)]
        gamma: CoefficientSequence,
    },
    /// MA coefficients `c_0, c_1, …` read from a file.
    Ma {
        path: String,
        #[serde(skip)]
        c: CoefficientSequence,
    },
}

/// Grid used when a model has no closed-form β.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Factorization {
    pub grid_size: usize,
    pub coeff_len: usize,
}

/// MA and AR coefficients plus where they came from.
pub struct Coefficients {
    pub c: Vec<f64>,
    pub a: Vec<f64>,
    pub gamma: Vec<f64>,
    pub residual: Option<f64>,
}

pub struct BetaRun {
    pub beta: BetaSequence,
    pub policy: TruncationPolicy,
    pub residual: Option<f64>,
}

#[derive(Debug, Default, Clone)]
pub struct ModelArgs {
    pub model: Option<String>,
    pub d: Option<f64>,
    pub phi: Option<Vec<f64>>,
    pub theta: Option<Vec<f64>>,
}

impl Model {
    pub fn resolve(args: &ModelArgs) -> Result<Self> {
        let params = args.d.is_some() || args.phi.is_some() || args.theta.is_some();
        let Some(src) = args.model.as_deref() else {
            if params {
                return Ok(Self::Builtin {
                    model: BuiltinModel::from_name(
                        "farima",
                        args.d,
                        args.phi.clone(),
                        args.theta.clone(),
                    )?,
                });
            }
            return Err(
                ConfigError("no model given: pass --model or --d/--phi/--theta".into()).into(),
            );
        };
        if let Some(name) = src.strip_prefix("builtin:") {
            return Ok(Self::Builtin {
                model: BuiltinModel::from_name(name, args.d, args.phi.clone(), args.theta.clone())?,
            });
        }
        if params {
            return Err(ConfigError(
                "--d/--phi/--theta only apply to builtin models; the model source must be unique"
                    .into(),
            )
            .into());
        }
        if src.trim_start().starts_with('{') {
            return Ok(Self::Builtin {
                model: BuiltinModel::Farima {
                    spec: FarimaSpec::from_json(src)?,
                },
            });
        }
        Self::from_path(Path::new(src))
    }

    fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read model file {}: {e}", path.display())))?;
        let shown = path.display().to_string();
        if path.extension().is_some_and(|e| e == "json") {
            return Ok(Self::Builtin {
                model: BuiltinModel::Farima {
                    spec: FarimaSpec::from_json(&text)?,
                },
            });
        }
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .context("reading model CSV header")?
            .clone();
        let (col, is_gamma) = match (
            headers.iter().position(|h| h == "gamma"),
            headers.iter().position(|h| h == "c"),
        ) {
            (Some(i), None) => (i, true),
            (None, Some(i)) => (i, false),
            _ => {
                return Err(ConfigError(format!(
                    "model CSV {shown} needs exactly one of the columns `gamma` or `c`"
                ))
                .into())
            }
        };
        let mut values = Vec::new();
        for (line, row) in reader.records().enumerate() {
            let row = row.with_context(|| format!("reading {shown}"))?;
            let cell = row.get(col).unwrap_or("");
            let v: f64 = cell.parse().map_err(|_| {
                ConfigError(format!(
                    "{shown} row {}: `{cell}` is not a number",
                    line + 2
                ))
            })?;
            values.push(v);
        }
        if is_gamma {
            Ok(Self::Autocov {
                path: shown,
                gamma: CoefficientSequence::autocov(values, DecayClass::Unknown)?,
            })
        } else {
            if values.first() != Some(&1.0) {
                bail!(pacflab_core::Error::InvalidModel(format!(
                    "{shown}: c_0 must be 1"
                )));
            }
            let c = CoefficientSequence::new(
                values,
                pacflab_core::coeffs::SequenceKind::Ma,
                DecayClass::Unknown,
            );
            Ok(Self::Ma { path: shown, c })
        }
    }

    pub fn farima(&self) -> Option<FarimaSpec> {
        match self {
            Self::Builtin { model } => model.farima_spec(),
            _ => None,
        }
    }

    /// `γ_0..=γ_{n_max}`.
    pub fn autocov(&self, n_max: usize) -> Result<CoefficientSequence> {
        Ok(match self {
            Self::Builtin { model } => model.autocov(n_max)?,
            Self::Autocov { gamma, .. } => {
                if gamma.len() <= n_max {
                    bail!(pacflab_core::Error::Length {
                        needed: n_max + 1,
                        available: gamma.len()
                    });
                }
                gamma.clone()
            }
            Self::Ma { c, .. } => {
                // A finite MA table: coefficients past its end are zero.
                let mut padded = c.values().to_vec();
                padded.resize(c.len() + n_max, 0.0);
                let padded = CoefficientSequence::new(padded, c.kind(), DecayClass::Unknown);
                autocov_from_ma(&padded, n_max, c.len() - 1)?
            }
        })
    }

    pub fn coefficients(&self, n_max: usize, fact: Factorization) -> Result<Coefficients> {
        if let Some(spec) = self.farima() {
            return Ok(Coefficients {
                c: farima_ma_coeffs(&spec, n_max)?.values().to_vec(),
                a: farima_ar_coeffs(&spec, n_max)?.values().to_vec(),
                gamma: farima_autocov(&spec, n_max)?.values().to_vec(),
                residual: None,
            });
        }
        if let Self::Ma { c, .. } = self {
            let cv = c.prefix(n_max + 1)?.into_owned();
            let a = series_reciprocal(&cv, n_max + 1)
                .into_iter()
                .map(|x| -x)
                .collect();
            return Ok(Coefficients {
                c: cv,
                a,
                gamma: self.autocov(n_max)?.values()[..=n_max].to_vec(),
                residual: None,
            });
        }
        let gamma = self.autocov(n_max)?;
        let grid = pacflab_core::density_from_autocov(&gamma, fact.grid_size)?;
        let f = pacflab_core::factorize(&grid, n_max.max(fact.coeff_len), 1e-8)?;
        Ok(Coefficients {
            c: f.c.values()[..=n_max].to_vec(),
            a: f.a.values()[..=n_max].to_vec(),
            gamma: gamma.values()[..=n_max].to_vec(),
            residual: Some(f.residual),
        })
    }

    /// β for lags up to `n_max`: closed form for FARIMA, otherwise through
    /// the factorization (or the given MA coefficients).
    pub fn beta(
        &self,
        n_max: usize,
        policy: &TruncationPolicy,
        fact: Factorization,
    ) -> Result<BetaRun> {
        if let Some(spec) = self.farima() {
            return Ok(BetaRun {
                beta: BetaSequence::from_farima(&spec, n_max),
                policy: *policy,
                residual: None,
            });
        }
        match self {
            Self::Ma { c, .. } => {
                let len = c.len();
                let a = series_reciprocal(c.values(), len)
                    .into_iter()
                    .map(|x| -x)
                    .collect();
                let a = CoefficientSequence::new(
                    a,
                    pacflab_core::coeffs::SequenceKind::Ar,
                    DecayClass::Unknown,
                );
                let beta = pacflab_core::beta_standard(c, &a, n_max, policy)?;
                Ok(BetaRun {
                    beta,
                    policy: *policy,
                    residual: None,
                })
            }
            _ => {
                let gamma = self.autocov(16.min(n_max))?;
                let fb = factorized_beta(&gamma, n_max, fact.grid_size, fact.coeff_len, policy)?;
                Ok(BetaRun {
                    beta: fb.beta,
                    policy: fb.policy,
                    residual: Some(fb.residual),
                })
            }
        }
    }
}
