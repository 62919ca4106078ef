use std::path::PathBuf;

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Map, Value};

use pacflab_core::szego::farima_density;
use pacflab_core::{
    density_from_autocov, factorize as cepstral, pacf_via_levinson, pacf_via_representation,
    PacfSeries, SpectralGrid, TruncationPolicy,
};

use crate::model::{Factorization, Model, ModelArgs};
use crate::output::{Format, Sink, Table};

pub struct Context {
    pub policy: TruncationPolicy,
    pub fact: Factorization,
    pub n_max: usize,
    pub format: Format,
    pub model_args: ModelArgs,
    pub out: Option<PathBuf>,
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Repr,
    Levinson,
    Both,
}

impl Context {
    /// Manifest fields shared by every command. Together with the model
    /// echo they pin down every number in the outputs.
    pub fn manifest(&self, command: &str, model: Option<&Model>) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), json!("pacflab"));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(command));
        m.insert(
            "args".into(),
            json!(std::env::args().skip(1).collect::<Vec<_>>()),
        );
        if let Some(model) = model {
            m.insert("model".into(), json!(model));
        }
        m.insert("n_max".into(), json!(self.n_max));
        m.insert("policy".into(), json!(self.policy));
        m.insert("factorization".into(), json!(self.fact));
        m.insert("format".into(), json!(self.format));
        m.insert("threads".into(), json!(self.threads));
        m
    }

    fn sink(&self) -> Result<Sink> {
        Sink::open(self.out.as_deref())
    }
}

fn series_diagnostics(p: &PacfSeries) -> Value {
    json!({
        "max_trunc_err": p.trunc_err.iter().copied().fold(0.0, f64::max),
        "max_depth_used": p.depth_used.iter().copied().max().unwrap_or(0),
    })
}

pub fn coeffs(ctx: &Context) -> Result<()> {
    let mut sink = ctx.sink()?;
    let model = Model::resolve(&ctx.model_args)?;
    let co = model.coefficients(ctx.n_max, ctx.fact)?;
    let mut t = Table::new("coeffs", &["n", "c", "a", "gamma"]);
    for n in 0..=ctx.n_max {
        t.push(vec![
            n.into(),
            co.c[n].into(),
            co.a[n].into(),
            co.gamma[n].into(),
        ]);
    }
    sink.emit_table(&t, ctx.format)?;
    let mut m = ctx.manifest("coeffs", Some(&model));
    m.insert(
        "diagnostics".into(),
        json!({ "factorization_residual": co.residual }),
    );
    sink.finish(m)
}

pub fn beta(ctx: &Context) -> Result<()> {
    let mut sink = ctx.sink()?;
    let model = Model::resolve(&ctx.model_args)?;
    let run = model.beta(ctx.n_max, &ctx.policy, ctx.fact)?;
    let mut t = Table::new("beta", &["n", "beta", "tail_bound"]);
    for n in 0..=ctx.n_max {
        let value = run.beta.at(n).unwrap_or(f64::NAN);
        let bound = run.beta.tail_bound().get(n).copied().unwrap_or(0.0);
        t.push(vec![n.into(), value.into(), bound.into()]);
    }
    sink.emit_table(&t, ctx.format)?;
    let mut m = ctx.manifest("beta", Some(&model));
    m.insert("effective_policy".into(), json!(run.policy));
    m.insert(
        "diagnostics".into(),
        json!({
            "variant": format!("{:?}", run.beta.variant()).to_lowercase(),
            "max_tail_bound": run.beta.max_tail_bound(),
            "factorization_residual": run.residual,
        }),
    );
    sink.finish(m)
}

struct Both {
    repr: Option<PacfSeries>,
    levinson: Option<PacfSeries>,
    effective_policy: TruncationPolicy,
    residual: Option<f64>,
}

fn compute(ctx: &Context, model: &Model, method: Method) -> Result<Both> {
    let mut out = Both {
        repr: None,
        levinson: None,
        effective_policy: ctx.policy,
        residual: None,
    };
    if method != Method::Levinson {
        let run = model.beta(ctx.n_max, &ctx.policy, ctx.fact)?;
        out.repr = Some(pacf_via_representation(&run.beta, ctx.n_max, &run.policy)?);
        out.effective_policy = run.policy;
        out.residual = run.residual;
    }
    if method != Method::Repr {
        out.levinson = Some(pacf_via_levinson(&model.autocov(ctx.n_max)?, ctx.n_max)?);
    }
    Ok(out)
}

pub fn pacf(ctx: &Context, method: Method) -> Result<()> {
    let mut sink = ctx.sink()?;
    let model = Model::resolve(&ctx.model_args)?;
    let res = compute(ctx, &model, method)?;
    let t = match (&res.repr, &res.levinson) {
        (Some(r), Some(l)) => {
            let mut t = Table::new("pacf", &["n", "alpha_repr", "alpha_levinson", "abs_diff"]);
            for n in 1..=ctx.n_max {
                let (a, b) = (r.alpha_at(n), l.alpha_at(n));
                t.push(vec![n.into(), a.into(), b.into(), (a - b).abs().into()]);
            }
            t
        }
        (Some(p), None) | (None, Some(p)) => {
            let mut t = Table::new("pacf", &["n", "alpha", "u", "v", "depth_used", "trunc_err"]);
            for i in 0..p.len() {
                t.push(vec![
                    (i + 1).into(),
                    p.alpha[i].into(),
                    p.u[i].into(),
                    p.v[i].into(),
                    p.depth_used[i].into(),
                    p.trunc_err[i].into(),
                ]);
            }
            t
        }
        (None, None) => unreachable!("at least one method runs"),
    };
    sink.emit_table(&t, ctx.format)?;
    let mut m = ctx.manifest("pacf", Some(&model));
    m.insert("method".into(), json!(method));
    m.insert("effective_policy".into(), json!(res.effective_policy));
    m.insert(
        "diagnostics".into(),
        json!({
            "repr": res.repr.as_ref().map(series_diagnostics),
            "levinson": res.levinson.as_ref().map(series_diagnostics),
            "factorization_residual": res.residual,
        }),
    );
    sink.finish(m)
}

pub fn compare(ctx: &Context, tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(crate::ConfigError(format!("--tol must be positive, got {tol}")).into());
    }
    let mut sink = ctx.sink()?;
    let model = Model::resolve(&ctx.model_args)?;
    let res = compute(ctx, &model, Method::Both)?;
    let (r, l) = (
        res.repr.as_ref().expect("repr"),
        res.levinson.as_ref().expect("levinson"),
    );
    let mut t = Table::new(
        "compare",
        &[
            "n",
            "alpha_repr",
            "alpha_levinson",
            "abs_diff",
            "trunc_err",
            "tolerance",
            "pass",
        ],
    );
    let mut failures = 0usize;
    let mut worst = 0.0f64;
    for n in 1..=ctx.n_max {
        let (a, b) = (r.alpha_at(n), l.alpha_at(n));
        let diff = (a - b).abs();
        let err = r.trunc_err[n - 1];
        let allowed = tol.max(err);
        let ok = diff <= allowed;
        failures += usize::from(!ok);
        worst = worst.max(diff);
        t.push(vec![
            n.into(),
            a.into(),
            b.into(),
            diff.into(),
            err.into(),
            allowed.into(),
            ok.into(),
        ]);
    }
    sink.emit_table(&t, ctx.format)?;
    eprintln!(
        "compare: {} of {} lags within tolerance, max |diff| {worst:.3e}",
        ctx.n_max - failures,
        ctx.n_max
    );
    let mut m = ctx.manifest("compare", Some(&model));
    m.insert("tol".into(), json!(tol));
    m.insert("effective_policy".into(), json!(res.effective_policy));
    m.insert(
        "diagnostics".into(),
        json!({
            "repr": series_diagnostics(r),
            "max_abs_diff": worst,
            "failed_lags": failures,
            "all_pass": failures == 0,
            "factorization_residual": res.residual,
        }),
    );
    sink.finish(m)
}

pub fn factorize(ctx: &Context) -> Result<()> {
    let mut sink = ctx.sink()?;
    let model = Model::resolve(&ctx.model_args)?;
    let grid = match model.farima() {
        Some(spec) => SpectralGrid::from_fn(ctx.fact.grid_size, |t| farima_density(&spec, t))?,
        None => density_from_autocov(&model.autocov(16.min(ctx.n_max))?, ctx.fact.grid_size)?,
    };
    let f = cepstral(&grid, ctx.n_max, 1e-8)?;
    let mut t = Table::new("factorize", &["n", "c", "a", "log_coeff"]);
    for n in 0..=ctx.n_max {
        t.push(vec![
            n.into(),
            f.c.values()[n].into(),
            f.a.values()[n].into(),
            f.log_coeffs[n].into(),
        ]);
    }
    sink.emit_table(&t, ctx.format)?;
    let mut m = ctx.manifest("factorize", Some(&model));
    m.insert(
        "diagnostics".into(),
        json!({
            "residual": f.residual,
            "resolution_gap": f.resolution_gap,
            "c0_sq": f.c0_sq,
            "floored_points": grid.floored(),
        }),
    );
    sink.finish(m)
}
