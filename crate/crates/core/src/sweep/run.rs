use rayon::prelude::*;

use crate::channels::{kappa, kraus_ad, kraus_pd, kraus_pf, strength_from_rate, ChannelSpec, CorrelatedPauliSpec, MemoryKernelSpec};
use crate::error::{Error, Result};
use crate::model::ModelPoint;
use crate::pipeline::{evaluate, Evaluation};

use super::config::{ChannelKind, Column, Param, SweepConfig};

/// One grid point: parameter values aligned with
/// [`SweepConfig::param_columns`] and outputs aligned with `cfg.outputs`
/// (the `flags` column, if requested, holds NaN here; see `flags`).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub params: Vec<f64>,
    pub outputs: Vec<f64>,
    /// Semicolon-separated tokens; empty when nothing is flagged.
    pub flags: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub param_names: Vec<String>,
    pub columns: Vec<Column>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn header(&self) -> Vec<String> {
        let mut h = self.param_names.clone();
        h.extend(self.columns.iter().map(|c| c.name()));
        h
    }

    /// Values of one column across rows.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        if let Some(i) = self.param_names.iter().position(|n| n == name) {
            return Some(self.rows.iter().map(|r| r.params[i]).collect());
        }
        let j = self.columns.iter().position(|c| c.name() == name)?;
        Some(self.rows.iter().map(|r| r.outputs[j]).collect())
    }
}

/// Resolves a parameter for one grid point.
fn value(cfg: &SweepConfig, point: &[(Param, f64)], p: Param) -> Option<f64> {
    point
        .iter()
        .find(|(q, _)| *q == p)
        .map(|(_, v)| *v)
        .or_else(|| cfg.fixed.get(&p).copied())
}

/// Builds the channel for one grid point.
pub fn channel_for(cfg: &SweepConfig, point: &[(Param, f64)]) -> Result<ChannelSpec> {
    let get = |p: Param| value(cfg, point, p);
    let strength = || -> Result<f64> {
        match (get(Param::Strength), get(Param::Rate), get(Param::Time)) {
            (Some(s), _, _) => Ok(s),
            (None, Some(v), Some(t)) => strength_from_rate(v, t),
            _ => Err(Error::Config("channel strength needs s, or v and t".into())),
        }
    };
    Ok(match cfg.channel {
        ChannelKind::None => ChannelSpec::Identity,
        ChannelKind::Dephasing => {
            let k = match get(Param::Kappa) {
                Some(k) => k,
                None => {
                    let (t, tau, mu) = (get(Param::Time), get(Param::Tau), get(Param::Mu));
                    let (Some(t), Some(tau), Some(mu)) = (t, tau, mu) else {
                        return Err(Error::Config("dephasing needs kappa, or t, tau and mu".into()));
                    };
                    kappa(t, &MemoryKernelSpec::new(tau, mu)?.with_form(cfg.kernel))?
                }
            };
            ChannelSpec::Dephasing { kappa: k }
        }
        ChannelKind::AmplitudeDamping => ChannelSpec::Local(kraus_ad(strength()?)?),
        ChannelKind::PhaseFlip => ChannelSpec::Local(kraus_pf(strength()?)?),
        ChannelKind::PhaseDamping => ChannelSpec::Local(kraus_pd(strength()?)?),
        ChannelKind::CorrelatedPauli => {
            let probs = cfg
                .pauli_probs
                .ok_or_else(|| Error::Config("correlated_pauli needs channel.p0 .. channel.p3".into()))?;
            let mu = get(Param::Mu).ok_or_else(|| Error::Config("correlated_pauli needs mu".into()))?;
            ChannelSpec::CorrelatedPauli(CorrelatedPauliSpec::new(probs, mu)?)
        }
    })
}

/// Evaluates the pipeline at one grid point.
pub fn evaluate_point(cfg: &SweepConfig, point: &[(Param, f64)]) -> Result<Evaluation> {
    let get = |p: Param| value(cfg, point, p).ok_or_else(|| Error::Config(format!("`{p}` is not set")));
    let mp = ModelPoint::new(get(Param::Temperature)?, get(Param::Omega)?, get(Param::Delta0)?)?;
    let channel = channel_for(cfg, point)?;
    evaluate(&mp, &channel, &cfg.estimate)
}

fn column_value(ev: &Evaluation, col: Column) -> f64 {
    let nan = f64::NAN;
    match col {
        Column::VarSim(a) => ev.bounds.var_sim_for(a).unwrap_or(nan),
        Column::VarInd(a) => ev.bounds.var_ind_for(a).unwrap_or(nan),
        Column::Gamma => ev.bounds.gamma.unwrap_or(nan),
        Column::Fisher(a, b) => ev.qfim.fisher.entry(a, b).unwrap_or(nan),
        Column::TraceResidual => ev.state.trace_residual(),
        Column::MinEigenvalue => ev.state.min_eigenvalue(),
        Column::CommutatorNorm => ev.qfim.compatibility.max_commutator_norm(),
        Column::Flags => nan,
    }
}

fn flags_for(ev: &Evaluation) -> String {
    let mut out = Vec::new();
    for (axis, f) in ev.bounds.axes.iter().zip(&ev.bounds.flags) {
        if f.unbounded_information {
            out.push(format!("unbounded_info_{}", axis.tag()));
        }
        if f.unbounded_variance {
            out.push(format!("unbounded_var_{}", axis.tag()));
        }
    }
    if ev.bounds.singular {
        out.push("singular".to_string());
    }
    if ev.bounds.gamma.is_none() {
        out.push("gamma_undefined".to_string());
    }
    out.join(";")
}

fn error_token(e: &Error) -> &'static str {
    match e {
        Error::InvalidShape(_) => "error_shape",
        Error::Domain(_) => "error_domain",
        Error::Contract(_) => "error_contract",
        Error::Config(_) => "error_config",
        Error::Io { .. } => "error_io",
    }
}

/// Evaluates one row; failures become a flagged row of NaNs.
pub fn sweep_row(cfg: &SweepConfig, point: &[(Param, f64)]) -> SweepRow {
    let params = cfg
        .param_columns()
        .iter()
        .map(|&p| value(cfg, point, p).unwrap_or(f64::NAN))
        .collect();
    match evaluate_point(cfg, point) {
        Ok(ev) => SweepRow {
            params,
            outputs: cfg.outputs.iter().map(|&c| column_value(&ev, c)).collect(),
            flags: flags_for(&ev),
        },
        Err(e) => SweepRow {
            params,
            outputs: vec![f64::NAN; cfg.outputs.len()],
            flags: error_token(&e).to_string(),
        },
    }
}

/// Grid points in row order, outer (x) axis major.
pub fn grid_points(cfg: &SweepConfig) -> Vec<Vec<(Param, f64)>> {
    let mut points = vec![Vec::new()];
    for ax in &cfg.axes {
        let vals = ax.values();
        points = points
            .into_iter()
            .flat_map(|prefix| {
                vals.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((ax.param, v));
                    p
                })
            })
            .collect();
    }
    points
}

/// Runs the whole grid with `cfg.workers` threads. Row order, and therefore
/// the emitted bytes, do not depend on the worker count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    let points = grid_points(cfg);
    let rows = if cfg.workers <= 1 {
        points.iter().map(|p| sweep_row(cfg, p)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", cfg.workers)))?;
        pool.install(|| points.par_iter().map(|p| sweep_row(cfg, p)).collect())
    };
    Ok(SweepTable {
        param_names: cfg.param_columns().iter().map(|p| p.name().to_string()).collect(),
        columns: cfg.outputs.clone(),
        rows,
    })
}
