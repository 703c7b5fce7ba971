//! Plain-text reports for single points, as printed by the `udwq` binary.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::bounds::closed_forms::{compare_dephasing, noiseless_closed_forms};
use crate::channels::ChannelSpec;
use crate::error::{Error, Result};
use crate::fixtures::{sld_delta0, sld_temperature, EtaInverseCoefficients};
use crate::matops::{pinv_psd, ComplexMatrix, PINV_RTOL};
use crate::model::{stationary_state, Axis, ModelPoint};
use crate::pipeline::{evaluate, Evaluation};
use crate::qfim::build_eta;
use crate::sweep::{channel_for, evaluate_point, format_number, parse_overrides, parse_pairs, Param, SweepConfig};

/// Config file (if any) followed by `--key value` overrides. Point reports
/// reject grid axes.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<SweepConfig> {
    let mut pairs = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            })?;
            parse_pairs(&text)?
        }
        None => Vec::new(),
    };
    pairs.extend(parse_overrides(overrides)?);
    SweepConfig::from_pairs(pairs)
}

fn single_point(cfg: &SweepConfig) -> Result<()> {
    if cfg.axes.is_empty() {
        Ok(())
    } else {
        Err(Error::Config("point reports take fixed values only; drop the grid.* keys or use `sweep`".into()))
    }
}

fn model_point(cfg: &SweepConfig) -> Result<ModelPoint> {
    let get = |p: Param| cfg.fixed.get(&p).copied().ok_or_else(|| Error::Config(format!("fixed.{p} is required")));
    ModelPoint::new(get(Param::Temperature)?, get(Param::Omega)?, get(Param::Delta0)?)
}

fn fmt_complex(z: num_complex::Complex64) -> String {
    if z.im == 0.0 {
        format_number(z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", format_number(z.re), format_number(z.im.abs()))
    }
}

fn write_complex(out: &mut String, m: &ComplexMatrix) {
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| fmt_complex(m[(i, j)])).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  [ {} ]", line.join("  "));
    }
}

fn write_real(out: &mut String, m: &DMatrix<f64>, axes: &[Axis]) {
    let width = m.iter().map(|&x| format_number(x).len()).max().unwrap_or(1).max(6);
    let head: Vec<String> = axes.iter().map(|a| format!("{:>width$}", a.name())).collect();
    let _ = writeln!(out, "  {:>6}  {}", "", head.join("  "));
    for (i, a) in axes.iter().enumerate() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:>width$}", format_number(m[(i, j)]))).collect();
        let _ = writeln!(out, "  {:>6}  {}", a.name(), row.join("  "));
    }
}

fn header(out: &mut String, p: &ModelPoint, channel: &ChannelSpec) {
    let _ = writeln!(
        out,
        "point: T={} omega={} delta0={}  channel: {}",
        format_number(p.temperature()),
        format_number(p.omega()),
        format_number(p.delta0()),
        channel.label()
    );
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".to_string(), format_number)
}

/// The channel-evolved stationary state with validity diagnostics.
pub fn state_report(cfg: &SweepConfig) -> Result<String> {
    single_point(cfg)?;
    let p = model_point(cfg)?;
    let channel = channel_for(cfg, &[])?;
    let rho = channel.apply(&stationary_state(&p)?)?;
    let mut out = String::new();
    header(&mut out, &p, &channel);
    let _ = writeln!(out, "eta = tanh(omega/2T) = {}", format_number(p.eta()));
    let _ = writeln!(out, "rho (basis |00>, |01>, |10>, |11>):");
    write_complex(&mut out, rho.matrix());
    let _ = writeln!(out, "trace_residual: {}", format_number(rho.trace_residual()));
    let _ = writeln!(out, "min_eigenvalue: {}", format_number(rho.min_eigenvalue()));
    let _ = writeln!(out, "x_structured: {}", rho.is_x_structured());
    let _ = writeln!(out, "interior: {}", p.is_interior());
    Ok(out)
}

fn write_evaluation(out: &mut String, ev: &Evaluation) {
    let axes = &ev.bounds.axes;
    let _ = writeln!(out, "fisher:");
    write_real(out, &ev.qfim.fisher.matrix, axes);
    for (a, l) in axes.iter().zip(&ev.qfim.slds) {
        let _ = writeln!(out, "sld {}:", a.name());
        write_complex(out, l);
    }
    let _ = writeln!(out, "weak commutativity Im Tr(rho L_a L_b):");
    write_real(out, &ev.qfim.compatibility.weak_commutativity, axes);
    let _ = writeln!(out, "commutator norms:");
    write_real(out, &ev.qfim.compatibility.commutator_norms, axes);
    let _ = writeln!(out, "shared eigenbasis: {}", ev.qfim.compatibility.shared_eigenbasis);
    let _ = writeln!(out, "eta support rank: {}", ev.qfim.support_rank);
    let _ = writeln!(out, "max sld residual: {}", format_number(ev.qfim.max_sld_residual));
    let b = &ev.bounds;
    for (k, a) in axes.iter().enumerate() {
        let f = &b.flags[k];
        let mut note = String::new();
        if f.unbounded_information {
            note.push_str("  [unbounded information]");
        }
        if f.unbounded_variance {
            note.push_str("  [unbounded variance]");
        }
        let _ = writeln!(
            out,
            "var_{}: sim={} ind={}{note}",
            a.tag(),
            format_number(b.var_sim[k]),
            format_number(b.var_ind[k])
        );
    }
    let _ = writeln!(out, "gamma: {}", opt(b.gamma));
    let _ = writeln!(out, "covariance cross term: {}", opt(b.covariance_cross_term));
    let _ = writeln!(out, "det fisher: {}", format_number(b.det_fisher));
    let _ = writeln!(out, "singular: {}", b.singular);
}

/// Fisher matrix, SLDs, compatibility and bounds at one point.
pub fn qfim_report(cfg: &SweepConfig) -> Result<String> {
    single_point(cfg)?;
    let p = model_point(cfg)?;
    let channel = channel_for(cfg, &[])?;
    let ev = evaluate_point(cfg, &[])?;
    let mut out = String::new();
    header(&mut out, &p, &channel);
    write_evaluation(&mut out, &ev);
    Ok(out)
}

fn compare_line(out: &mut String, name: &str, closed: Option<f64>, pipeline: f64) {
    let dev = closed.map_or(f64::NAN, |c| (pipeline - c).abs() / c.abs().max(f64::MIN_POSITIVE));
    let _ = writeln!(
        out,
        "  {name:<12} closed={:<20} pipeline={:<20} rel_dev={}",
        opt(closed),
        format_number(pipeline),
        format_number(dev)
    );
}

/// Hand-derived closed forms beside the pipeline at one point.
pub fn fixtures_report(cfg: &SweepConfig) -> Result<String> {
    single_point(cfg)?;
    let p = model_point(cfg)?;
    let channel = channel_for(cfg, &[])?;
    let td = [Axis::Temperature, Axis::Delta0];
    let mut out = String::new();
    header(&mut out, &p, &channel);

    let noiseless = evaluate(&p, &ChannelSpec::Identity, &td)?;
    let (vt, vd) = noiseless_closed_forms(&p)?;
    let _ = writeln!(out, "noiseless:");
    compare_line(&mut out, "var_T_sim", Some(vt), noiseless.bounds.var_sim[0]);
    compare_line(&mut out, "var_D_sim", Some(vd), noiseless.bounds.var_sim[1]);
    compare_line(&mut out, "gamma", Some(0.5), noiseless.bounds.gamma.unwrap_or(f64::NAN));
    let _ = writeln!(
        out,
        "  sld T max deviation {}",
        format_number(noiseless.qfim.slds[0].max_abs_diff(&sld_temperature(&p)))
    );
    let _ = writeln!(
        out,
        "  sld delta0 max deviation {}",
        format_number(noiseless.qfim.slds[1].max_abs_diff(&sld_delta0(&p)))
    );
    let numeric = pinv_psd(&build_eta(&stationary_state(&p)?), PINV_RTOL)?;
    let _ = writeln!(
        out,
        "  eta inverse max deviation {}",
        format_number(numeric.max_abs_diff(&EtaInverseCoefficients::for_point(&p).assemble()))
    );

    if let Some(kappa) = channel.dephasing_kappa() {
        let b = evaluate(&p, &channel, &td)?.bounds;
        let pipe = [b.var_sim[0], b.var_sim[1], b.var_ind[0], b.var_ind[1], b.gamma.unwrap_or(f64::NAN)];
        let (cmp, findings) = compare_dephasing(&p, kappa, pipe)?;
        let _ = writeln!(out, "dephasing kappa={}:", format_number(kappa));
        for c in &cmp {
            compare_line(&mut out, c.expression, c.closed_form, c.pipeline);
        }
        for f in &findings {
            let _ = writeln!(
                out,
                "  formula discrepancy: {} closed={} pipeline={} rel_dev={}",
                f.expression,
                opt(f.closed_form),
                format_number(f.pipeline),
                format_number(f.relative_deviation)
            );
        }
    }
    Ok(out)
}
