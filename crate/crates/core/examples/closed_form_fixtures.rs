//! Closed-form dephasing variances beside the numerical pipeline.

use udw_qfim::bounds::closed_forms::compare_dephasing;
use udw_qfim::channels::ChannelSpec;
use udw_qfim::model::{Axis, ModelPoint};
use udw_qfim::pipeline::evaluate;

fn main() -> udw_qfim::Result<()> {
    let p = ModelPoint::new(0.5, 1.0, -2.0)?;
    for kappa in [1.0, 0.8, 0.4, 0.1] {
        let b = evaluate(&p, &ChannelSpec::Dephasing { kappa }, &[Axis::Temperature, Axis::Delta0])?.bounds;
        let pipeline = [b.var_sim[0], b.var_sim[1], b.var_ind[0], b.var_ind[1], b.gamma.unwrap_or(f64::NAN)];
        let (rows, findings) = compare_dephasing(&p, kappa, pipeline)?;
        println!("kappa = {kappa}");
        for r in rows {
            println!(
                "  {:<10} closed {:>14} pipeline {:>14.9} rel {:.1e}",
                r.expression,
                r.closed_form.map_or("undefined".to_string(), |v| format!("{v:.9}")),
                r.pipeline,
                r.relative_deviation
            );
        }
        for f in findings {
            println!("  discrepancy in {}: {:.3e}", f.expression, f.relative_deviation);
        }
    }
    Ok(())
}
