//! Simultaneous bounds on T and Δ₀ without noise, across temperatures.

use udw_qfim::bounds::closed_forms::noiseless_closed_forms;
use udw_qfim::channels::ChannelSpec;
use udw_qfim::model::{Axis, ModelPoint};
use udw_qfim::pipeline::evaluate;

fn main() -> udw_qfim::Result<()> {
    let axes = [Axis::Temperature, Axis::Delta0];
    println!("{:>6} {:>8} {:>14} {:>14} {:>10} {:>8}", "T", "delta0", "var_T_sim", "closed form", "var_D_sim", "gamma");
    for delta0 in [-2.5, -1.0, 0.5] {
        for t in [0.2, 0.5, 1.0, 2.0, 4.0] {
            let p = ModelPoint::new(t, 1.0, delta0)?;
            let ev = evaluate(&p, &ChannelSpec::Identity, &axes)?;
            let (var_t, _) = noiseless_closed_forms(&p)?;
            println!(
                "{t:>6} {delta0:>8} {:>14.6e} {:>14.6e} {:>10.6} {:>8.4}",
                ev.bounds.var_sim[0],
                var_t,
                ev.bounds.var_sim[1],
                ev.bounds.gamma.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
