//! Correlated random-telegraph dephasing: monotone decay for short memory,
//! oscillating bounds for long memory.

use udw_qfim::channels::{kappa, ChannelSpec, MemoryKernelSpec};
use udw_qfim::model::{Axis, ModelPoint};
use udw_qfim::pipeline::evaluate;

fn main() -> udw_qfim::Result<()> {
    let p = ModelPoint::new(0.5, 1.0, -2.0)?;
    let axes = [Axis::Temperature, Axis::Delta0];
    for tau in [0.1, 5.0] {
        let spec = MemoryKernelSpec::new(tau, 0.6)?;
        println!("tau = {tau} ({:?})", spec.regime());
        println!("{:>5} {:>8} {:>12} {:>12} {:>8}", "t", "kappa", "var_T_sim", "var_D_sim", "gamma");
        for i in 0..=10 {
            let t = 2.0 * i as f64;
            let ev = evaluate(&p, &ChannelSpec::dephasing_at(t, &spec)?, &axes)?;
            let b = &ev.bounds;
            println!(
                "{t:>5} {:>8.5} {:>12.6} {:>12.6} {:>8.5}",
                kappa(t, &spec)?,
                b.var_sim[0],
                b.var_sim[1],
                b.gamma.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
