//! Adding the gap ω as a parameter. The state depends on T and ω only through
//! ω/T, so the three-axis QFIM is singular; (Δ₀, ω) is estimable jointly.

use udw_qfim::channels::{ChannelSpec, MemoryKernelSpec};
use udw_qfim::model::{Axis, ModelPoint};
use udw_qfim::pipeline::evaluate;

fn main() -> udw_qfim::Result<()> {
    let p = ModelPoint::new(0.5, 1.0, -2.0)?;
    let three = evaluate(&p, &ChannelSpec::Identity, &Axis::ALL)?;
    println!("three-axis det F = {:.3e}, singular: {}", three.bounds.det_fisher, three.bounds.singular);
    for (a, v) in Axis::ALL.iter().zip(&three.bounds.var_sim) {
        println!("  var_{}_sim = {v}", a.tag());
    }

    let pair = [Axis::Delta0, Axis::Omega];
    let spec = MemoryKernelSpec::new(5.0, 0.6)?;
    println!("(delta0, omega) under long-memory dephasing:");
    for i in 0..=8 {
        let t = 2.5 * i as f64;
        let b = evaluate(&p, &ChannelSpec::dephasing_at(t, &spec)?, &pair)?.bounds;
        println!("  t={t:>5}  var_D_sim {:>10.6}  var_w_sim {:>10.6}", b.var_sim[0], b.var_sim[1]);
    }
    Ok(())
}
