//! Local amplitude damping, phase flip and phase damping on both detectors.

use udw_qfim::channels::{kraus_ad, kraus_pd, kraus_pf, ChannelSpec, KrausFamily};
use udw_qfim::model::{Axis, ModelPoint};
use udw_qfim::pipeline::evaluate;

fn main() -> udw_qfim::Result<()> {
    let p = ModelPoint::new(0.3, 0.5, -2.0)?;
    let axes = [Axis::Temperature, Axis::Delta0];
    let families: [(&str, fn(f64) -> udw_qfim::Result<KrausFamily>); 3] =
        [("AD", kraus_ad), ("PF", kraus_pf), ("PD", kraus_pd)];
    for (name, make) in families {
        println!("{name}");
        for s in [0.0, 0.25, 0.5, 0.75, 0.9] {
            let fam = make(s)?;
            let ev = evaluate(&p, &ChannelSpec::Local(fam.clone()), &axes)?;
            println!(
                "  s={s:<5} closure {:.1e}  var_T_sim {:>12.6}  var_D_sim {:>10.6}  gamma {:.5}",
                fam.closure_defect(),
                ev.bounds.var_sim[0],
                ev.bounds.var_sim[1],
                ev.bounds.gamma.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
