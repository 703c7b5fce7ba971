//! The two SLDs of the noiseless state commute and share the Bell-like basis.

use udw_qfim::channels::ChannelSpec;
use udw_qfim::fixtures::common_eigenbasis;
use udw_qfim::matops::commutator;
use udw_qfim::model::{Axis, ModelPoint};
use udw_qfim::pipeline::evaluate;

fn main() -> udw_qfim::Result<()> {
    let p = ModelPoint::new(0.5, 1.0, -2.0)?;
    let ev = evaluate(&p, &ChannelSpec::Identity, &[Axis::Temperature, Axis::Delta0])?;
    let (lt, ld) = (&ev.qfim.slds[0], &ev.qfim.slds[1]);
    println!("||[L_T, L_delta0]|| = {:.3e}", commutator(lt, ld).frobenius_norm());
    for (k, v) in common_eigenbasis().iter().enumerate() {
        let (a, b) = (v.dot(&lt.matvec(v)).re, v.dot(&ld.matvec(v)).re);
        println!("basis vector {k}: L_T eigenvalue {a:>10.6}, L_delta0 eigenvalue {b:>10.6}");
    }
    let w = &ev.qfim.compatibility.weak_commutativity;
    println!("Im Tr(rho [L_T, L_delta0]) = {:.3e}", w[(0, 1)]);
    Ok(())
}
