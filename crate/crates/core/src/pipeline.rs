//! `state -> channel -> tangents -> QFIM -> bounds` for one parameter point.

use crate::bounds::{crb, BoundsReport};
use crate::channels::ChannelSpec;
use crate::error::{domain, Result};
use crate::model::{stationary_state, Axis, DensityMatrix, DerivativeMethod, ModelPoint, TangentSet};
use crate::qfim::QfimReport;

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub state: DensityMatrix,
    pub tangents: TangentSet,
    pub qfim: QfimReport,
    pub bounds: BoundsReport,
}

/// Evaluates one point with analytic derivatives.
pub fn evaluate(p: &ModelPoint, channel: &ChannelSpec, axes: &[Axis]) -> Result<Evaluation> {
    evaluate_with(p, channel, axes, DerivativeMethod::Analytic)
}

pub fn evaluate_with(
    p: &ModelPoint,
    channel: &ChannelSpec,
    axes: &[Axis],
    method: DerivativeMethod,
) -> Result<Evaluation> {
    if axes.is_empty() {
        return Err(domain("at least one parameter must be estimated"));
    }
    let state = channel.apply(&stationary_state(p)?)?;
    // channels are linear, so they act on derivatives unchanged
    let tangents = TangentSet::for_point(p, axes, method)?.map(|m| channel.map(m))?;
    let qfim = QfimReport::compute(&state, &tangents)?;
    let bounds = crb(&qfim.fisher);
    Ok(Evaluation {
        state,
        tangents,
        qfim,
        bounds,
    })
}
