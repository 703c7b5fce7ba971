//! Pseudo-inverse of η = ρᵀ⊗I + I⊗ρ against the hand-derived block coefficients.

use udw_qfim::fixtures::EtaInverseCoefficients;
use udw_qfim::matops::{pinv_psd_with_support, PINV_RTOL};
use udw_qfim::model::{stationary_state, ModelPoint};
use udw_qfim::qfim::build_eta;

fn main() -> udw_qfim::Result<()> {
    for (t, w, d) in [(0.5, 1.0, -2.0), (1.0, 0.7, 0.3), (2.0, 1.5, -2.8)] {
        let p = ModelPoint::new(t, w, d)?;
        let eta = build_eta(&stationary_state(&p)?);
        let pinv = pinv_psd_with_support(&eta, PINV_RTOL)?;
        let coeffs = EtaInverseCoefficients::for_point(&p);
        let dev = pinv.inverse.max_abs_diff(&coeffs.assemble());
        println!(
            "T={t} omega={w} delta0={d}: rank {}, alpha1={:.6}, xi3={:.6}, max deviation {dev:.2e}",
            pinv.rank, coeffs.alpha1, coeffs.xi3
        );
    }
    Ok(())
}
