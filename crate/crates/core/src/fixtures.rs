//! Hand-derived reference matrices for the noiseless X-state.
//!
//! These are written out entry by entry, without going through the numerical
//! pipeline, so they can be compared against it.

use crate::matops::{c, ColumnVector, ComplexMatrix};
use crate::model::{stationary_elements, ModelPoint};

/// `L_Δ₀`: `1/(3+Δ₀)` on the corners, `[(1+Δ₀), -2; -2, (1+Δ₀)] / ((Δ₀+3)(Δ₀-1))`
/// in the middle block.
pub fn sld_delta0(p: &ModelPoint) -> ComplexMatrix {
    let d = p.delta0();
    let corner = 1.0 / (3.0 + d);
    let den = (d + 3.0) * (d - 1.0);
    let mut l = ComplexMatrix::diag(&[corner, (1.0 + d) / den, (1.0 + d) / den, corner]);
    l[(1, 2)] = c(-2.0 / den);
    l[(2, 1)] = c(-2.0 / den);
    l
}

/// `L_T` in terms of `ω/T`.
pub fn sld_temperature(p: &ModelPoint) -> ComplexMatrix {
    let (t, w) = (p.temperature(), p.omega());
    let x = w / t;
    let (e, ch, sh) = (x.exp(), x.cosh(), x.sinh());
    let t2 = t * t;
    let top = (1.0 + 2.0 * e) * w / (t2 * (1.0 + 2.0 * ch));
    let mid = w * sh / (t2 * (1.0 + 2.0 * ch));
    let bottom = -(2.0 + e) * w / ((1.0 + e + e * e) * t2);
    let mut l = ComplexMatrix::diag(&[top, mid, mid, bottom]);
    l[(1, 2)] = c(mid);
    l[(2, 1)] = c(mid);
    l
}

/// `{|11⟩, (|10⟩+|01⟩)/√2, (-|10⟩+|01⟩)/√2, |00⟩}` in the basis order
/// `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn common_eigenbasis() -> [ColumnVector; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        ColumnVector::from_real(&[0.0, 0.0, 0.0, 1.0]),
        ColumnVector::from_real(&[0.0, s, s, 0.0]),
        ColumnVector::from_real(&[0.0, s, -s, 0.0]),
        ColumnVector::from_real(&[1.0, 0.0, 0.0, 0.0]),
    ]
}

/// Block coefficients of `η⁻¹` for an X-state with corner populations `x`
/// (excited) and `y` (ground), middle population `z` and coherence `δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaInverseCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub gamma3: f64,
    pub gamma4: f64,
    pub xi2: f64,
    pub xi3: f64,
}

impl EtaInverseCoefficients {
    pub fn new(x: f64, z: f64, y: f64, delta: f64) -> Self {
        let d2 = delta * delta;
        let xz = (x + z) * (x + z) - d2;
        let yz = (y + z) * (y + z) - d2;
        let zz = z * z - d2;
        Self {
            alpha1: 1.0 / (2.0 * x),
            alpha2: (x + z) / xz,
            alpha3: -delta / xz,
            alpha4: 1.0 / (x + y),
            beta2: (2.0 * z * z - d2) / (4.0 * z * zz),
            beta3: -delta / (4.0 * zz),
            beta4: (y + z) / yz,
            gamma3: -delta / yz,
            gamma4: 1.0 / (2.0 * y),
            xi2: -delta / (4.0 * zz),
            xi3: d2 / (4.0 * z * zz),
        }
    }

    pub fn for_point(p: &ModelPoint) -> Self {
        let el = stationary_elements(p);
        Self::new(el.corner_ee, el.mid, el.corner_gg, el.coh)
    }

    /// The 16×16 matrix: 4×4 blocks indexed `(block, inner)` as `4·block + inner`.
    pub fn assemble(&self) -> ComplexMatrix {
        let pattern = |a: f64, b: f64, cc: f64, d: f64| [[a, 0.0, 0.0, 0.0], [0.0, b, cc, 0.0], [0.0, cc, b, 0.0], [0.0, 0.0, 0.0, d]];
        let s = self;
        let b11 = pattern(s.alpha1, s.alpha2, s.alpha3, s.alpha4);
        let b22 = pattern(s.alpha2, s.beta2, s.beta3, s.beta4);
        let b44 = pattern(s.alpha4, s.beta4, s.gamma3, s.gamma4);
        let b23 = pattern(s.alpha3, s.xi2, s.xi3, s.gamma3);
        let zero = [[0.0; 4]; 4];
        let block = |i: usize, j: usize| match (i, j) {
            (0, 0) => b11,
            (1, 1) | (2, 2) => b22,
            (3, 3) => b44,
            (1, 2) | (2, 1) => b23,
            _ => zero,
        };
        ComplexMatrix::from_fn(16, 16, |r, col| c(block(r / 4, col / 4)[r % 4][col % 4]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::{pinv_psd, PINV_RTOL};
    use crate::model::stationary_state;
    use crate::qfim::build_eta;

    #[test]
    fn assembled_inverse_matches_pseudo_inverse() {
        let p = ModelPoint::new(0.8, 1.1, -1.2).unwrap();
        let numeric = pinv_psd(&build_eta(&stationary_state(&p).unwrap()), PINV_RTOL).unwrap();
        let fixture = EtaInverseCoefficients::for_point(&p).assemble();
        assert!(numeric.max_abs_diff(&fixture) < 1e-10);
    }

    #[test]
    fn eigenbasis_is_orthonormal() {
        let b = common_eigenbasis();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((b[i].dot(&b[j]).re - expected).abs() < 1e-15);
            }
        }
    }
}
