//! Quantum Fisher information matrix and symmetric logarithmic derivatives.
//!
//! The main route works in vectorized form. With column stacking,
//! `V(Lρ + ρL) = η V(L)` for the superoperator `η = ρᵀ⊗I + I⊗ρ`, so
//!
//! ```text
//! V(L_μ) = 2 η⁺ V(∂_μρ)        F_μν = 2 Re V(∂_μρ)† η⁺ V(∂_νρ)
//! ```
//!
//! [`qfim_spectral`] evaluates the same matrix from the eigendecomposition of
//! ρ and is kept independent of the superoperator route so each can check the
//! other.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matops::{
    commutator, eigh, kron, pinv_psd_with_support, unvectorize, vectorize, ColumnVector, ComplexMatrix,
    PsdPseudoInverse,
};
use crate::model::{Axis, DensityMatrix, TangentSet};

/// A tangent whose component outside the support of η exceeds this carries
/// unbounded information.
pub const SUPPORT_TOL: f64 = 1e-8;

/// Relative eigenvalue cutoff for η and ρ. Populations far below the
/// general pseudo-inverse default still carry information, for example at
/// large ω/T, so only eigenvalues at round-off level are dropped.
pub const QFIM_RTOL: f64 = 4.0 * f64::EPSILON;

/// Commutator norms at or below `SHARED_BASIS_TOL · scale` count as zero.
pub const SHARED_BASIS_TOL: f64 = 1e-8;

/// `η = ρᵀ⊗I + I⊗ρ`.
pub fn build_eta(rho: &DensityMatrix) -> ComplexMatrix {
    let m = rho.matrix();
    let id = ComplexMatrix::identity(m.rows());
    &kron(&m.transpose(), &id) + &kron(&id, m)
}

/// Fisher matrix with per-axis flags for information that is not finite.
///
/// A flagged axis has `+inf` on its diagonal and NaN elsewhere in its row and
/// column.
#[derive(Clone, Debug)]
pub struct Fisher {
    pub axes: Vec<Axis>,
    pub matrix: DMatrix<f64>,
    pub unbounded: Vec<bool>,
    /// Norm of each tangent's component outside the retained support.
    pub support_residuals: Vec<f64>,
}

impl Fisher {
    fn new(axes: Vec<Axis>, mut matrix: DMatrix<f64>, support_residuals: Vec<f64>) -> Self {
        let unbounded: Vec<bool> = support_residuals.iter().map(|&r| r > SUPPORT_TOL).collect();
        let m = axes.len();
        for a in 0..m {
            if unbounded[a] {
                for b in 0..m {
                    matrix[(a, b)] = f64::NAN;
                    matrix[(b, a)] = f64::NAN;
                }
            }
        }
        for a in 0..m {
            if unbounded[a] {
                matrix[(a, a)] = f64::INFINITY;
            }
        }
        Self {
            axes,
            matrix,
            unbounded,
            support_residuals,
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn entry(&self, a: Axis, b: Axis) -> Option<f64> {
        let i = self.axes.iter().position(|&x| x == a)?;
        let j = self.axes.iter().position(|&x| x == b)?;
        Some(self.matrix[(i, j)])
    }

    pub fn any_unbounded(&self) -> bool {
        self.unbounded.iter().any(|&u| u)
    }

    /// Largest entrywise gap to another Fisher matrix, comparing flags exactly.
    /// Returns infinity if the flags differ.
    pub fn max_abs_diff(&self, other: &Fisher) -> f64 {
        if self.axes != other.axes || self.unbounded != other.unbounded {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.matrix.iter().zip(other.matrix.iter()) {
            if a.is_finite() && b.is_finite() {
                worst = worst.max((a - b).abs());
            } else if !(a.is_nan() && b.is_nan()) && a != b {
                return f64::INFINITY;
            }
        }
        worst
    }

    /// Largest finite entry magnitude.
    pub fn max_finite_abs(&self) -> f64 {
        self.matrix.iter().filter(|v| v.is_finite()).fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Pseudo-inverse of η for one state, reusable across tangents.
#[derive(Clone, Debug)]
pub struct EtaSolver {
    rho: DensityMatrix,
    pinv: PsdPseudoInverse,
}

impl EtaSolver {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        let pinv = pinv_psd_with_support(&build_eta(rho), QFIM_RTOL)?;
        Ok(Self {
            rho: rho.clone(),
            pinv,
        })
    }

    pub fn support_rank(&self) -> usize {
        self.pinv.rank
    }

    pub fn pinv(&self) -> &PsdPseudoInverse {
        &self.pinv
    }

    /// Norm of `(I - P) V(X)` for the support projector P of η.
    pub fn support_residual(&self, tangent: &ComplexMatrix) -> f64 {
        self.pinv.support_residual(&vectorize(tangent))
    }

    /// `V(L) = 2 η⁺ V(∂ρ)`.
    pub fn sld(&self, tangent: &ComplexMatrix) -> Result<ComplexMatrix> {
        let v = self.pinv.apply(&vectorize(tangent)).scale(2.0);
        // exact Hermitian symmetrization; η⁺ preserves Hermiticity up to round-off
        Ok(unvectorize(&v, self.rho.dim())?.hermitian_part())
    }

    pub fn fisher(&self, tangents: &TangentSet) -> Fisher {
        let vs: Vec<ColumnVector> = tangents.derivatives().iter().map(vectorize).collect();
        let ws: Vec<ColumnVector> = vs.iter().map(|v| self.pinv.apply(v)).collect();
        let m = vs.len();
        let mut f = DMatrix::zeros(m, m);
        for a in 0..m {
            for b in a..m {
                let val = 2.0 * vs[a].dot(&ws[b]).re;
                f[(a, b)] = val;
                f[(b, a)] = val;
            }
        }
        let residuals = tangents.derivatives().iter().map(|t| self.support_residual(t)).collect();
        Fisher::new(tangents.axes().to_vec(), f, residuals)
    }
}

/// `F_μν = 2 Re V(∂_μρ)† η⁺ V(∂_νρ)`.
pub fn qfim_vectorized(rho: &DensityMatrix, tangents: &TangentSet) -> Result<Fisher> {
    check_dims(rho, tangents)?;
    Ok(EtaSolver::new(rho)?.fisher(tangents))
}

/// `F_μν = 2 Σ_{r_k + r_l > 0} ⟨k|∂_μρ|l⟩⟨l|∂_νρ|k⟩ / (r_k + r_l)` over the
/// eigenbasis of ρ.
pub fn qfim_spectral(rho: &DensityMatrix, tangents: &TangentSet) -> Result<Fisher> {
    check_dims(rho, tangents)?;
    let eig = eigh(rho.matrix())?;
    let n = rho.dim();
    let r = &eig.values;
    let cutoff = QFIM_RTOL * 2.0 * eig.max_value();
    let u = &eig.vectors;
    let ud = u.adjoint();
    // tangents in the eigenbasis of ρ
    let rotated: Vec<ComplexMatrix> = tangents.derivatives().iter().map(|d| &(&ud * d) * u).collect();
    let m = rotated.len();
    let mut f = DMatrix::zeros(m, m);
    let mut residuals = vec![0.0f64; m];
    for k in 0..n {
        for l in 0..n {
            let s = r[k] + r[l];
            if s > cutoff {
                for a in 0..m {
                    for b in a..m {
                        let term: Complex64 = rotated[a][(k, l)] * rotated[b][(l, k)];
                        f[(a, b)] += 2.0 * term.re / s;
                    }
                }
            } else {
                for (a, d) in rotated.iter().enumerate() {
                    residuals[a] += d[(k, l)].norm_sqr();
                }
            }
        }
    }
    for a in 0..m {
        for b in 0..a {
            f[(a, b)] = f[(b, a)];
        }
    }
    let residuals = residuals.into_iter().map(f64::sqrt).collect();
    Ok(Fisher::new(tangents.axes().to_vec(), f, residuals))
}

fn check_dims(rho: &DensityMatrix, tangents: &TangentSet) -> Result<()> {
    let n = rho.dim();
    if tangents.derivatives().iter().any(|d| d.rows() != n || d.cols() != n) {
        return Err(Error::InvalidShape(format!("tangents must be {n}x{n} like the state")));
    }
    Ok(())
}

/// Symmetric logarithmic derivative of one tangent.
pub fn sld(rho: &DensityMatrix, tangent: &ComplexMatrix) -> Result<ComplexMatrix> {
    EtaSolver::new(rho)?.sld(tangent)
}

/// `max |∂ρ - (Lρ + ρL)/2|` with the block between null vectors of ρ removed.
pub fn sld_residual(rho: &DensityMatrix, tangent: &ComplexMatrix, l: &ComplexMatrix) -> Result<f64> {
    let m = rho.matrix();
    let recon = (&(l * m) + &(m * l)).scale_real(0.5);
    let diff = tangent - &recon;
    let eig = eigh(m)?;
    let n = rho.dim();
    let cutoff = QFIM_RTOL * eig.max_value();
    let mut null = ComplexMatrix::zeros(n, n);
    for (k, &r) in eig.values.iter().enumerate() {
        if r <= cutoff {
            let v = eig.vector(k);
            null = &null + &ComplexMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        }
    }
    let outside = &(&null * &diff) * &null;
    Ok((&diff - &outside).max_abs())
}

/// Saturability diagnostics for a set of SLDs.
#[derive(Clone, Debug)]
pub struct Compatibility {
    /// `Im Tr(ρ L_μ L_ν)`; antisymmetric.
    pub weak_commutativity: DMatrix<f64>,
    /// Frobenius norms of `[L_μ, L_ν]`.
    pub commutator_norms: DMatrix<f64>,
    pub shared_eigenbasis: bool,
}

impl Compatibility {
    pub fn max_commutator_norm(&self) -> f64 {
        self.commutator_norms.iter().fold(0.0, |m, v| m.max(*v))
    }

    pub fn max_weak_commutativity(&self) -> f64 {
        self.weak_commutativity.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn compatibility(rho: &DensityMatrix, slds: &[ComplexMatrix]) -> Compatibility {
    let m = slds.len();
    let mut weak = DMatrix::zeros(m, m);
    let mut norms = DMatrix::zeros(m, m);
    let scale = slds
        .iter()
        .map(|l| l.frobenius_norm().powi(2))
        .fold(1.0, f64::max);
    let mut shared = true;
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            weak[(a, b)] = (&(rho.matrix() * &slds[a]) * &slds[b]).trace().im;
            let norm = commutator(&slds[a], &slds[b]).frobenius_norm();
            norms[(a, b)] = norm;
            if norm > SHARED_BASIS_TOL * scale {
                shared = false;
            }
        }
    }
    Compatibility {
        weak_commutativity: weak,
        commutator_norms: norms,
        shared_eigenbasis: shared,
    }
}

/// Everything computed for one state and tangent set.
#[derive(Clone, Debug)]
pub struct QfimReport {
    pub fisher: Fisher,
    pub slds: Vec<ComplexMatrix>,
    pub compatibility: Compatibility,
    /// Rank of η retained by the pseudo-inverse.
    pub support_rank: usize,
    /// Largest SLD defining-relation residual over the tangents.
    pub max_sld_residual: f64,
}

impl QfimReport {
    pub fn compute(rho: &DensityMatrix, tangents: &TangentSet) -> Result<Self> {
        check_dims(rho, tangents)?;
        let solver = EtaSolver::new(rho)?;
        let fisher = solver.fisher(tangents);
        let slds = tangents
            .derivatives()
            .iter()
            .map(|d| solver.sld(d))
            .collect::<Result<Vec<_>>>()?;
        let mut max_sld_residual: f64 = 0.0;
        for (a, (d, l)) in tangents.derivatives().iter().zip(&slds).enumerate() {
            if !fisher.unbounded[a] {
                max_sld_residual = max_sld_residual.max(sld_residual(rho, d, l)?);
            }
        }
        let compatibility = compatibility(rho, &slds);
        Ok(Self {
            fisher,
            slds,
            compatibility,
            support_rank: solver.support_rank(),
            max_sld_residual,
        })
    }

    pub fn sld_for(&self, axis: Axis) -> Option<&ComplexMatrix> {
        self.fisher.axes.iter().position(|&a| a == axis).map(|k| &self.slds[k])
    }
}
