//! Stationary state of the two-detector system and its parameter derivatives.
//!
//! The detectors relax to an X-shaped two-qubit state fixed by the thermal
//! parameter `η = tanh(ω / 2T)` and the conserved initial-state parameter
//! `Δ₀ ∈ [-3, 1]`. In the computational basis `|00⟩, |01⟩, |10⟩, |11⟩`:
//!
//! ```text
//!     ⎛ ee   0    0    0  ⎞      ee  = (3+Δ₀)(η-1)² / 4(3+η²)
//! ρ = ⎜ 0    mid  coh  0  ⎟      mid = (3-Δ₀-(Δ₀+1)η²) / 4(3+η²)
//!     ⎜ 0    coh  mid  0  ⎟      gg  = (3+Δ₀)(η+1)² / 4(3+η²)
//!     ⎝ 0    0    0    gg ⎠      coh = (Δ₀-η²) / 2(3+η²)
//! ```
//!
//! This slot assignment is the one with unit trace; [`stationary_state_as_printed`]
//! builds the transposed-slot variant for comparison only.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::matops::{c, eigh, kron, pauli, ComplexMatrix, ColumnVector};

/// A parameter that can be estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Temperature,
    Delta0,
    Omega,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Temperature, Axis::Delta0, Axis::Omega];

    /// Name used in configuration files.
    pub fn name(self) -> &'static str {
        match self {
            Axis::Temperature => "T",
            Axis::Delta0 => "delta0",
            Axis::Omega => "omega",
        }
    }

    /// Short tag used in output column names (`var_T_sim`, `F_Dw`, ...).
    pub fn tag(self) -> &'static str {
        match self {
            Axis::Temperature => "T",
            Axis::Delta0 => "D",
            Axis::Omega => "w",
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        match s.trim() {
            "T" | "temperature" => Some(Axis::Temperature),
            "delta0" | "D" | "Delta0" => Some(Axis::Delta0),
            "omega" | "w" => Some(Axis::Omega),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `η = tanh(ω / 2T)`.
pub fn thermal_parameter(temperature: f64, omega: f64) -> Result<f64> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(domain(format!("temperature must be positive, got {temperature}")));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(domain(format!("energy gap must be positive, got {omega}")));
    }
    Ok((omega / (2.0 * temperature)).tanh())
}

/// `(T, ω, Δ₀)` with the derived thermal parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelPoint {
    temperature: f64,
    omega: f64,
    delta0: f64,
    eta: f64,
}

impl ModelPoint {
    pub fn new(temperature: f64, omega: f64, delta0: f64) -> Result<Self> {
        let eta = thermal_parameter(temperature, omega)?;
        if !(-3.0..=1.0).contains(&delta0) {
            return Err(domain(format!("delta0 must lie in [-3, 1], got {delta0}")));
        }
        Ok(Self {
            temperature,
            omega,
            delta0,
            eta,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    pub fn value(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Temperature => self.temperature,
            Axis::Delta0 => self.delta0,
            Axis::Omega => self.omega,
        }
    }

    pub fn with_axis(&self, axis: Axis, value: f64) -> Result<Self> {
        match axis {
            Axis::Temperature => Self::new(value, self.omega, self.delta0),
            Axis::Delta0 => Self::new(self.temperature, self.omega, value),
            Axis::Omega => Self::new(self.temperature, value, self.delta0),
        }
    }

    /// Δ₀ strictly inside (-3, 1). On the boundary the state loses rank and
    /// the Fisher information is not finite.
    pub fn is_interior(&self) -> bool {
        self.delta0 > -3.0 && self.delta0 < 1.0
    }
}

/// The four independent entries of an X-state with equal middle populations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XElements {
    pub corner_ee: f64,
    pub mid: f64,
    pub corner_gg: f64,
    pub coh: f64,
}

impl XElements {
    pub fn to_matrix(self) -> ComplexMatrix {
        let mut m = ComplexMatrix::diag(&[self.corner_ee, self.mid, self.mid, self.corner_gg]);
        m[(1, 2)] = c(self.coh);
        m[(2, 1)] = c(self.coh);
        m
    }
}

pub fn stationary_elements(p: &ModelPoint) -> XElements {
    let (e, d) = (p.eta, p.delta0);
    let den = 3.0 + e * e;
    // 1 - η without cancellation; the middle block is built from its
    // eigenvalues mid ± coh so the small one keeps its relative accuracy
    let one_minus = 2.0 / ((p.omega / p.temperature).exp() + 1.0);
    let small = (3.0 + d) * one_minus * (1.0 + e) / (4.0 * den);
    let large = (1.0 - d) / 4.0;
    XElements {
        corner_ee: (3.0 + d) * one_minus * one_minus / (4.0 * den),
        mid: (large + small) / 2.0,
        corner_gg: (3.0 + d) * (e + 1.0).powi(2) / (4.0 * den),
        coh: (small - large) / 2.0,
    }
}

/// `1 - η² = sech²(ω / 2T)`, evaluated without cancellation near η → 1.
fn sech2(p: &ModelPoint) -> f64 {
    let ch = (p.omega / (2.0 * p.temperature)).cosh();
    1.0 / (ch * ch)
}

/// Closed-form derivative of the element formulas along `axis`.
pub fn stationary_element_derivatives(p: &ModelPoint, axis: Axis) -> XElements {
    let (e, d) = (p.eta, p.delta0);
    let den = 3.0 + e * e;
    match axis {
        Axis::Delta0 => XElements {
            corner_ee: (e - 1.0).powi(2) / (4.0 * den),
            mid: -(1.0 + e * e) / (4.0 * den),
            corner_gg: (e + 1.0).powi(2) / (4.0 * den),
            coh: 1.0 / (2.0 * den),
        },
        Axis::Temperature | Axis::Omega => {
            let deta = match axis {
                Axis::Temperature => -sech2(p) * p.omega / (2.0 * p.temperature * p.temperature),
                _ => sech2(p) / (2.0 * p.temperature),
            };
            let den2 = den * den;
            XElements {
                corner_ee: deta * (3.0 + d) * (e - 1.0) * (3.0 + e) / (2.0 * den2),
                mid: -deta * e * (3.0 + d) / den2,
                corner_gg: deta * (3.0 + d) * (e + 1.0) * (3.0 - e) / (2.0 * den2),
                coh: -deta * e * (3.0 + d) / den2,
            }
        }
    }
}

/// A validated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    min_eigenvalue: f64,
}

/// Trace tolerance for [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue a density matrix may have.
pub const PSD_TOL: f64 = 1e-10;

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidShape(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_hermitian() {
            return Err(Error::Contract(format!(
                "density matrix is not Hermitian (defect {:.3e})",
                matrix.hermiticity_defect()
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Contract(format!("density matrix trace is {tr}, expected 1")));
        }
        let min_eigenvalue = eigh(&matrix)?.min_value();
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::Contract(format!(
                "density matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"
            )));
        }
        Ok(Self {
            matrix,
            min_eigenvalue,
        })
    }

    /// `|ψ⟩⟨ψ|` for a normalized ket.
    pub fn pure(ket: &ColumnVector) -> Result<Self> {
        let n = ket.dim();
        Self::new(ComplexMatrix::from_fn(n, n, |i, j| ket[i] * ket[j].conj()))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let matrix = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        Self {
            matrix,
            min_eigenvalue: 1.0 / n as f64,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn trace_residual(&self) -> f64 {
        (self.matrix.trace() - c(1.0)).norm()
    }

    pub fn corner_ee(&self) -> f64 {
        self.matrix[(0, 0)].re
    }

    /// First middle population; equals `matrix[(2,2)]` for the states built here.
    pub fn mid(&self) -> f64 {
        self.matrix[(1, 1)].re
    }

    pub fn corner_gg(&self) -> f64 {
        self.matrix[(3, 3)].re
    }

    pub fn coh(&self) -> f64 {
        self.matrix[(1, 2)].re
    }

    pub fn is_x_structured(&self) -> bool {
        is_x_structured(&self.matrix)
    }
}

/// Nonzero entries only on the diagonal and the (1,2)/(2,1) pair (0-based).
pub fn is_x_structured(m: &ComplexMatrix) -> bool {
    if m.rows() != 4 || m.cols() != 4 {
        return false;
    }
    let scale = m.max_abs().max(1.0);
    for i in 0..4 {
        for j in 0..4 {
            let allowed = i == j || (i, j) == (1, 2) || (i, j) == (2, 1);
            if !allowed && m[(i, j)].norm() > 1e-12 * scale {
                return false;
            }
        }
    }
    true
}

pub fn stationary_state(p: &ModelPoint) -> Result<DensityMatrix> {
    DensityMatrix::new(stationary_elements(p).to_matrix())
}

/// The stationary matrix with the printed middle/corner slot layout: the
/// `(3+Δ₀)(η+1)²` population on the middle diagonal and the
/// `3-Δ₀-(Δ₀+1)η²` population in the `|11⟩` corner. Its trace is not one, so
/// it is returned as a bare matrix and never enters the pipeline.
pub fn stationary_state_as_printed(p: &ModelPoint) -> ComplexMatrix {
    let el = stationary_elements(p);
    XElements {
        corner_ee: el.corner_ee,
        mid: el.corner_gg,
        corner_gg: el.mid,
        coh: el.coh,
    }
    .to_matrix()
}

/// How to differentiate the stationary state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativeMethod {
    Analytic,
    /// `[ρ(λ+h') - ρ(λ-h')] / 2h'` with `h' = h · max(1, |λ|)`.
    CentralDifference { step: f64 },
}

impl DerivativeMethod {
    pub const DEFAULT_STEP: f64 = 1e-5;

    pub fn central() -> Self {
        DerivativeMethod::CentralDifference {
            step: Self::DEFAULT_STEP,
        }
    }
}

pub fn state_derivative(p: &ModelPoint, axis: Axis, method: DerivativeMethod) -> Result<ComplexMatrix> {
    match method {
        DerivativeMethod::Analytic => Ok(stationary_element_derivatives(p, axis).to_matrix()),
        DerivativeMethod::CentralDifference { step } => {
            let lambda = p.value(axis);
            let h = step * lambda.abs().max(1.0);
            let plus = p.with_axis(axis, lambda + h)?;
            let minus = p.with_axis(axis, lambda - h)?;
            let diff = &stationary_elements(&plus).to_matrix() - &stationary_elements(&minus).to_matrix();
            Ok(diff.scale_real(1.0 / (2.0 * h)))
        }
    }
}

/// Ordered parameter derivatives `∂ρ/∂λ_μ`.
#[derive(Clone, Debug)]
pub struct TangentSet {
    axes: Vec<Axis>,
    derivatives: Vec<ComplexMatrix>,
}

impl TangentSet {
    /// Validates that every derivative is Hermitian and traceless to 1e-10.
    pub fn new(entries: Vec<(Axis, ComplexMatrix)>) -> Result<Self> {
        let mut axes = Vec::with_capacity(entries.len());
        let mut derivatives = Vec::with_capacity(entries.len());
        for (axis, m) in entries {
            if axes.contains(&axis) {
                return Err(domain(format!("axis {axis} appears twice in the tangent set")));
            }
            if !m.is_square() || m.hermiticity_defect() > 1e-10 * m.max_abs().max(1.0) {
                return Err(Error::Contract(format!("derivative along {axis} is not Hermitian")));
            }
            let tr = m.trace().norm();
            if tr > 1e-10 {
                return Err(Error::Contract(format!(
                    "derivative along {axis} has trace {tr:.3e}; a unit-trace family has traceless derivatives"
                )));
            }
            axes.push(axis);
            derivatives.push(m);
        }
        Ok(Self { axes, derivatives })
    }

    pub fn for_point(p: &ModelPoint, axes: &[Axis], method: DerivativeMethod) -> Result<Self> {
        let entries = axes
            .iter()
            .map(|&a| Ok((a, state_derivative(p, a, method)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn derivatives(&self) -> &[ComplexMatrix] {
        &self.derivatives
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn get(&self, axis: Axis) -> Option<&ComplexMatrix> {
        self.axes.iter().position(|&a| a == axis).map(|k| &self.derivatives[k])
    }

    /// Pushes every derivative through a linear map (e.g. a channel).
    pub fn map(&self, f: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<Self> {
        let entries = self
            .axes
            .iter()
            .zip(&self.derivatives)
            .map(|(&a, m)| Ok((a, f(m)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

/// `Σᵢ Tr[ρ (σᵢ ⊗ σᵢ)]` over `i ∈ {x, y, z}`.
pub fn delta0_of_initial_state(rho: &DensityMatrix) -> f64 {
    [pauli::x(), pauli::y(), pauli::z()]
        .iter()
        .map(|s| (rho.matrix() * &kron(s, s)).trace().re)
        .sum()
}
