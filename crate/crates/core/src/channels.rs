//! Noise acting on the detector pair.
//!
//! Two families are provided: correlated random-telegraph dephasing, which
//! scales the X-state coherence by a decoherence factor κ(t), and local Kraus
//! channels (amplitude damping, phase flip, phase damping) applied to both
//! qubits as `K_k ⊗ K_l`. Every channel is linear, so parameter derivatives are
//! propagated with the same map: `∂E(ρ) = E(∂ρ)`.

use std::fmt;

use crate::error::{contract, domain, Result};
use crate::matops::{kron, pauli, ComplexMatrix};
use crate::model::{is_x_structured, DensityMatrix};

/// Which closed form of the random-telegraph correlation function to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KernelForm {
    /// `e^{-αt}[cos βt + (α/β) sin βt]` and its hyperbolic analogue. Starts
    /// with zero slope and stays within [-1, 1].
    #[default]
    Normalized,
    /// `e^{-αt}[cos βt + sin(βt)/β]` and its hyperbolic analogue. For α < 1 it
    /// overshoots 1 at short times, so it is kept for comparison only.
    AsPrinted,
}

impl KernelForm {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "normalized" => Some(Self::Normalized),
            "printed" | "as_printed" => Some(Self::AsPrinted),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// α > 1: overdamped, monotone decay.
    Markovian,
    /// α = 1 to within β < 1e-6.
    Critical,
    /// α < 1: damped oscillations, information backflow.
    NonMarkovian,
}

/// β below which the kernel switches to its β → 0 limit.
pub const CRITICAL_BETA: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemoryKernelSpec {
    tau: f64,
    mu: f64,
    form: KernelForm,
}

impl MemoryKernelSpec {
    pub fn new(tau: f64, mu: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(domain(format!("kernel timescale tau must be positive, got {tau}")));
        }
        check_unit("memory degree mu", mu)?;
        Ok(Self {
            tau,
            mu,
            form: KernelForm::Normalized,
        })
    }

    pub fn with_form(mut self, form: KernelForm) -> Self {
        self.form = form;
        self
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn form(&self) -> KernelForm {
        self.form
    }

    pub fn alpha(&self) -> f64 {
        1.0 / (2.0 * self.tau)
    }

    pub fn beta(&self) -> f64 {
        let a = self.alpha();
        (a * a - 1.0).abs().sqrt()
    }

    pub fn regime(&self) -> Regime {
        if self.beta() < CRITICAL_BETA {
            Regime::Critical
        } else if self.alpha() < 1.0 {
            Regime::NonMarkovian
        } else {
            Regime::Markovian
        }
    }
}

fn check_unit(what: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(format!("{what} must lie in [0, 1], got {x}")))
    }
}

/// Random-telegraph correlation function F(t).
pub fn memory_kernel(t: f64, spec: &MemoryKernelSpec) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("time must be non-negative, got {t}")));
    }
    let a = spec.alpha();
    let b = spec.beta();
    // coefficient of the sin/sinh term
    let g = match spec.form {
        KernelForm::Normalized => a / b,
        KernelForm::AsPrinted => 1.0 / b,
    };
    Ok(match spec.regime() {
        Regime::Critical => (-t).exp() * (1.0 + t),
        Regime::NonMarkovian => (-a * t).exp() * ((b * t).cos() + g * (b * t).sin()),
        // cosh and sinh split into decaying exponentials so large t cannot overflow
        Regime::Markovian => {
            0.5 * ((1.0 + g) * (-(a - b) * t).exp() + (1.0 - g) * (-(a + b) * t).exp())
        }
    })
}

/// κ = F² + (1 - F²)μ.
pub fn kappa_from_kernel(f: f64, mu: f64) -> f64 {
    f * f + (1.0 - f * f) * mu
}

pub fn kappa(t: f64, spec: &MemoryKernelSpec) -> Result<f64> {
    Ok(kappa_from_kernel(memory_kernel(t, spec)?, spec.mu))
}

/// Scales the (1,2)/(2,1) coherence of an X-structured operator by κ.
pub fn dephase_operator(m: &ComplexMatrix, kappa: f64) -> Result<ComplexMatrix> {
    check_unit("decoherence factor kappa", kappa)?;
    if !is_x_structured(m) {
        return Err(contract("dephasing map expects an X-structured 4x4 operator"));
    }
    let mut out = m.clone();
    out[(1, 2)] *= kappa;
    out[(2, 1)] *= kappa;
    Ok(out)
}

pub fn apply_dephasing(rho: &DensityMatrix, kappa: f64) -> Result<DensityMatrix> {
    DensityMatrix::new(dephase_operator(rho.matrix(), kappa)?)
}

/// Single-qubit Pauli probabilities `(p₀, p_x, p_y, p_z)` with memory degree μ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelatedPauliSpec {
    probs: [f64; 4],
    mu: f64,
}

impl CorrelatedPauliSpec {
    pub fn new(probs: [f64; 4], mu: f64) -> Result<Self> {
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(domain(format!("Pauli probabilities must be non-negative, got {probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(domain(format!("Pauli probabilities sum to {total}, expected 1")));
        }
        check_unit("memory degree mu", mu)?;
        Ok(Self { probs, mu })
    }

    /// `p₀ = 1 - q`, `p_z = q` with `q = (1 - F)/2`.
    pub fn pure_dephasing(kernel: f64, mu: f64) -> Result<Self> {
        let q = (1.0 - kernel) / 2.0;
        Self::new([1.0 - q, 0.0, 0.0, q], mu)
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `p_{m,n} = (1 - μ) p_m p_n + μ p_m δ_{m,n}`.
    pub fn joint(&self, m: usize, n: usize) -> f64 {
        let diag = if m == n { self.probs[m] } else { 0.0 };
        (1.0 - self.mu) * self.probs[m] * self.probs[n] + self.mu * diag
    }
}

/// `Σ p_{m,n} (σ_m⊗σ_n) X (σ_m⊗σ_n)†`.
pub fn correlated_pauli_operator(m: &ComplexMatrix, spec: &CorrelatedPauliSpec) -> Result<ComplexMatrix> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(crate::Error::InvalidShape("correlated Pauli map acts on 4x4 operators".into()));
    }
    let paulis = pauli::all();
    let mut out = ComplexMatrix::zeros(4, 4);
    for (a, sa) in paulis.iter().enumerate() {
        for (b, sb) in paulis.iter().enumerate() {
            let p = spec.joint(a, b);
            if p == 0.0 {
                continue;
            }
            let k = kron(sa, sb);
            let term = &(&k * m) * &k.adjoint();
            out = &out + &term.scale_real(p);
        }
    }
    Ok(out)
}

pub fn apply_correlated_pauli(rho: &DensityMatrix, spec: &CorrelatedPauliSpec) -> Result<DensityMatrix> {
    DensityMatrix::new(correlated_pauli_operator(rho.matrix(), spec)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KrausLabel {
    AmplitudeDamping,
    PhaseFlip,
    PhaseDamping,
    Custom,
}

impl fmt::Display for KrausLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KrausLabel::AmplitudeDamping => "AD",
            KrausLabel::PhaseFlip => "PF",
            KrausLabel::PhaseDamping => "PD",
            KrausLabel::Custom => "custom",
        })
    }
}

/// Single-qubit Kraus operators, applied identically to both detectors.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausFamily {
    label: KrausLabel,
    strength: f64,
    ops: Vec<ComplexMatrix>,
}

/// Tolerance on `Σ K†K = I`.
pub const CLOSURE_TOL: f64 = 1e-12;

impl KrausFamily {
    /// Unvalidated; closure is checked when the family is applied.
    pub fn custom(ops: Vec<ComplexMatrix>) -> Self {
        Self {
            label: KrausLabel::Custom,
            strength: f64::NAN,
            ops,
        }
    }

    pub fn label(&self) -> KrausLabel {
        self.label
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// `max |Σ K†K - I|`, or infinity for malformed operators.
    pub fn closure_defect(&self) -> f64 {
        let Some(first) = self.ops.first() else {
            return f64::INFINITY;
        };
        let n = first.cols();
        if self.ops.iter().any(|k| k.rows() != n || k.cols() != n) {
            return f64::INFINITY;
        }
        let sum = self
            .ops
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, k| &acc + &(&k.adjoint() * k));
        sum.max_abs_diff(&ComplexMatrix::identity(n))
    }

    fn check_closure(&self) -> Result<()> {
        let defect = self.closure_defect();
        if defect <= CLOSURE_TOL {
            Ok(())
        } else {
            Err(contract(format!("Kraus operators violate closure (defect {defect:.3e})")))
        }
    }
}

fn named(label: KrausLabel, s: f64, ops: Vec<ComplexMatrix>) -> Result<KrausFamily> {
    check_unit("channel strength s", s)?;
    Ok(KrausFamily {
        label,
        strength: s,
        ops,
    })
}

/// Amplitude damping: `K₁ = diag(1, √(1-s))`, `K₂ = √s |0⟩⟨1|`.
pub fn kraus_ad(s: f64) -> Result<KrausFamily> {
    check_unit("channel strength s", s)?;
    let k1 = ComplexMatrix::diag(&[1.0, (1.0 - s).sqrt()]);
    let k2 = ComplexMatrix::from_real_rows(&[[0.0, s.sqrt()], [0.0, 0.0]]);
    named(KrausLabel::AmplitudeDamping, s, vec![k1, k2])
}

/// Phase flip: `K₁ = √s I`, `K₂ = √(1-s) σ_z`.
pub fn kraus_pf(s: f64) -> Result<KrausFamily> {
    check_unit("channel strength s", s)?;
    let k1 = pauli::identity().scale_real(s.sqrt());
    let k2 = pauli::z().scale_real((1.0 - s).sqrt());
    named(KrausLabel::PhaseFlip, s, vec![k1, k2])
}

/// Phase damping: `K₁ = diag(1, √(1-s))`, `K₂ = diag(0, √s)`.
pub fn kraus_pd(s: f64) -> Result<KrausFamily> {
    check_unit("channel strength s", s)?;
    let k1 = ComplexMatrix::diag(&[1.0, (1.0 - s).sqrt()]);
    let k2 = ComplexMatrix::diag(&[0.0, s.sqrt()]);
    named(KrausLabel::PhaseDamping, s, vec![k1, k2])
}

/// `s = 1 - e^{-vt}` for a channel driven at rate `v` for time `t`.
pub fn strength_from_rate(v: f64, t: f64) -> Result<f64> {
    if !(v >= 0.0) || !(t >= 0.0) {
        return Err(domain(format!("rate and time must be non-negative, got v={v}, t={t}")));
    }
    Ok(-(-v * t).exp_m1())
}

/// `Σ_{k,l} (K_k⊗K_l) X (K_k⊗K_l)†`.
pub fn local_product_operator(m: &ComplexMatrix, fam: &KrausFamily) -> Result<ComplexMatrix> {
    fam.check_closure()?;
    let d = fam.ops[0].rows();
    if m.rows() != d * d || m.cols() != d * d {
        return Err(crate::Error::InvalidShape(format!(
            "local channel on {d}-level systems needs a {0}x{0} operator",
            d * d
        )));
    }
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for ka in &fam.ops {
        for kb in &fam.ops {
            let k = kron(ka, kb);
            out = &out + &(&(&k * m) * &k.adjoint());
        }
    }
    Ok(out)
}

pub fn apply_local_product(rho: &DensityMatrix, fam: &KrausFamily) -> Result<DensityMatrix> {
    DensityMatrix::new(local_product_operator(rho.matrix(), fam)?)
}

/// A trace-preserving map on the detector pair.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec {
    Identity,
    /// Correlated random-telegraph dephasing, already reduced to its factor κ.
    Dephasing { kappa: f64 },
    CorrelatedPauli(CorrelatedPauliSpec),
    Local(KrausFamily),
}

impl ChannelSpec {
    /// Dephasing at time `t` under the given kernel.
    pub fn dephasing_at(t: f64, spec: &MemoryKernelSpec) -> Result<Self> {
        Ok(ChannelSpec::Dephasing {
            kappa: kappa(t, spec)?,
        })
    }

    /// Applies the map to any operator of the right shape (states or tangents).
    pub fn map(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            ChannelSpec::Identity => Ok(m.clone()),
            ChannelSpec::Dephasing { kappa } => dephase_operator(m, *kappa),
            ChannelSpec::CorrelatedPauli(spec) => correlated_pauli_operator(m, spec),
            ChannelSpec::Local(fam) => local_product_operator(m, fam),
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            ChannelSpec::Identity => Ok(rho.clone()),
            _ => DensityMatrix::new(self.map(rho.matrix())?),
        }
    }

    /// κ when this is the dephasing map.
    pub fn dephasing_kappa(&self) -> Option<f64> {
        match self {
            ChannelSpec::Dephasing { kappa } => Some(*kappa),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            ChannelSpec::Identity => "none".into(),
            ChannelSpec::Dephasing { kappa } => format!("dephasing(kappa={kappa})"),
            ChannelSpec::CorrelatedPauli(s) => format!("correlated_pauli(p={:?}, mu={})", s.probs, s.mu),
            ChannelSpec::Local(f) => format!("{}(s={})", f.label, f.strength),
        }
    }
}
