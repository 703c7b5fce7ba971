//! Cramér–Rao bounds from a Fisher matrix.
//!
//! For `m` estimated parameters the simultaneous bound on parameter μ is
//! `(F⁻¹)_μμ` and the individual bound is `1/F_μμ`. Their totals give the
//! efficiency ratio
//!
//! ```text
//! Γ = (1/m) Σ (F⁻¹)_μμ / Σ 1/F_μμ
//! ```
//!
//! which equals `1/m` exactly when F is diagonal and grows with the
//! correlation between parameters.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::model::Axis;
use crate::qfim::Fisher;

/// `det` of the correlation matrix `D^{-1/2} F D^{-1/2}` at or below this
/// counts as singular. Equivalent to `det F ≤ SINGULAR_TOL · Π F_μμ`.
pub const SINGULAR_TOL: f64 = 1e-14;

/// Per-axis state of a bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AxisFlags {
    /// The state's derivative leaves the support of ρ: the variance bound is zero.
    pub unbounded_information: bool,
    /// F is singular along this axis: the simultaneous bound is infinite.
    pub unbounded_variance: bool,
}

#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub axes: Vec<Axis>,
    pub var_sim: Vec<f64>,
    pub var_ind: Vec<f64>,
    /// `None` when any variance is infinite or all individual variances vanish.
    pub gamma: Option<f64>,
    /// `(F⁻¹)₀₁`, the covariance bound between the first two axes.
    pub covariance_cross_term: Option<f64>,
    pub det_fisher: f64,
    /// Correlation-matrix determinant used for the singularity test.
    pub correlation_det: f64,
    pub singular: bool,
    pub flags: Vec<AxisFlags>,
}

impl BoundsReport {
    pub fn var_sim_for(&self, axis: Axis) -> Option<f64> {
        self.axes.iter().position(|&a| a == axis).map(|k| self.var_sim[k])
    }

    pub fn var_ind_for(&self, axis: Axis) -> Option<f64> {
        self.axes.iter().position(|&a| a == axis).map(|k| self.var_ind[k])
    }
}

/// Simultaneous and individual bounds from a Fisher matrix.
///
/// Axes with unbounded information get zero variance and are removed before
/// inversion. If the remaining block is singular, axes that overlap its null
/// space get infinite simultaneous variance; the others use the
/// pseudo-inverse.
pub fn crb(f: &Fisher) -> BoundsReport {
    let m = f.dim();
    let mut flags = vec![AxisFlags::default(); m];
    let mut var_sim = vec![0.0; m];
    let mut var_ind = vec![0.0; m];

    let kept: Vec<usize> = (0..m).filter(|&a| !f.unbounded[a]).collect();
    for a in 0..m {
        flags[a].unbounded_information = f.unbounded[a];
    }
    for &a in &kept {
        let d = f.matrix[(a, a)];
        var_ind[a] = if d > 0.0 { 1.0 / d } else { f64::INFINITY };
    }

    let k = kept.len();
    let sub = DMatrix::from_fn(k, k, |i, j| f.matrix[(kept[i], kept[j])]);
    let diag: Vec<f64> = (0..k).map(|i| sub[(i, i)]).collect();
    let positive: Vec<usize> = (0..k).filter(|&i| diag[i] > 0.0).collect();
    for i in 0..k {
        if diag[i] <= 0.0 {
            var_sim[kept[i]] = f64::INFINITY;
            flags[kept[i]].unbounded_variance = true;
        }
    }

    let p = positive.len();
    let scale: Vec<f64> = positive.iter().map(|&i| diag[i].sqrt()).collect();
    let corr = DMatrix::from_fn(p, p, |i, j| {
        if i == j {
            1.0
        } else {
            sub[(positive[i], positive[j])] / (scale[i] * scale[j])
        }
    });
    let correlation_det = if p == 0 { 1.0 } else { corr.determinant() };
    let mut singular = p < k;
    let mut inverse_corr = None;
    if p > 0 {
        if correlation_det > SINGULAR_TOL {
            inverse_corr = corr.clone().try_inverse();
        }
        if inverse_corr.is_none() {
            singular = true;
        }
    }

    match inverse_corr {
        Some(inv) => {
            for (i, &pi) in positive.iter().enumerate() {
                var_sim[kept[pi]] = inv[(i, i)] / diag[pi];
            }
        }
        None if p > 0 => {
            // pseudo-inverse on the range of the correlation matrix
            let eig = SymmetricEigen::new(corr);
            let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
            let null: Vec<usize> = (0..p).filter(|&j| eig.eigenvalues[j] <= 1e-10 * lmax).collect();
            for (i, &pi) in positive.iter().enumerate() {
                let overlap: f64 = null.iter().map(|&j| eig.eigenvectors[(i, j)].powi(2)).sum();
                let axis = kept[pi];
                if overlap > 1e-12 {
                    var_sim[axis] = f64::INFINITY;
                    flags[axis].unbounded_variance = true;
                } else {
                    let v: f64 = (0..p)
                        .filter(|j| !null.contains(j))
                        .map(|j| eig.eigenvectors[(i, j)].powi(2) / eig.eigenvalues[j])
                        .sum();
                    var_sim[axis] = v / diag[pi];
                }
            }
        }
        None => {}
    }

    let det_fisher = if f.any_unbounded() { f64::NAN } else { f.matrix.determinant() };

    let covariance_cross_term = if m >= 2 && !singular && !f.unbounded[0] && !f.unbounded[1] {
        let full = DMatrix::from_fn(k, k, |i, j| f.matrix[(kept[i], kept[j])]);
        full.try_inverse().map(|inv| inv[(0, 1)])
    } else {
        None
    };

    let gamma = gamma_ratio_parts(&var_sim, &var_ind);

    BoundsReport {
        axes: f.axes.clone(),
        var_sim,
        var_ind,
        gamma,
        covariance_cross_term,
        det_fisher,
        correlation_det,
        singular,
        flags,
    }
}

fn gamma_ratio_parts(var_sim: &[f64], var_ind: &[f64]) -> Option<f64> {
    let m = var_sim.len() as f64;
    if var_sim.iter().chain(var_ind).any(|v| !v.is_finite()) {
        return None;
    }
    let ind: f64 = var_ind.iter().sum();
    if ind <= 0.0 {
        return None;
    }
    Some(var_sim.iter().sum::<f64>() / m / ind)
}

/// Γ from a report, or `None` when undefined.
pub fn gamma_ratio(report: &BoundsReport) -> Option<f64> {
    gamma_ratio_parts(&report.var_sim, &report.var_ind)
}

pub mod closed_forms {
    //! Closed-form bounds for the noiseless and dephased stationary state.
    //!
    //! These are reference expressions; the numerical pipeline is checked
    //! against them and any disagreement is reported as a
    //! [`FormulaDiscrepancy`] rather than treated as an error.

    use crate::error::{domain, Result};
    use crate::model::ModelPoint;

    /// `(Var T, Var Δ₀)` for the noiseless state.
    pub fn noiseless_closed_forms(p: &ModelPoint) -> Result<(f64, f64)> {
        if !p.is_interior() {
            return Err(domain("closed forms need delta0 strictly inside (-3, 1)"));
        }
        let (t, w, d) = (p.temperature(), p.omega(), p.delta0());
        let ch = (w / t).cosh();
        let var_t = 2.0 * t.powi(4) * (1.0 + 2.0 * ch).powi(2) / (w * w * (d + 3.0) * (2.0 + ch));
        let var_d = 3.0 - 2.0 * d - d * d;
        Ok((var_t, var_d))
    }

    /// Dephased bounds; `None` marks an expression whose denominator vanished
    /// or overflowed.
    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct DephasingClosedForms {
        pub var_t_sim: Option<f64>,
        pub var_d_sim: Option<f64>,
        pub var_t_ind: Option<f64>,
        pub var_d_ind: Option<f64>,
        pub gamma: Option<f64>,
    }

    fn defined(num: f64, den: f64) -> Option<f64> {
        let v = num / den;
        (den != 0.0 && v.is_finite()).then_some(v)
    }

    pub fn dephasing_closed_forms(p: &ModelPoint, kappa: f64) -> Result<DephasingClosedForms> {
        if !p.is_interior() {
            return Err(domain("closed forms need delta0 strictly inside (-3, 1)"));
        }
        if !(0.0..=1.0).contains(&kappa) {
            return Err(domain(format!("kappa must lie in [0, 1], got {kappa}")));
        }
        let (t, w, d, k) = (p.temperature(), p.omega(), p.delta0(), kappa);
        let k2 = k * k;
        let c = (w / t).cosh();
        let c2 = (2.0 * w / t).cosh();
        let e = (w / t).exp();
        let (e2, e3, e4) = (e * e, e * e * e, e * e * e * e);
        let t4 = t.powi(4);

        let q = 1.0 - d + (5.0 + 3.0 * d) * k2 + 4.0 * (1.0 + (2.0 + d) * k2) * c + (d - 1.0) * (k2 - 1.0) * c2;
        let r = 2.0 + 2.0 * (2.0 + d) * k2 + (1.0 - d + 2.0 * (1.0 + d) * k2) * c;
        let u = 2.0 + k + d * k + (d - 1.0) * (k - 1.0) * c;
        let v = -2.0 + k + d * k + (d - 1.0) * (1.0 + k) * c;
        let p1 = -12.0 + 5.0 * d - d * d + (3.0 + d + 4.0 * d * d) * k2;
        let p2 = (d - 1.0) * (2.0 + k2 + d * (-1.0 + 2.0 * k2));
        let p3 = 13.0 + 2.0 * k2 + d * (-10.0 + d - 6.0 * d * k2);

        let var_t_sim = defined(t4 * (1.0 + 2.0 * c) * q, (3.0 + d) * w * w * r);
        let bracket = -2.0 * e2 * p1 - p2 * (1.0 + e4) + (e + e3) * p3;
        let var_d_sim = defined((-2.0 * w / t).exp() * (3.0 + d) * bracket, 2.0 * (1.0 + 2.0 * c) * r);
        let a = (3.0 + d) * (2.0 * e2 * p1 + p2 * (1.0 + e4) - (e + e3) * p3);
        let var_t_ind = defined(4.0 * e2 * t4 * (1.0 + 2.0 * c).powi(2) * u * v, a * w * w);
        let var_d_ind = defined(-2.0 * (3.0 + d) * u * v, q);
        let g_num = q * (p1 - p3 * c + (d - 1.0) * (2.0 - d + k2 + 2.0 * d * k2) * c2);
        let g_den = 4.0 * (1.0 + 2.0 * c) * u * v * r;
        let gamma = defined(g_num, g_den);
        Ok(DephasingClosedForms {
            var_t_sim,
            var_d_sim,
            var_t_ind,
            var_d_ind,
            gamma,
        })
    }

    /// A closed-form value that disagrees with the numerical pipeline.
    #[derive(Clone, Debug, PartialEq)]
    pub struct FormulaDiscrepancy {
        pub expression: &'static str,
        pub temperature: f64,
        pub omega: f64,
        pub delta0: f64,
        pub kappa: f64,
        pub closed_form: Option<f64>,
        pub pipeline: f64,
        pub relative_deviation: f64,
    }

    /// Relative tolerance for closed-form agreement.
    pub const FIXTURE_RTOL: f64 = 1e-6;

    /// One closed-form vs pipeline comparison.
    #[derive(Clone, Debug, PartialEq)]
    pub struct FixtureComparison {
        pub expression: &'static str,
        pub closed_form: Option<f64>,
        pub pipeline: f64,
        pub relative_deviation: f64,
    }

    impl FixtureComparison {
        pub fn agrees(&self) -> bool {
            self.relative_deviation <= FIXTURE_RTOL
        }
    }

    /// Compares the dephasing closed forms with pipeline values
    /// `[var_T_sim, var_D_sim, var_T_ind, var_D_ind, gamma]`.
    pub fn compare_dephasing(
        p: &ModelPoint,
        kappa: f64,
        pipeline: [f64; 5],
    ) -> Result<(Vec<FixtureComparison>, Vec<FormulaDiscrepancy>)> {
        let cf = dephasing_closed_forms(p, kappa)?;
        let named = [
            ("var_T_sim", cf.var_t_sim),
            ("var_D_sim", cf.var_d_sim),
            ("var_T_ind", cf.var_t_ind),
            ("var_D_ind", cf.var_d_ind),
            ("gamma", cf.gamma),
        ];
        let mut comparisons = Vec::new();
        let mut findings = Vec::new();
        for ((expression, closed_form), pipe) in named.into_iter().zip(pipeline) {
            let relative_deviation = match closed_form {
                Some(v) => (v - pipe).abs() / pipe.abs().max(f64::MIN_POSITIVE),
                None => f64::INFINITY,
            };
            let cmp = FixtureComparison {
                expression,
                closed_form,
                pipeline: pipe,
                relative_deviation,
            };
            if !cmp.agrees() {
                findings.push(FormulaDiscrepancy {
                    expression,
                    temperature: p.temperature(),
                    omega: p.omega(),
                    delta0: p.delta0(),
                    kappa,
                    closed_form,
                    pipeline: pipe,
                    relative_deviation,
                });
            }
            comparisons.push(cmp);
        }
        Ok((comparisons, findings))
    }
}
