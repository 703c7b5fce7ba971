//! Self-checks run by `udwq verify`.
//!
//! `Fast` runs oracle, closed-form and channel checks on coarse grids.
//! `Full` adds dense grids, time and strength sweeps, the ω axis and a timed
//! 200×200 sweep.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::closed_forms::{compare_dephasing, dephasing_closed_forms, noiseless_closed_forms};
use crate::channels::{
    apply_correlated_pauli, apply_dephasing, apply_local_product, kappa_from_kernel, kraus_ad, kraus_pd, kraus_pf,
    memory_kernel, ChannelSpec, CorrelatedPauliSpec, KrausFamily, MemoryKernelSpec,
};
use crate::error::Result;
use crate::fixtures::{common_eigenbasis, sld_delta0, sld_temperature, EtaInverseCoefficients};
use crate::matops::{commutator, pinv_psd, PINV_RTOL};
use crate::model::{stationary_state, Axis, DerivativeMethod, ModelPoint, TangentSet};
use crate::pipeline::evaluate;
use crate::qfim::{build_eta, qfim_spectral, qfim_vectorized};
use crate::sweep::{run_sweep, write_table, Format, SweepConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_residual: f64,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub level: Level,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{status}  {:<28} max_residual={:<12.3e} {}", c.name, c.max_residual, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Hooks for mutation testing the checks themselves.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// κ as a function of `(F, μ)`.
    pub kappa: fn(f64, f64) -> f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            kappa: kappa_from_kernel,
        }
    }
}

pub fn verify(level: Level) -> VerifyReport {
    verify_with(level, &VerifyOptions::default())
}

pub fn verify_with(level: Level, opts: &VerifyOptions) -> VerifyReport {
    let full = level == Level::Full;
    let mut checks = vec![
        run("noiseless_var_delta0", || noiseless_var_delta0(full)),
        run("noiseless_var_T", || noiseless_var_t(full)),
        run("noiseless_gamma", || noiseless_gamma(full)),
        run("sld_fixtures", sld_fixtures),
        run("oracle_equivalence", || oracle_equivalence(if full { 100 } else { 20 })),
        run("eta_inverse_fixture", || eta_inverse(if full { 20 } else { 5 })),
        run("channel_contracts", || channel_contracts(full)),
        run("correlated_pauli_kappa", || correlated_pauli_kappa(opts.kappa)),
        run("dephasing_closed_forms", || dephasing_fixtures(if full { 20 } else { 5 })),
    ];
    if full {
        checks.push(run("markov_monotone", markov_monotone));
        checks.push(run("non_markov_oscillation", non_markov_oscillation));
        checks.push(run("strength_sweeps", strength_sweeps));
        checks.push(run("gamma_range", gamma_range));
        checks.push(run("omega_axis", omega_axis));
        checks.push(run("sweep_performance", sweep_performance));
    }
    VerifyReport { level, checks }
}

type Outcome = Result<(bool, f64, String)>;

fn run(name: &'static str, f: impl FnOnce() -> Outcome) -> CheckResult {
    match f() {
        Ok((passed, max_residual, detail)) => CheckResult {
            name,
            passed,
            max_residual,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            max_residual: f64::NAN,
            detail: format!("error: {e}"),
        },
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn delta_grid() -> Vec<f64> {
    (0..=9).map(|i| -2.9 + 0.4 * i as f64).collect()
}

fn tw_grid(full: bool) -> Vec<(f64, f64)> {
    let ts: &[f64] = if full { &[0.1, 0.5, 1.0, 2.0] } else { &[0.5, 2.0] };
    let ws: &[f64] = if full { &[0.5, 1.0, 3.0] } else { &[1.0] };
    ts.iter().flat_map(|&t| ws.iter().map(move |&w| (t, w))).collect()
}

const TD: [Axis; 2] = [Axis::Temperature, Axis::Delta0];

fn noiseless_var_delta0(full: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut spread: f64 = 0.0;
    for d in delta_grid() {
        let mut vals = Vec::new();
        for (t, w) in tw_grid(full) {
            let ev = evaluate(&ModelPoint::new(t, w, d)?, &ChannelSpec::Identity, &TD)?;
            let v = ev.bounds.var_sim[1];
            worst = worst.max(rel(v, 3.0 - 2.0 * d - d * d));
            vals.push(v);
        }
        let (lo, hi) = vals.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        spread = spread.max((hi - lo) / hi);
    }
    Ok((worst <= 1e-8 && spread <= 1e-9, worst, format!("spread={spread:.2e}")))
}

fn noiseless_var_t(full: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    for d in delta_grid() {
        for (t, w) in tw_grid(full) {
            let p = ModelPoint::new(t, w, d)?;
            let ev = evaluate(&p, &ChannelSpec::Identity, &TD)?;
            worst = worst.max(rel(ev.bounds.var_sim[0], noiseless_closed_forms(&p)?.0));
        }
    }
    Ok((worst <= 1e-8, worst, String::new()))
}

fn noiseless_gamma(full: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for d in delta_grid() {
        for (t, w) in tw_grid(full) {
            let ev = evaluate(&ModelPoint::new(t, w, d)?, &ChannelSpec::Identity, &TD)?;
            worst = worst.max((ev.bounds.gamma.unwrap_or(f64::NAN) - 0.5).abs());
            cross = cross.max(ev.qfim.fisher.matrix[(0, 1)].abs());
        }
    }
    let ok = worst <= 1e-10 && cross <= 1e-10;
    Ok((ok, worst.max(cross), format!("max|F_TD|={cross:.2e}")))
}

fn sld_fixtures() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut basis_ok = true;
    for (t, w, d) in [(0.5, 1.0, -2.0), (1.0, 1.0, 0.0), (2.0, 0.7, -1.3), (0.3, 3.0, 0.6)] {
        let p = ModelPoint::new(t, w, d)?;
        let ev = evaluate(&p, &ChannelSpec::Identity, &TD)?;
        let (lt, ld) = (&ev.qfim.slds[0], &ev.qfim.slds[1]);
        worst = worst.max(lt.max_abs_diff(&sld_temperature(&p)));
        worst = worst.max(ld.max_abs_diff(&sld_delta0(&p)));
        worst = worst.max(commutator(lt, ld).frobenius_norm());
        for v in common_eigenbasis() {
            for l in [lt, ld] {
                let lv = l.matvec(&v);
                let lambda = v.dot(&lv);
                let resid = lv
                    .as_slice()
                    .iter()
                    .zip(v.as_slice())
                    .map(|(a, b)| (a - lambda * b).norm())
                    .fold(0.0, f64::max);
                basis_ok &= resid <= 1e-10 * l.max_abs().max(1.0);
            }
        }
    }
    Ok((worst <= 1e-10 && basis_ok, worst, format!("common eigenbasis: {basis_ok}")))
}

/// A random interior point and channel, covering dephasing and the three
/// Kraus families.
pub fn random_sample(rng: &mut impl Rng) -> Result<(ModelPoint, ChannelSpec)> {
    let p = ModelPoint::new(
        rng.random_range(0.1..5.0),
        rng.random_range(0.2..3.0),
        rng.random_range(-2.95..0.95),
    )?;
    let s: f64 = rng.random_range(0.0..=1.0);
    let ch = match rng.random_range(0..4) {
        0 => ChannelSpec::Dephasing { kappa: s },
        1 => ChannelSpec::Local(kraus_ad(s)?),
        2 => ChannelSpec::Local(kraus_pf(s)?),
        _ => ChannelSpec::Local(kraus_pd(s)?),
    };
    Ok((p, ch))
}

fn oracle_equivalence(samples: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (p, ch) = random_sample(&mut rng)?;
        let rho = ch.apply(&stationary_state(&p)?)?;
        let ts = TangentSet::for_point(&p, &Axis::ALL, DerivativeMethod::Analytic)?.map(|m| ch.map(m))?;
        let a = qfim_vectorized(&rho, &ts)?;
        let b = qfim_spectral(&rho, &ts)?;
        worst = worst.max(a.max_abs_diff(&b) / a.max_finite_abs().max(1.0));
    }
    Ok((worst <= 1e-8, worst, format!("{samples} samples")))
}

fn eta_inverse(points: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let p = ModelPoint::new(
            rng.random_range(0.3..3.0),
            rng.random_range(0.3..2.0),
            rng.random_range(-2.8..0.8),
        )?;
        let numeric = pinv_psd(&build_eta(&stationary_state(&p)?), PINV_RTOL)?;
        let fixture = EtaInverseCoefficients::for_point(&p).assemble();
        worst = worst.max(numeric.max_abs_diff(&fixture));
    }
    Ok((worst <= 1e-10, worst, format!("{points} points")))
}

fn channel_contracts(full: bool) -> Outcome {
    let steps = if full { 20 } else { 5 };
    let points: &[(f64, f64, f64)] = if full {
        &[(0.5, 1.0, -2.0), (1.0, 1.0, 0.0), (0.1, 3.0, 0.9), (5.0, 0.2, -2.9), (0.7, 1.2, 1.0)]
    } else {
        &[(0.5, 1.0, -2.0), (0.1, 3.0, 0.9)]
    };
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for &(t, w, d) in points {
        let rho = stationary_state(&ModelPoint::new(t, w, d)?)?;
        for i in 0..=steps {
            let s = i as f64 / steps as f64;
            let fams: [KrausFamily; 3] = [kraus_ad(s)?, kraus_pf(s)?, kraus_pd(s)?];
            for fam in &fams {
                let closure = fam.closure_defect();
                let out = apply_local_product(&rho, fam)?;
                ok &= closure <= 1e-12 && out.trace_residual() <= 1e-12 && out.min_eigenvalue() >= -1e-10;
                worst = worst.max(closure).max(out.trace_residual());
            }
            let pf = apply_local_product(&rho, &fams[1])?;
            let pd = apply_local_product(&rho, &fams[2])?;
            let e1 = (pf.coh() - rho.coh() * (1.0 - 2.0 * s).powi(2)).abs();
            let e2 = (pd.coh() - rho.coh() * (1.0 - s)).abs();
            ok &= e1 <= 1e-15 && e2 <= 1e-15;
            worst = worst.max(e1).max(e2);
            let deph = apply_dephasing(&rho, s)?;
            ok &= deph.trace_residual() <= 1e-12 && deph.min_eigenvalue() >= -1e-10;
        }
    }
    Ok((ok, worst, String::new()))
}

/// The Pauli-sum dephasing map against the κ map built from `kappa`.
pub fn correlated_pauli_kappa(kappa: fn(f64, f64) -> f64) -> Outcome {
    let rho = stationary_state(&ModelPoint::new(0.5, 1.0, -2.0)?)?;
    let mut worst: f64 = 0.0;
    for &tau in &[0.1, 0.5, 5.0] {
        for &mu in &[0.0, 0.3, 0.6, 1.0] {
            let spec = MemoryKernelSpec::new(tau, mu)?;
            for i in 0..=40 {
                let f = memory_kernel(i as f64 * 0.5, &spec)?;
                let k = kappa(f, mu).clamp(0.0, 1.0);
                let a = apply_correlated_pauli(&rho, &CorrelatedPauliSpec::pure_dephasing(f, mu)?)?;
                let b = apply_dephasing(&rho, k)?;
                worst = worst.max(a.matrix().max_abs_diff(b.matrix()));
            }
        }
    }
    Ok((worst <= 1e-12, worst, String::new()))
}

fn dephasing_fixtures(samples: usize) -> Outcome {
    let mut worst_reduction: f64 = 0.0;
    for d in [-2.5, -1.0, 0.5] {
        for (t, w) in [(0.5, 1.0), (1.0, 2.0)] {
            let p = ModelPoint::new(t, w, d)?;
            let (vt, vd) = noiseless_closed_forms(&p)?;
            let cf = dephasing_closed_forms(&p, 1.0)?;
            for (a, b) in [(cf.var_t_sim, vt), (cf.var_t_ind, vt), (cf.var_d_sim, vd), (cf.var_d_ind, vd)] {
                worst_reduction = worst_reduction.max(a.map_or(f64::INFINITY, |a| rel(a, b)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut findings = 0;
    for _ in 0..samples {
        let p = ModelPoint::new(
            rng.random_range(0.3..2.0),
            rng.random_range(0.5..2.0),
            rng.random_range(-2.8..0.8),
        )?;
        let k = rng.random_range(0.05..1.0);
        let ev = evaluate(&p, &ChannelSpec::Dephasing { kappa: k }, &TD)?;
        let b = &ev.bounds;
        let pipe = [b.var_sim[0], b.var_sim[1], b.var_ind[0], b.var_ind[1], b.gamma.unwrap_or(f64::NAN)];
        let (cmp, found) = compare_dephasing(&p, k, pipe)?;
        findings += found.len();
        for c in cmp {
            worst = worst.max(c.relative_deviation);
        }
    }
    let detail = format!("kappa=1 reduction {worst_reduction:.2e}; {findings} formula discrepancies logged");
    Ok((worst_reduction <= 1e-8, worst, detail))
}

fn time_series(tau: f64, axes: &[Axis], axis: usize) -> Result<Vec<f64>> {
    let p = ModelPoint::new(0.5, 1.0, -2.0)?;
    let spec = MemoryKernelSpec::new(tau, 0.6)?;
    (1..200)
        .map(|i| {
            let ch = ChannelSpec::dephasing_at(i as f64 * 0.1, &spec)?;
            Ok(evaluate(&p, &ch, axes)?.bounds.var_sim[axis])
        })
        .collect()
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12))
}

fn derivative_sign_changes(v: &[f64]) -> usize {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let signs: Vec<f64> = v
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| d.abs() > 1e-12 * scale)
        .map(f64::signum)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn last_decile_spread(v: &[f64]) -> f64 {
    let tail = &v[v.len() - v.len() / 10..];
    let (lo, hi) = tail.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    (hi - lo) / v[v.len() - 1]
}

fn markov_monotone() -> Outcome {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for axis in 0..2 {
        let v = time_series(0.1, &TD, axis)?;
        let spread = last_decile_spread(&v);
        ok &= nondecreasing(&v) && spread < 0.01;
        worst = worst.max(spread);
    }
    Ok((ok, worst, "last-decile spread".into()))
}

fn non_markov_oscillation() -> Outcome {
    let mut min_changes = usize::MAX;
    for axis in 0..2 {
        min_changes = min_changes.min(derivative_sign_changes(&time_series(5.0, &TD, axis)?));
    }
    Ok((min_changes >= 2, min_changes as f64, "fewest derivative sign changes".into()))
}

fn strength_sweeps() -> Outcome {
    let p = ModelPoint::new(0.3, 0.5, -2.0)?;
    let noiseless = evaluate(&p, &ChannelSpec::Identity, &TD)?.bounds;
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let pf = |s: f64| -> Result<_> { Ok(evaluate(&p, &ChannelSpec::Local(kraus_pf(s)?), &TD)?.bounds) };
    for i in 0..=50 {
        let s = i as f64 / 100.0;
        let (a, b) = (pf(s)?, pf(1.0 - s)?);
        for k in 0..2 {
            worst = worst.max(rel(a.var_sim[k], b.var_sim[k]));
        }
    }
    for s in [0.0, 1.0] {
        let b = pf(s)?;
        for k in 0..2 {
            worst = worst.max(rel(b.var_sim[k], noiseless.var_sim[k]));
        }
    }
    ok &= worst <= 1e-10;
    for make in [kraus_ad as fn(f64) -> Result<KrausFamily>, kraus_pd] {
        for axis in 0..2 {
            let v: Vec<f64> = (0..=90)
                .map(|i| Ok(evaluate(&p, &ChannelSpec::Local(make(i as f64 / 100.0)?), &TD)?.bounds.var_sim[axis]))
                .collect::<Result<_>>()?;
            ok &= nondecreasing(&v);
        }
    }
    Ok((ok, worst, "PF symmetry; AD/PD monotone on s in [0, 0.9]".into()))
}

/// Γ over the configurations of the time and strength sweeps.
fn gamma_range() -> Outcome {
    let mut lo = f64::MAX;
    let mut hi: f64 = 0.0;
    let mut tested = 0;
    let mut record = |p: &ModelPoint, ch: &ChannelSpec| -> Result<()> {
        let b = evaluate(p, ch, &TD)?.bounds;
        if let (Some(g), false) = (b.gamma, b.singular) {
            lo = lo.min(g);
            hi = hi.max(g);
            tested += 1;
        }
        Ok(())
    };
    let figure = ModelPoint::new(0.5, 1.0, -2.0)?;
    for tau in [0.1, 5.0] {
        let spec = MemoryKernelSpec::new(tau, 0.6)?;
        for i in 1..200 {
            record(&figure, &ChannelSpec::dephasing_at(i as f64 * 0.1, &spec)?)?;
        }
    }
    let strength = ModelPoint::new(0.3, 0.5, -2.0)?;
    for i in 0..=100 {
        let s = i as f64 / 100.0;
        record(&strength, &ChannelSpec::Local(kraus_pf(s)?))?;
        if s <= 0.9 {
            record(&strength, &ChannelSpec::Local(kraus_ad(s)?))?;
            record(&strength, &ChannelSpec::Local(kraus_pd(s)?))?;
        }
    }
    // vanishing noise
    let near = evaluate(&figure, &ChannelSpec::Dephasing { kappa: 1.0 - 1e-9 }, &TD)?.bounds.gamma.unwrap_or(f64::NAN);
    let ok = lo >= 0.5 - 1e-12 && hi < 1.0 && (near - 0.5).abs() < 1e-6;
    Ok((ok, hi, format!("{tested} configurations, gamma in [{lo:.4}, {hi:.4}]")))
}

fn omega_axis() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let mut psd = true;
    for _ in 0..30 {
        let (p, ch) = random_sample(&mut rng)?;
        let rho = ch.apply(&stationary_state(&p)?)?;
        let ts = TangentSet::for_point(&p, &Axis::ALL, DerivativeMethod::Analytic)?.map(|m| ch.map(m))?;
        let a = qfim_vectorized(&rho, &ts)?;
        let b = qfim_spectral(&rho, &ts)?;
        let scale = a.max_finite_abs().max(1.0);
        worst = worst.max(a.max_abs_diff(&b) / scale);
        if !a.any_unbounded() {
            psd &= a.matrix.clone().symmetric_eigenvalues().min() >= -1e-10 * scale;
        }
    }
    let dw = [Axis::Delta0, Axis::Omega];
    let markov = time_series(0.1, &dw, 1)?;
    let osc = derivative_sign_changes(&time_series(5.0, &dw, 1)?);
    let ok = psd && worst <= 1e-8 && nondecreasing(&markov) && last_decile_spread(&markov) < 0.01 && osc >= 2;
    Ok((ok, worst, format!("Var(omega) non-Markov sign changes: {osc}")))
}

fn sweep_performance() -> Outcome {
    let text = "grid.x.name = t\ngrid.x.start = 0\ngrid.x.stop = 20\ngrid.x.count = 200\n\
                grid.y.name = delta0\ngrid.y.start = -2.9\ngrid.y.stop = 0.9\ngrid.y.count = 200\n\
                fixed.T = 0.5\nfixed.omega = 1\nchannel.kind = dephasing\nchannel.tau = 5\nchannel.mu = 0.6\n\
                estimate = T, delta0";
    let serial = SweepConfig::parse(text)?;
    let start = Instant::now();
    let a = run_sweep(&serial)?;
    let elapsed = start.elapsed().as_secs_f64();
    let parallel = SweepConfig { workers: 4, ..serial };
    let b = run_sweep(&parallel)?;
    let (mut x, mut y) = (Vec::new(), Vec::new());
    write_table(&a, Format::Csv, &mut x).expect("in-memory write");
    write_table(&b, Format::Csv, &mut y).expect("in-memory write");
    let identical = x == y;
    Ok((elapsed < 5.0 && identical, elapsed, format!("seconds single-threaded; parallel identical: {identical}")))
}
