//! The acceptance matrix: each criterion runs at a fixed seed and reports
//! its metrics and a pass/fail verdict.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::bounds;
use crate::continuous::{ContinuousInstance, KernelKind, KernelSpec};
use crate::error::{Error, Result};
use crate::figures;
use crate::format::{to_json_string, SCHEMA_VERSION};
use crate::gauss::{self, MeiInput};
use crate::gp::{self, Covariance, PosteriorState};
use crate::linalg::min_eigenvalue;
use crate::policy::{self, Policy, PolicyKind};
use crate::seeds::{self, EpisodeRng};
use crate::sim::{self, InstanceSource, SimConfig};

/// Default master seed of the acceptance matrix.
pub const DEFAULT_SEED: u64 = 20_240_601;

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "gaussian function suite"),
    (2, "mei bound dominance"),
    (3, "conditioning oracle equivalence"),
    (4, "figure 1 anchor"),
    (5, "finite-domain bound validation"),
    (6, "spike equality case"),
    (7, "iid lower-bound trend"),
    (8, "continuous bound comparison"),
    (9, "non-submodularity"),
    (10, "determinism"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Full,
    /// Reduced episode counts.
    Quick,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub metrics: BTreeMap<String, f64>,
    /// Names of the failed checks.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub schema_version: u32,
    pub mode: Mode,
    pub master_seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

impl ValidationReport {
    pub fn failed_ids(&self) -> Vec<u32> {
        self.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect()
    }
}

struct Check {
    metrics: BTreeMap<String, f64>,
    failures: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { metrics: BTreeMap::new(), failures: Vec::new() }
    }

    fn metric(&mut self, name: impl Into<String>, v: f64) {
        self.metrics.insert(name.into(), v);
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(self, id: u32) -> CriterionResult {
        let name = CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown");
        CriterionResult { id, name: name.into(), passed: self.failures.is_empty(), metrics: self.metrics, failures: self.failures }
    }
}

fn rng_for(seed: u64, id: u32) -> EpisodeRng {
    seeds::episode_rng(seeds::derive_master(seed, &format!("criterion-{id}")), 0)
}

fn random_psd<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let c = &a * a.transpose() / n as f64;
    (&c + c.transpose()) * 0.5
}

fn gaussian_suite(seed: u64) -> Result<CriterionResult> {
    let mut c = Check::new();
    let mut sandwich_violations = 0u32;
    for i in 0..1000 {
        let tau = 10f64.powf(-3.0 + 4.0 * i as f64 / 999.0);
        let (lo, hi) = gauss::ccdf_sandwich(tau)?;
        let q = gauss::std_normal_ccdf(tau)?;
        let (elo, ehi) = gauss::ei_sandwich(tau)?;
        let e = gauss::ei(tau)?;
        if !(lo <= q && q <= hi && elo <= e && e <= ehi) {
            sandwich_violations += 1;
        }
    }
    c.metric("sandwich_violations", sandwich_violations as f64);
    c.require(sandwich_violations == 0, "sandwich bounds");

    let mut max_reflection: f64 = 0.0;
    for i in 0..=1600 {
        let tau = -8.0 + i as f64 * 0.01;
        max_reflection = max_reflection.max((gauss::ei(-tau)? - gauss::ei(tau)? - tau).abs());
    }
    c.metric("max_reflection_error", max_reflection);
    c.require(max_reflection <= 1e-12, "reflection identity");

    let mut rng = rng_for(seed, 1);
    let mut convexity_violations = 0u32;
    let mut positivity_violations = 0u32;
    for _ in 0..10_000 {
        let a: f64 = rng.gen_range(-8.0..8.0);
        let b: f64 = rng.gen_range(-8.0..8.0);
        let (t1, t2) = (a.min(b), a.max(b));
        let lam: f64 = rng.gen_range(0.0..1.0);
        let mid = gauss::ei(lam * t1 + (1.0 - lam) * t2)?;
        let chord = lam * gauss::ei(t1)? + (1.0 - lam) * gauss::ei(t2)?;
        if mid > chord + 1e-12 {
            convexity_violations += 1;
        }
        if gauss::ei(t1)? <= 0.0 || gauss::ei_second_derivative(t1)? <= 0.0 {
            positivity_violations += 1;
        }
    }
    c.metric("convexity_violations", convexity_violations as f64);
    c.require(convexity_violations == 0 && positivity_violations == 0, "convexity");
    Ok(c.finish(1))
}

fn mei_dominance(seed: u64, mode: Mode) -> Result<CriterionResult> {
    let (instances, samples) = match mode {
        Mode::Full => (200, 100_000),
        Mode::Quick => (40, 20_000),
    };
    let mut c = Check::new();
    let mut rng = rng_for(seed, 2);
    let mut violations = 0u32;
    let mut min_slack = f64::INFINITY;
    for _ in 0..instances {
        let n = rng.gen_range(2..=5);
        let cov = random_psd(n, &mut rng);
        let m: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let tau: f64 = rng.sample(StandardNormal);
        let bound = gauss::mei_upper_bound(&MeiInput::new(m.clone(), cov.clone(), tau))?;
        let factor = gp::factor_lazy(n, |i| cov[(i, i)], |p, out| out.copy_from_slice(cov.column(p).as_slice()), usize::MAX)?;
        let (mut s, mut s2) = (0.0, 0.0);
        let mut z = vec![0.0; factor.rank()];
        for _ in 0..samples {
            z.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
            let f = factor.mul_vec(&z);
            let top = f.iter().zip(&m).map(|(a, b)| a + b).fold(f64::NEG_INFINITY, f64::max);
            let x = (top - tau).max(0.0);
            s += x;
            s2 += x * x;
        }
        let k = samples as f64;
        let mean = s / k;
        let se = ((s2 / k - mean * mean).max(0.0) / (k - 1.0)).sqrt();
        let slack = bound - (mean - 3.0 * se);
        min_slack = min_slack.min(slack);
        if slack < 0.0 {
            violations += 1;
        }
    }
    c.metric("instances", instances as f64);
    c.metric("violations", violations as f64);
    c.metric("min_slack", min_slack);
    c.require(violations == 0, "mei dominance");
    Ok(c.finish(2))
}

/// Posterior mean and covariance by conditioning on all pairs at once.
pub fn batch_condition(mean: &[f64], cov: &DMatrix<f64>, obs: &[(usize, f64)]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = mean.len();
    let k = obs.len();
    let saa = DMatrix::from_fn(k, k, |i, j| cov[(obs[i].0, obs[j].0)]);
    let sna = DMatrix::from_fn(n, k, |i, j| cov[(i, obs[j].0)]);
    let resid = nalgebra::DVector::from_fn(k, |i, _| obs[i].1 - mean[obs[i].0]);
    let chol = saa
        .cholesky()
        .ok_or_else(|| Error::Numerical("observed block is not positive definite".into()))?;
    let w = chol.solve(&resid);
    let m: Vec<f64> = (0..n).map(|i| mean[i] + (sna.row(i) * &w)[(0, 0)]).collect();
    let c = cov - &sna * chol.solve(&sna.transpose());
    Ok((m, c))
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

fn conditioning_oracle(seed: u64, mode: Mode) -> Result<CriterionResult> {
    let (instances, episodes) = match mode {
        Mode::Full => (100, 50),
        Mode::Quick => (20, 10),
    };
    let mut c = Check::new();
    let mut rng = rng_for(seed, 3);
    let mut worst_batch: f64 = 0.0;
    let mut worst_order: f64 = 0.0;
    for _ in 0..instances {
        let n = rng.gen_range(2..=8);
        let cov = random_psd(n, &mut rng) + DMatrix::identity(n, n) * 0.05;
        let mean: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let k = rng.gen_range(1..n);
        let mut arms: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            arms.swap(i, rng.gen_range(0..=i));
        }
        let obs: Vec<(usize, f64)> = arms[..k].iter().map(|&a| (a, rng.sample::<f64, _>(StandardNormal) * 2.0)).collect();
        let prior = PosteriorState::from_prior(mean.clone(), Covariance::Dense(cov.clone()))?;
        let mut seq = prior.clone();
        for &(a, y) in &obs {
            seq.condition_in_place(a, y)?;
        }
        let mut rev = prior.clone();
        for &(a, y) in obs.iter().rev() {
            rev.condition_in_place(a, y)?;
        }
        let (bm, bc) = batch_condition(&mean, &cov, &obs)?;
        let mean_diff = seq.mean().iter().zip(&bm).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_batch = worst_batch.max(mean_diff).max(max_abs_diff(&seq.cov(), &bc));
        let order_diff = seq.mean().iter().zip(rev.mean()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_order = worst_order.max(order_diff).max(max_abs_diff(&seq.cov(), &rev.cov()));
    }
    c.metric("max_batch_difference", worst_batch);
    c.metric("max_order_difference", worst_order);
    c.require(worst_batch <= 1e-8, "batch equivalence");
    c.require(worst_order <= 1e-8, "order independence");

    let n = 40;
    let mut worst_interp: f64 = 0.0;
    let mut worst_var: f64 = 0.0;
    let mut worst_eig_rel: f64 = 0.0;
    let mut worst_monotone: f64 = f64::NEG_INFINITY;
    for e in 0..episodes {
        let inst = sim::random_psd_instance(n, n, seeds::derive_master(seed, &format!("c3-instance-{e}")))?;
        let prepared = inst.prepare()?;
        let scale = inst.covariance().trace() / n as f64;
        let kind = [PolicyKind::Ei2, PolicyKind::Ucb2][e as usize % 2];
        let mut rng = seeds::episode_rng(seeds::derive_master(seed, "c3-episodes"), e);
        let f = prepared.sample(&mut rng);
        let mut prev_var: Vec<f64> = (0..n).map(|i| inst.covariance().diag(i)).collect();
        policy::run_episode_observed(&prepared, &Policy::new(kind), &f, &mut rng, |state, _| {
            let cov = state.cov();
            for (&a, &y) in state.observed() {
                worst_interp = worst_interp.max((state.mean()[a] - y).abs());
                worst_var = worst_var.max(cov[(a, a)]);
            }
            worst_eig_rel = worst_eig_rel.max(-min_eigenvalue(&cov) / scale);
            for i in 0..n {
                worst_monotone = worst_monotone.max(cov[(i, i)] - prev_var[i]);
                prev_var[i] = cov[(i, i)];
            }
            Ok(())
        })?;
    }
    c.metric("max_interpolation_error", worst_interp);
    c.metric("max_observed_variance", worst_var);
    c.metric("max_negative_eigenvalue_rel", worst_eig_rel);
    c.metric("max_variance_increase", worst_monotone);
    c.require(worst_interp <= 1e-8 && worst_var <= 1e-8, "interpolation");
    c.require(worst_eig_rel <= 1e-8, "psd preservation");
    c.require(worst_monotone <= 1e-10, "variance monotonicity");
    Ok(c.finish(3))
}

fn figure1_anchor() -> Result<CriterionResult> {
    let mut c = Check::new();
    let v = bounds::cor1_normreg_bound(1e20, 1e6)?;
    c.metric("cor1_1e20_1e6", v);
    c.require((v - 0.572).abs() <= 1e-3, "anchor value");
    let rows = figures::figure1()?;
    let monotone = figures::FIGURE1_N.iter().all(|&n| {
        let curve: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.bound).collect();
        curve.windows(2).all(|w| w[1] <= w[0])
    });
    c.metric("figure1_rows", rows.len() as f64);
    c.require(monotone, "figure 1 monotone curves");
    Ok(c.finish(4))
}

/// The instances of the finite-domain validation matrix.
pub fn validation_matrix(seed: u64) -> Vec<(String, InstanceSource)> {
    let grid = |ell: f64| InstanceSource::KernelGrid {
        kernel: KernelSpec { kind: KernelKind::SquaredExponential, length_scale: ell, variance: 1.0, dim: 1 },
        sides: 1000,
        horizon: 500,
    };
    vec![
        ("iid_2000_500".into(), InstanceSource::Iid { n_arms: 2000, horizon: 500 }),
        ("sqexp_grid_1000_500_l0.01".into(), grid(0.01)),
        ("sqexp_grid_1000_500_l0.05".into(), grid(0.05)),
        (
            "random_psd_600_500".into(),
            InstanceSource::RandomPsd { n_arms: 600, horizon: 500, seed: seeds::derive_master(seed, "matrix-psd") },
        ),
    ]
}

fn finite_validation(seed: u64, mode: Mode) -> Result<CriterionResult> {
    let episodes = match mode {
        Mode::Full => 2000,
        Mode::Quick => 40,
    };
    let mut c = Check::new();
    for (name, source) in validation_matrix(seed) {
        for kind in [PolicyKind::Ei2, PolicyKind::Ucb2] {
            let cfg = SimConfig::new(source.clone(), kind, episodes, seeds::derive_master(seed, &format!("c5-{name}-{kind}")));
            let r = sim::run_experiment(&cfg)?.report;
            let tag = format!("{name}/{kind}");
            let thm1 = r
                .bound(bounds::BoundKind::Thm1Spread)
                .ok_or_else(|| Error::Contract(format!("{tag}: thm1 bound not applicable")))?;
            let spread_ratio = 1.0 - r.spread_normreg_estimate.estimate;
            let spread_se = r.spread_normreg_estimate.stderr;
            c.metric(format!("{tag}/spread_ratio"), spread_ratio);
            c.metric(format!("{tag}/spread_ratio_required"), 1.0 - thm1 - 3.0 * spread_se);
            c.require(spread_ratio >= 1.0 - thm1 - 3.0 * spread_se, format!("{tag} spread ratio"));
            if let Some(cor1) = r.bound(bounds::BoundKind::Cor1Normreg) {
                let nr = r.normreg_quadrature.unwrap_or(r.normreg_estimate);
                let ratio = 1.0 - nr.estimate;
                c.metric(format!("{tag}/max_ratio"), ratio);
                c.metric(format!("{tag}/max_ratio_required"), 1.0 - cor1 - 3.0 * nr.stderr);
                c.require(ratio >= 1.0 - cor1 - 3.0 * nr.stderr, format!("{tag} max ratio"));
            }
        }
    }
    Ok(c.finish(5))
}

fn spike_equality(seed: u64, mode: Mode) -> Result<CriterionResult> {
    let episodes = match mode {
        Mode::Full => 10_000,
        Mode::Quick => 2_000,
    };
    let mut c = Check::new();
    let demo = sim::adversarial_spike_demo(1000, 100, PolicyKind::RandomWor, episodes, seeds::derive_master(seed, "c6"))?;
    let r = &demo.report;
    let half_normal = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    c.metric("spike_index", demo.spike_index as f64);
    c.metric("normreg", r.normreg_estimate.estimate);
    c.metric("normreg_stderr", r.normreg_estimate.stderr);
    c.metric("mean_fhat", r.mean_fhat.estimate);
    c.metric("mean_fhat_stderr", r.mean_fhat.stderr);
    c.require((r.normreg_estimate.estimate - 0.9).abs() <= 3.0 * r.normreg_estimate.stderr, "normreg = 1 - T/N");
    c.require((r.mean_fhat.estimate - half_normal).abs() <= 3.0 * r.mean_fhat.stderr, "E[F max] = 1/sqrt(2 pi)");
    Ok(c.finish(6))
}

fn iid_trend(seed: u64, mode: Mode) -> Result<CriterionResult> {
    let episodes = match mode {
        Mode::Full => 4000,
        Mode::Quick => 400,
    };
    let mut c = Check::new();
    let mut gaps = Vec::new();
    for j in 2..=6u32 {
        let t = 10u64.pow(j);
        let n = 10u64.pow(2 * j);
        let ratio = sim::expected_max_iid(t)? / sim::expected_max_iid(n)?;
        let gap = (ratio - 0.5f64.sqrt()).abs();
        c.metric(format!("gap_j{j}"), gap);
        gaps.push(gap);
    }
    c.require(gaps.windows(2).all(|w| w[1] < w[0]), "gap decreases");

    let cfg = SimConfig::new(InstanceSource::Iid { n_arms: 10_000, horizon: 100 }, PolicyKind::RandomWor, episodes, seeds::derive_master(seed, "c7"));
    let r = sim::run_experiment(&cfg)?.report;
    let quad_ratio = sim::expected_max_iid(100)? / sim::expected_max_iid(10_000)?;
    let mc_ratio = 1.0 - r.normreg_estimate.estimate;
    c.metric("quadrature_ratio", quad_ratio);
    c.metric("monte_carlo_ratio", mc_ratio);
    c.metric("monte_carlo_stderr", r.normreg_estimate.stderr);
    c.require((mc_ratio - quad_ratio).abs() <= 3.0 * r.normreg_estimate.stderr, "monte carlo matches quadrature");
    Ok(c.finish(7))
}

fn continuous_comparison(seed: u64, mode: Mode) -> Result<CriterionResult> {
    let episodes = match mode {
        Mode::Full => 500,
        Mode::Quick => 20,
    };
    let mut c = Check::new();
    let lks = figures::figure3_lipschitz_sweep();
    let gaps: Vec<f64> = lks
        .iter()
        .map(|&l| Ok(bounds::grunewalder_bound(5, 1e5, l)? - bounds::thm2_continuous_bound(5, 1e5, l, 1.0)?))
        .collect::<Result<_>>()?;
    let first_below = gaps.iter().position(|&g| g > 0.0);
    let single = first_below.is_some_and(|i| gaps[i..].iter().all(|&g| g > 0.0));
    let growing = first_below.is_some_and(|i| gaps[i..].windows(2).all(|w| w[1] > w[0]));
    if let Some(i) = first_below {
        c.metric("crossover_lk", lks[i]);
    }
    c.metric("gap_at_1e12", *gaps.last().expect("non-empty sweep"));
    c.require(single, "single crossover");
    c.require(growing, "gap grows with L_k");

    let kernel = KernelSpec::new(KernelKind::SquaredExponential, 0.02, 1.0, 1)?;
    let cont = ContinuousInstance::new(kernel, 500)?;
    let cfg = SimConfig::new(InstanceSource::Continuous(cont), PolicyKind::Ei2, episodes, seeds::derive_master(seed, "c8"));
    let r = sim::run_experiment(&cfg)?.report;
    let stats = r.continuous.as_ref().ok_or_else(|| Error::Contract("continuous stats missing".into()))?;
    match r.bound(bounds::BoundKind::Thm2Continuous) {
        Some(thm2) => {
            c.metric("thm2_bound", thm2);
            c.metric("mean_sup_regret", stats.mean_sup_regret.estimate);
            c.metric("mean_sup_regret_stderr", stats.mean_sup_regret.stderr);
            c.metric("grid_sides", stats.sides as f64);
            c.require(stats.mean_sup_regret.estimate <= thm2, "continuous regret below bound");
        }
        None => c.require(false, "thm2 preconditions hold"),
    }
    Ok(c.finish(8))
}

fn nonsubmodularity() -> Result<CriterionResult> {
    let mut c = Check::new();
    let r = sim::nonsubmodularity_demo()?;
    c.metric("benefit_before", r.benefit_before);
    c.metric("benefit_after", r.benefit_after);
    c.metric("posterior_sd_after", r.target_sd_after);
    c.require(r.benefit_after > r.benefit_before, "benefit increases");
    c.require(r.benefit_before < 1e-6, "benefit before is negligible");
    c.require(r.benefit_after > 0.1 * r.target_sd_after, "benefit after is substantial");
    Ok(c.finish(9))
}

fn determinism(seed: u64) -> Result<CriterionResult> {
    let mut c = Check::new();
    let a = to_json_string(&run_ids(Mode::Quick, seed, &[1, 2, 3, 4, 5, 6, 7, 8, 9], |_, _| {})?)?;
    let b = to_json_string(&run_ids(Mode::Quick, seed, &[1, 2, 3, 4, 5, 6, 7, 8, 9], |_, _| {})?)?;
    c.metric("report_bytes", a.len() as f64);
    c.require(a == b, "identical quick reports");
    Ok(c.finish(10))
}

/// Runs a single criterion.
pub fn run_criterion(id: u32, mode: Mode, seed: u64) -> Result<CriterionResult> {
    match id {
        1 => gaussian_suite(seed),
        2 => mei_dominance(seed, mode),
        3 => conditioning_oracle(seed, mode),
        4 => figure1_anchor(),
        5 => finite_validation(seed, mode),
        6 => spike_equality(seed, mode),
        7 => iid_trend(seed, mode),
        8 => continuous_comparison(seed, mode),
        9 => nonsubmodularity(),
        10 => determinism(seed),
        other => Err(Error::domain(format!("no criterion {other}; ids run from 1 to 10"))),
    }
}

/// Runs the listed criteria in order, reporting each as it finishes.
pub fn run_ids<F>(mode: Mode, seed: u64, ids: &[u32], mut on_result: F) -> Result<ValidationReport>
where
    F: FnMut(&CriterionResult, Duration),
{
    let mut criteria = Vec::with_capacity(ids.len());
    for &id in ids {
        let start = Instant::now();
        let r = run_criterion(id, mode, seed)?;
        on_result(&r, start.elapsed());
        criteria.push(r);
    }
    Ok(ValidationReport {
        schema_version: SCHEMA_VERSION,
        mode,
        master_seed: seed,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    })
}

/// Runs all ten criteria.
pub fn run_all<F>(mode: Mode, seed: u64, on_result: F) -> Result<ValidationReport>
where
    F: FnMut(&CriterionResult, Duration),
{
    let ids: Vec<u32> = CRITERIA.iter().map(|c| c.0).collect();
    run_ids(mode, seed, &ids, on_result)
}

/// One table line: `[PASS] 5 finite-domain bound validation (12.3 s)`.
pub fn format_line(r: &CriterionResult, elapsed: Duration) -> String {
    let verdict = if r.passed { "PASS" } else { "FAIL" };
    let mut line = format!("[{verdict}] {:>2} {} ({:.1} s)", r.id, r.name, elapsed.as_secs_f64());
    if !r.passed {
        line.push_str(&format!(" failed: {}", r.failures.join("; ")));
    }
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_oracle_matches_hand_example() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let (m, c) = batch_condition(&[0.0, 0.0], &cov, &[(0, 1.0)]).unwrap();
        assert!((m[1] - 0.5).abs() < 1e-15);
        assert!((c[(1, 1)] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn cheap_criteria_pass() {
        for id in [1, 4, 9] {
            let r = run_criterion(id, Mode::Quick, DEFAULT_SEED).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(run_criterion(11, Mode::Quick, 0).is_err());
    }
}
