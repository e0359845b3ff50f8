//! Seeded Monte Carlo experiments and their oracles.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, BoundReport};
use crate::continuous::{lipschitz_constant, ContinuousInstance, ContinuousSetup, KernelSpec, REFINEMENT};
use crate::error::{Error, Result};
use crate::gauss::{ccdf, ei_scaled, pdf};
use crate::gp::{Covariance, PosteriorState, PreparedInstance, ProblemInstance};
use crate::policy::{self, Policy, PolicyKind, Trajectory};
use crate::quadrature;
use crate::seeds;

/// Zero-prior episodes used to estimate visit frequencies before placing
/// the adversarial spike.
pub const SPIKE_CALIBRATION_EPISODES: u64 = 10_000;

/// Where the instance of an experiment comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    Explicit(ProblemInstance),
    /// `μ = 0`, `Σ = I`.
    Iid { n_arms: usize, horizon: usize },
    /// Zero prior except one arm with the given variance.
    Spike { n_arms: usize, horizon: usize, spike_index: usize, spike_variance: f64 },
    /// `Σ = AAᵀ/N` with standard normal `A` drawn from `seed`.
    RandomPsd { n_arms: usize, horizon: usize, seed: u64 },
    /// Kernel on a uniform grid with `sides` cells per coordinate.
    KernelGrid { kernel: KernelSpec, sides: usize, horizon: usize },
    /// Kernel on the grid sized from `L_k` and `T`, with a refinement
    /// sample standing in for the supremum.
    Continuous(ContinuousInstance),
}

impl InstanceSource {
    /// The finite instance, when the source has one.
    pub fn build(&self) -> Result<Option<ProblemInstance>> {
        Ok(Some(match self {
            InstanceSource::Explicit(inst) => inst.clone(),
            InstanceSource::Iid { n_arms, horizon } => ProblemInstance::iid(*n_arms, *horizon)?,
            InstanceSource::Spike { n_arms, horizon, spike_index, spike_variance } => {
                spike_instance(*n_arms, *horizon, *spike_index, *spike_variance)?
            }
            InstanceSource::RandomPsd { n_arms, horizon, seed } => random_psd_instance(*n_arms, *horizon, *seed)?,
            InstanceSource::KernelGrid { kernel, sides, horizon } => {
                crate::continuous::build_grid_with_sides(kernel, *sides, *horizon)?.0
            }
            InstanceSource::Continuous(_) => return Ok(None),
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub source: InstanceSource,
    pub policy: Policy,
    pub episodes: u64,
    pub master_seed: u64,
    /// Keep every trajectory in the output.
    pub keep_trajectories: bool,
}

impl SimConfig {
    pub fn new(source: InstanceSource, policy: impl Into<Policy>, episodes: u64, master_seed: u64) -> Self {
        SimConfig { source, policy: policy.into(), episodes, master_seed, keep_trajectories: false }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Estimate { estimate: mean, stderr: (var / n).sqrt() }
    }

    /// `1 − mean(num)/mean(den)` with a delta-method standard error.
    pub fn one_minus_ratio(num: &[f64], den: &[f64]) -> Self {
        let n = num.len() as f64;
        let mn = num.iter().sum::<f64>() / n;
        let md = den.iter().sum::<f64>() / n;
        let r = mn / md;
        let (mut snn, mut sdd, mut snd) = (0.0, 0.0, 0.0);
        for (a, b) in num.iter().zip(den) {
            let (x, y) = (a - mn, b - md);
            snn += x * x;
            sdd += y * y;
            snd += x * y;
        }
        let stderr = if num.len() > 1 {
            let k = n - 1.0;
            let v = (snn / k - 2.0 * r * snd / k + r * r * sdd / k) / (n * md * md);
            v.max(0.0).sqrt()
        } else {
            0.0
        };
        Estimate { estimate: 1.0 - r, stderr }
    }
}

/// Extra statistics of continuous-domain experiments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuousStats {
    pub dim: u32,
    pub sides: usize,
    pub lipschitz: f64,
    pub refined_points: usize,
    pub factor_rank: usize,
    /// Mean of the refinement maximum.
    pub mean_sup: Estimate,
    /// Mean of `sup − Ŷ`.
    pub mean_sup_regret: Estimate,
    /// Earlier continuous bound evaluated at the refinement spacing.
    pub refinement_grunewalder: Option<f64>,
}

/// Aggregated results of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretReport {
    pub schema_version: u32,
    pub policy: PolicyKind,
    pub tie_break: policy::TieBreak,
    pub n_arms: usize,
    pub horizon: usize,
    pub episodes: u64,
    pub master_seed: u64,
    pub mean_yhat: Estimate,
    pub mean_ycheck: Estimate,
    pub mean_fhat: Estimate,
    pub mean_fcheck: Estimate,
    pub mean_spread_y: Estimate,
    pub mean_spread_f: Estimate,
    /// `1 − E[Ŷ]/E[F̂]`.
    pub normreg_estimate: Estimate,
    /// `1 − E[Ŷ̌]/E[F̂̌]`.
    pub spread_normreg_estimate: Estimate,
    /// `E[F̂]` from quadrature, for i.i.d. standard normal arms.
    pub fhat_quadrature: Option<f64>,
    /// `1 − E[Ŷ]/E[F̂]` using the quadrature value of `E[F̂]`.
    pub normreg_quadrature: Option<Estimate>,
    pub continuous: Option<ContinuousStats>,
    pub applicable_bounds: Vec<BoundReport>,
}

impl RegretReport {
    pub fn bound(&self, kind: bounds::BoundKind) -> Option<f64> {
        self.applicable_bounds.iter().find(|b| b.kind == kind).map(|b| b.value)
    }
}

/// Report plus optional per-episode trajectories (in episode order).
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: RegretReport,
    pub trajectories: Option<Vec<Trajectory>>,
}

struct EpisodeStats {
    yhat: f64,
    ycheck: f64,
    fhat: f64,
    fcheck: f64,
    sup: f64,
    trajectory: Option<Trajectory>,
}

enum Runner {
    Finite(PreparedInstance),
    Continuous(Box<ContinuousSetup>),
}

impl Runner {
    fn episode<R: Rng + ?Sized>(&self, policy: &Policy, rng: &mut R, keep: bool) -> Result<EpisodeStats> {
        let (f, traj, sup) = match self {
            Runner::Finite(p) => {
                let (f, t) = policy::run_prepared_episode(p, policy, rng)?;
                let sup = f.f_max;
                (f, t, sup)
            }
            Runner::Continuous(s) => {
                let o = s.episode(policy, rng)?;
                (o.function, o.trajectory, o.sup_estimate)
            }
        };
        let (yhat, ycheck) = (traj.running_max(), traj.running_min());
        if !(yhat <= f.f_max && ycheck >= f.f_min) {
            return Err(Error::Numerical(format!(
                "observed extremes [{ycheck}, {yhat}] escape the function range [{}, {}]",
                f.f_min, f.f_max
            )));
        }
        Ok(EpisodeStats {
            yhat,
            ycheck,
            fhat: f.f_max,
            fcheck: f.f_min,
            sup,
            trajectory: keep.then_some(traj),
        })
    }
}

/// Runs `config.episodes` independent episodes on the current rayon pool
/// and aggregates them in episode order.
pub fn run_experiment(config: &SimConfig) -> Result<ExperimentOutput> {
    if config.episodes == 0 {
        return Err(Error::domain("episodes must be ≥ 1"));
    }
    let (runner, n_arms, horizon, centered, standard_iid, cont) = match &config.source {
        InstanceSource::Continuous(c) => {
            let setup = ContinuousSetup::new(c)?;
            let (n, t) = (setup.n_arms(), setup.prepared().horizon());
            (Runner::Continuous(Box::new(setup)), n, t, true, false, Some(*c))
        }
        other => {
            let inst = other.build()?.expect("finite source");
            (
                Runner::Finite(inst.prepare()?),
                inst.n_arms(),
                inst.horizon(),
                inst.is_centered(),
                inst.is_standard_iid(),
                None,
            )
        }
    };
    if config.policy.kind.is_prior_independent() && horizon > n_arms {
        return Err(Error::domain("horizon exceeds the number of arms"));
    }

    let results: Vec<Result<EpisodeStats>> = (0..config.episodes)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds::episode_rng(config.master_seed, i);
            runner.episode(&config.policy, &mut rng, config.keep_trajectories).map_err(|e| Error::Episode {
                index: i,
                seed: seeds::episode_seed(config.master_seed, i),
                source: Box::new(e),
            })
        })
        .collect();

    let mut stats = Vec::with_capacity(results.len());
    for r in results {
        stats.push(r?);
    }
    let col = |f: fn(&EpisodeStats) -> f64| stats.iter().map(f).collect::<Vec<f64>>();
    let yhat = col(|s| s.yhat);
    let ycheck = col(|s| s.ycheck);
    let fhat = col(|s| s.fhat);
    let fcheck = col(|s| s.fcheck);
    let spread_y: Vec<f64> = yhat.iter().zip(&ycheck).map(|(a, b)| a - b).collect();
    let spread_f: Vec<f64> = fhat.iter().zip(&fcheck).map(|(a, b)| a - b).collect();

    let mean_yhat = Estimate::from_samples(&yhat);
    let (fhat_quadrature, normreg_quadrature) = if standard_iid {
        let q = expected_max_iid(n_arms as u64)?;
        let nq = Estimate { estimate: 1.0 - mean_yhat.estimate / q, stderr: mean_yhat.stderr / q };
        (Some(q), Some(nq))
    } else {
        (None, None)
    };

    let (nf, tf) = (n_arms as f64, horizon as f64);
    let mut applicable_bounds = Vec::new();
    if let Ok(b) = BoundReport::thm1(nf, tf) {
        applicable_bounds.push(b);
        if centered {
            applicable_bounds.push(BoundReport::cor1(nf, tf)?);
        }
    }
    if standard_iid {
        if let Ok(b) = BoundReport::lower_iid(nf, tf) {
            applicable_bounds.push(b);
        }
    }
    if let Ok(b) = BoundReport::lower_prior_independent(nf, tf) {
        applicable_bounds.push(b);
    }

    let continuous = match (&runner, cont) {
        (Runner::Continuous(setup), Some(c)) => {
            let lk = lipschitz_constant(&c.kernel);
            let d = c.kernel.dim;
            if let Ok(b) = BoundReport::thm2(d, c.horizon as f64, lk, c.kernel.variance.sqrt()) {
                applicable_bounds.push(b);
            }
            if let Ok(b) = BoundReport::grunewalder(d, c.horizon as f64, lk) {
                applicable_bounds.push(b);
            }
            let sups = col(|s| s.sup);
            let regret: Vec<f64> = sups.iter().zip(&yhat).map(|(s, y)| s - y).collect();
            let fine_evals = ((setup.sides() * REFINEMENT) as f64).powi(d as i32);
            Some(ContinuousStats {
                dim: d,
                sides: setup.sides(),
                lipschitz: lk,
                refined_points: setup.n_refined(),
                factor_rank: setup.rank(),
                mean_sup: Estimate::from_samples(&sups),
                mean_sup_regret: Estimate::from_samples(&regret),
                refinement_grunewalder: bounds::grunewalder_bound(d, fine_evals, lk).ok(),
            })
        }
        _ => None,
    };

    let report = RegretReport {
        schema_version: crate::format::SCHEMA_VERSION,
        policy: config.policy.kind,
        tie_break: config.policy.tie_break,
        n_arms,
        horizon,
        episodes: config.episodes,
        master_seed: config.master_seed,
        mean_yhat,
        mean_ycheck: Estimate::from_samples(&ycheck),
        mean_fhat: Estimate::from_samples(&fhat),
        mean_fcheck: Estimate::from_samples(&fcheck),
        mean_spread_y: Estimate::from_samples(&spread_y),
        mean_spread_f: Estimate::from_samples(&spread_f),
        normreg_estimate: Estimate::one_minus_ratio(&yhat, &fhat),
        spread_normreg_estimate: Estimate::one_minus_ratio(&spread_y, &spread_f),
        fhat_quadrature,
        normreg_quadrature,
        continuous,
        applicable_bounds,
    };
    let trajectories = config
        .keep_trajectories
        .then(|| stats.into_iter().map(|s| s.trajectory.expect("kept")).collect());
    Ok(ExperimentOutput { report, trajectories })
}

/// `ln Φ(x)` without cancellation in either tail.
fn ln_cdf(x: f64) -> f64 {
    if x < 0.0 {
        ccdf(-x).ln()
    } else {
        (-ccdf(x)).ln_1p()
    }
}

/// `E[max of k i.i.d. standard normals] = ∫ x·k·N(x)·Φ(x)^{k−1} dx`, by
/// adaptive quadrature on `[−12, 12]`.
pub fn expected_max_iid(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("expected_max_iid needs k ≥ 1"));
    }
    let kf = k as f64;
    let km1 = (k - 1) as f64;
    let f = |x: f64| {
        let w = if k == 1 { 1.0 } else { (km1 * ln_cdf(x)).exp() };
        x * kf * pdf(x) * w
    };
    Ok(quadrature::integrate(f, -12.0, 12.0, 1e-11, 96, 40))
}

/// Zero prior except `Σ[K][K] = spike_variance`.
pub fn spike_instance(n_arms: usize, horizon: usize, spike_index: usize, spike_variance: f64) -> Result<ProblemInstance> {
    if spike_index >= n_arms {
        return Err(Error::domain(format!("spike index {spike_index} out of range for N = {n_arms}")));
    }
    if !(spike_variance.is_finite() && spike_variance > 0.0) {
        return Err(Error::domain(format!("spike variance must be > 0, got {spike_variance}")));
    }
    let mut d = vec![0.0; n_arms];
    d[spike_index] = spike_variance;
    ProblemInstance::new(vec![0.0; n_arms], Covariance::Diagonal(d), horizon)
}

/// Zero-mean instance with `Σ = AAᵀ/N`, `A` an `N×N` standard normal matrix.
pub fn random_psd_instance(n_arms: usize, horizon: usize, seed: u64) -> Result<ProblemInstance> {
    if n_arms == 0 {
        return Err(Error::domain("instance needs at least one arm"));
    }
    let mut rng = seeds::episode_rng(seeds::derive_master(seed, "random-psd"), 0);
    let a = DMatrix::<f64>::from_fn(n_arms, n_arms, |_, _| rng.sample(StandardNormal));
    let c = &a * a.transpose() / n_arms as f64;
    let c = (&c + c.transpose()) * 0.5;
    ProblemInstance::new(vec![0.0; n_arms], Covariance::Dense(c), horizon)
}

/// Result of the adversarial spike construction.
#[derive(Debug, Clone, Serialize)]
pub struct SpikeDemo {
    pub spike_index: usize,
    /// Fraction of calibration episodes that visited the spike arm.
    pub spike_visit_frequency: f64,
    pub calibration_episodes: u64,
    pub report: RegretReport,
}

/// Places a unit spike on the arm the policy visits least under the zero
/// prior, then measures normreg.
pub fn adversarial_spike_demo(
    n_arms: usize,
    horizon: usize,
    policy: PolicyKind,
    episodes: u64,
    seed: u64,
) -> Result<SpikeDemo> {
    if !policy.is_prior_independent() {
        return Err(Error::Contract(format!(
            "the spike construction needs a prior-independent policy (random_wor), got {policy}"
        )));
    }
    let zero = ProblemInstance::new(vec![0.0; n_arms], Covariance::Diagonal(vec![0.0; n_arms]), horizon)?;
    let prepared = zero.prepare()?;
    let calibration_seed = seeds::derive_master(seed, "spike-calibration");
    let pol = Policy::new(policy);
    let counts = (0..SPIKE_CALIBRATION_EPISODES)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds::episode_rng(calibration_seed, i);
            let (_, t) = policy::run_prepared_episode(&prepared, &pol, &mut rng)?;
            let mut c = vec![0u32; n_arms];
            for a in 0..n_arms {
                c[a] = t.is_visited(a) as u32;
            }
            Ok(c)
        })
        .collect::<Vec<Result<Vec<u32>>>>()
        .into_iter()
        .try_fold(vec![0u64; n_arms], |mut acc, c| -> Result<Vec<u64>> {
            for (s, v) in acc.iter_mut().zip(c?) {
                *s += v as u64;
            }
            Ok(acc)
        })?;
    let spike_index = (0..n_arms).min_by_key(|&a| (counts[a], a)).expect("N ≥ 1");
    let config = SimConfig::new(
        InstanceSource::Spike { n_arms, horizon, spike_index, spike_variance: 1.0 },
        pol,
        episodes,
        seed,
    );
    let report = run_experiment(&config)?.report;
    Ok(SpikeDemo {
        spike_index,
        spike_visit_frequency: counts[spike_index] as f64 / SPIKE_CALIBRATION_EPISODES as f64,
        calibration_episodes: SPIKE_CALIBRATION_EPISODES,
        report,
    })
}

/// Marginal benefit of evaluating one arm before and after another
/// observation, on a three-arm instance where the benefit grows.
#[derive(Debug, Clone, Serialize)]
pub struct NonSubmodularity {
    /// Initial observation on the independent arm.
    pub first_value: f64,
    /// Value of the correlated arm that moves the target mean onto it.
    pub second_value: f64,
    pub benefit_before: f64,
    pub benefit_after: f64,
    pub target_sd_after: f64,
    /// Full EI2 score (both branches) before and after.
    pub ei2_before: f64,
    pub ei2_after: f64,
}

/// Arms 1 and 2 correlate at −0.9 with unit variance; arm 0 is independent
/// and observed at 5. The benefit of arm 2 is the expected improvement of
/// the running maximum.
pub fn nonsubmodularity_demo() -> Result<NonSubmodularity> {
    let rho = -0.9;
    let cov = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, rho, 0.0, rho, 1.0]);
    let first_value = 5.0;
    let (target, other) = (2, 1);

    let s1 = PosteriorState::from_prior(vec![0.0; 3], Covariance::Dense(cov))?.condition(0, first_value)?;
    let benefit_before = ei_scaled(first_value, s1.mean()[target], s1.posterior_sd(target))?;
    let ei2_before = policy::score_arm(PolicyKind::Ei2, &s1, target, first_value, first_value)?;

    let c = s1.cov();
    let second_value = s1.mean()[other] + (first_value - s1.mean()[target]) * c[(other, other)] / c[(target, other)];
    let s2 = s1.condition(other, second_value)?;
    let (hi, lo) = (first_value.max(second_value), first_value.min(second_value));
    let target_sd_after = s2.posterior_sd(target);
    let benefit_after = ei_scaled(hi, s2.mean()[target], target_sd_after)?;
    let ei2_after = policy::score_arm(PolicyKind::Ei2, &s2, target, hi, lo)?;

    if !(benefit_after > benefit_before) {
        return Err(Error::Numerical(format!(
            "construction failed: benefit {benefit_before} before, {benefit_after} after"
        )));
    }
    Ok(NonSubmodularity {
        first_value,
        second_value,
        benefit_before,
        benefit_after,
        target_sd_after,
        ei2_before,
        ei2_after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::ei;

    #[test]
    fn deterministic_instance_has_zero_regret() {
        let inst = ProblemInstance::new(vec![1.0, 0.0], Covariance::Dense(DMatrix::zeros(2, 2)), 2).unwrap();
        let cfg = SimConfig::new(InstanceSource::Explicit(inst), PolicyKind::Ei2, 10, 4);
        let r = run_experiment(&cfg).unwrap().report;
        assert_eq!(r.mean_yhat.estimate, 1.0);
        assert_eq!(r.mean_fhat.estimate, 1.0);
        assert_eq!(r.normreg_estimate.estimate, 0.0);
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = SimConfig::new(InstanceSource::Iid { n_arms: 50, horizon: 10 }, PolicyKind::RandomWor, 200, 77);
        let a = run_experiment(&cfg).unwrap().report;
        let b = run_experiment(&cfg).unwrap().report;
        assert_eq!(a, b);
        assert!(a.fhat_quadrature.is_some());
        assert!(a.bound(bounds::BoundKind::LowerIid).is_some());
        assert!(a.bound(bounds::BoundKind::Thm1Spread).is_none());
    }

    #[test]
    fn trajectories_kept_in_order() {
        let mut cfg = SimConfig::new(InstanceSource::Iid { n_arms: 20, horizon: 5 }, PolicyKind::RandomWor, 8, 1);
        cfg.keep_trajectories = true;
        let out = run_experiment(&cfg).unwrap();
        let trajs = out.trajectories.unwrap();
        assert_eq!(trajs.len(), 8);
        let prepared = ProblemInstance::iid(20, 5).unwrap().prepare().unwrap();
        let mut rng = seeds::episode_rng(1, 3);
        let (_, t3) = policy::run_prepared_episode(&prepared, &cfg.policy, &mut rng).unwrap();
        assert_eq!(trajs[3], t3);
    }

    #[test]
    fn expected_max_examples() {
        assert!(expected_max_iid(1).unwrap().abs() < 1e-12);
        assert!((expected_max_iid(2).unwrap() - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
        // k = 100 against a 30-digit quadrature.
        assert!((expected_max_iid(100).unwrap() - 2.5075936364416844).abs() < 1e-9);
        let mut prev = 0.0;
        for j in 2..=6 {
            let k = 10u64.pow(j);
            let r = expected_max_iid(k).unwrap() / (2.0 * (k as f64).ln()).sqrt();
            assert!(r > 0.8 && r < 1.0 && r > prev, "k = {k}: {r}");
            prev = r;
        }
        assert!(expected_max_iid(0).is_err());
    }

    #[test]
    fn spike_construction() {
        let s = spike_instance(3, 1, 1, 1.0).unwrap();
        assert_eq!(s.covariance(), &Covariance::Diagonal(vec![0.0, 1.0, 0.0]));
        assert!(spike_instance(3, 1, 3, 1.0).is_err());
        assert!(spike_instance(3, 1, 0, 0.0).is_err());
    }

    #[test]
    fn spike_demo_rejects_prior_dependent_policy() {
        assert!(matches!(adversarial_spike_demo(10, 2, PolicyKind::Ei2, 10, 0), Err(Error::Contract(_))));
    }

    #[test]
    fn spike_full_horizon_has_no_regret() {
        let d = adversarial_spike_demo(20, 20, PolicyKind::RandomWor, 200, 3).unwrap();
        assert_eq!(d.report.normreg_estimate.estimate, 0.0);
        assert_eq!(d.spike_visit_frequency, 1.0);
    }

    #[test]
    fn nonsubmodularity_values() {
        let r = nonsubmodularity_demo().unwrap();
        assert!((r.second_value + 5.0 / 0.9).abs() < 1e-12);
        assert!((r.benefit_before - ei(5.0).unwrap()).abs() < 1e-20);
        assert!(r.benefit_before < 1e-6);
        assert!((r.target_sd_after - 0.19f64.sqrt()).abs() < 1e-12);
        assert!((r.benefit_after - 0.19f64.sqrt() * ei(0.0).unwrap()).abs() < 1e-9);
        assert!(r.benefit_after > 0.1 * r.target_sd_after);
    }

    #[test]
    fn episode_errors_carry_seed() {
        let cfg = SimConfig::new(InstanceSource::Iid { n_arms: 2, horizon: 2 }, PolicyKind::Ucb2, 1, 5);
        assert!(run_experiment(&cfg).is_ok());
        let one = SimConfig::new(InstanceSource::Iid { n_arms: 1, horizon: 1 }, PolicyKind::Ucb2, 2, 5);
        let err = run_experiment(&one).unwrap_err();
        assert!(matches!(err, Error::Episode { index: 0, .. }));
        assert!(matches!(err.root(), Error::Domain(_)));
    }

    #[test]
    fn delta_method_matches_exact_for_constant_denominator() {
        let num = [1.0, 2.0, 3.0, 4.0];
        let den = [2.0; 4];
        let e = Estimate::one_minus_ratio(&num, &den);
        assert!((e.estimate - (1.0 - 1.25)).abs() < 1e-15);
        let s = Estimate::from_samples(&num);
        assert!((e.stderr - s.stderr / 2.0).abs() < 1e-15);
    }
}
