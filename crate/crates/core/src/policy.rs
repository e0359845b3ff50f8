//! Acquisition policies and the episode loop.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::ei_raw;
use crate::gp::{PosteriorState, PreparedInstance, ProblemInstance, SampledFunction};
use crate::seeds;

/// Acquisition rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    /// Larger of the expected improvements of the running max and min.
    Ei2,
    Ucb2,
    /// One-sided expected improvement over the running max.
    Ei,
    Ucb,
    /// Uniform over unvisited arms.
    RandomWor,
    /// Sum of the two expected-improvement branches.
    Ei2Sum,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::Ei2,
        PolicyKind::Ucb2,
        PolicyKind::Ei,
        PolicyKind::Ucb,
        PolicyKind::RandomWor,
        PolicyKind::Ei2Sum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Ei2 => "ei2",
            PolicyKind::Ucb2 => "ucb2",
            PolicyKind::Ei => "ei",
            PolicyKind::Ucb => "ucb",
            PolicyKind::RandomWor => "random_wor",
            PolicyKind::Ei2Sum => "ei2_sum",
        }
    }

    /// Whether the policy ignores the prior entirely.
    pub fn is_prior_independent(self) -> bool {
        self == PolicyKind::RandomWor
    }

    fn needs_log_n(self) -> bool {
        matches!(self, PolicyKind::Ucb2 | PolicyKind::Ucb)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = PolicyKind::ALL.iter().map(|k| k.name()).collect();
                Error::domain(format!("unknown policy {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// How equal scores are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    #[default]
    LowestIndex,
    /// Uniform among the maximizers.
    Random,
}

/// Which branch of a two-sided score won.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcquisitionScore {
    pub arm: usize,
    pub score: f64,
    pub side: Side,
}

/// Actions and observations of an episode with running extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    actions: Vec<usize>,
    observations: Vec<f64>,
    running_max: f64,
    running_min: f64,
    visited: Vec<bool>,
    n_visited: usize,
}

impl Trajectory {
    pub fn new(n_arms: usize) -> Self {
        Trajectory {
            actions: Vec::new(),
            observations: Vec::new(),
            running_max: f64::NEG_INFINITY,
            running_min: f64::INFINITY,
            visited: vec![false; n_arms],
            n_visited: 0,
        }
    }

    pub fn push(&mut self, arm: usize, y: f64) {
        self.actions.push(arm);
        self.observations.push(y);
        self.running_max = self.running_max.max(y);
        self.running_min = self.running_min.min(y);
        if !self.visited[arm] {
            self.visited[arm] = true;
            self.n_visited += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn n_arms(&self) -> usize {
        self.visited.len()
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    /// `Ŷ_t`; `-∞` before the first observation.
    pub fn running_max(&self) -> f64 {
        self.running_max
    }

    /// `Y̌_t`; `+∞` before the first observation.
    pub fn running_min(&self) -> f64 {
        self.running_min
    }

    /// `Ŷ_t − Y̌_t`, zero before the first observation.
    pub fn spread(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.running_max - self.running_min
        }
    }

    pub fn is_visited(&self, arm: usize) -> bool {
        self.visited[arm]
    }

    pub fn n_visited(&self) -> usize {
        self.n_visited
    }
}

/// Score of one arm given its posterior mean and standard deviation and
/// the thresholds `hi` (running max) and `lo` (running min).
#[inline]
fn arm_score(kind: PolicyKind, m: f64, sd: f64, hi: f64, lo: f64, beta: f64) -> (f64, Side) {
    match kind {
        PolicyKind::Ei2 => {
            if sd > 0.0 {
                let u = (hi - m) / sd;
                let d = (m - lo) / sd;
                if u <= d {
                    (sd * ei_raw(u), Side::Up)
                } else {
                    (sd * ei_raw(d), Side::Down)
                }
            } else {
                let (up, down) = ((m - hi).max(0.0), (lo - m).max(0.0));
                if up >= down {
                    (up, Side::Up)
                } else {
                    (down, Side::Down)
                }
            }
        }
        PolicyKind::Ei2Sum => {
            if sd > 0.0 {
                let u = (hi - m) / sd;
                let d = (m - lo) / sd;
                let side = if u <= d { Side::Up } else { Side::Down };
                (sd * (ei_raw(u) + ei_raw(d)), side)
            } else {
                let (up, down) = ((m - hi).max(0.0), (lo - m).max(0.0));
                (up + down, if up >= down { Side::Up } else { Side::Down })
            }
        }
        PolicyKind::Ei => {
            let s = if sd > 0.0 { sd * ei_raw((hi - m) / sd) } else { (m - hi).max(0.0) };
            (s, Side::Up)
        }
        PolicyKind::Ucb2 => {
            let (up, down) = (m - hi, lo - m);
            let bonus = sd * beta;
            if up >= down {
                (up + bonus, Side::Up)
            } else {
                (down + bonus, Side::Down)
            }
        }
        PolicyKind::Ucb => (m - hi + sd * beta, Side::Up),
        PolicyKind::RandomWor => unreachable!("random policy has no score"),
    }
}

/// Acquisition score of a single arm, bit-identical to the value the argmax
/// compares.
pub fn score_arm(kind: PolicyKind, state: &PosteriorState, arm: usize, hi: f64, lo: f64) -> Result<f64> {
    if kind == PolicyKind::RandomWor {
        return Err(Error::Contract("random_wor has no acquisition score".into()));
    }
    let n = state.n_arms();
    let beta = if n >= 2 { (2.0 * (n as f64).ln()).sqrt() } else { 0.0 };
    Ok(arm_score(kind, state.mean()[arm], state.posterior_sd(arm), hi, lo, beta).0)
}

fn argmax<R: Rng + ?Sized>(
    kind: PolicyKind,
    state: &PosteriorState,
    hi: f64,
    lo: f64,
    visited: Option<&Trajectory>,
    tie: TieBreak,
    rng: &mut R,
) -> Result<AcquisitionScore> {
    let n = state.n_arms();
    if kind.needs_log_n() && n < 2 {
        return Err(Error::domain(format!("{kind} needs N >= 2 (log N > 0), got N = {n}")));
    }
    let beta = if n >= 2 { (2.0 * (n as f64).ln()).sqrt() } else { 0.0 };
    let mean = state.mean();
    let var = state.variances();
    let mut best = AcquisitionScore { arm: 0, score: f64::NEG_INFINITY, side: Side::Up };
    let mut best_fresh = false;
    let mut ties = 0u64;
    // Runs of arms with identical posterior marginals share one evaluation.
    let mut cache: Option<(f64, f64, f64, Side)> = None;
    for a in 0..n {
        let m = mean[a];
        let v = var[a];
        let (s, side) = match cache {
            Some((cm, cv, cs, cside)) if cm == m && cv == v => (cs, cside),
            _ => {
                let r = arm_score(kind, m, v.max(0.0).sqrt(), hi, lo, beta);
                cache = Some((m, v, r.0, r.1));
                r
            }
        };
        // Equal scores prefer arms not yet visited.
        let fresh = visited.map_or(true, |t| !t.is_visited(a));
        if s > best.score || (s == best.score && fresh && !best_fresh) {
            best = AcquisitionScore { arm: a, score: s, side };
            best_fresh = fresh;
            ties = 1;
        } else if s == best.score && fresh == best_fresh && tie == TieBreak::Random {
            ties += 1;
            if rng.gen_range(0..ties) == 0 {
                best = AcquisitionScore { arm: a, score: s, side };
            }
        }
    }
    if !best.score.is_finite() {
        return Err(Error::Numerical(format!("{kind} produced a non-finite score {}", best.score)));
    }
    Ok(best)
}

fn require_observation(traj: &Trajectory) -> Result<()> {
    if traj.is_empty() {
        Err(Error::Contract("selection needs at least one observation; use first_action at t = 0".into()))
    } else {
        Ok(())
    }
}

/// EI2 choice with lowest-index tie-breaking.
pub fn ei2_select(state: &PosteriorState, traj: &Trajectory) -> Result<AcquisitionScore> {
    require_observation(traj)?;
    argmax(PolicyKind::Ei2, state, traj.running_max(), traj.running_min(), Some(traj), TieBreak::LowestIndex, &mut NoRng)
}

/// UCB2 choice with lowest-index tie-breaking. Requires `N ≥ 2`.
pub fn ucb2_select(state: &PosteriorState, traj: &Trajectory, n_arms: usize) -> Result<AcquisitionScore> {
    require_observation(traj)?;
    if n_arms != state.n_arms() {
        return Err(Error::domain(format!("n_arms {n_arms} does not match posterior size {}", state.n_arms())));
    }
    argmax(PolicyKind::Ucb2, state, traj.running_max(), traj.running_min(), Some(traj), TieBreak::LowestIndex, &mut NoRng)
}

pub fn one_sided_ei_select(state: &PosteriorState, traj: &Trajectory) -> Result<AcquisitionScore> {
    require_observation(traj)?;
    argmax(PolicyKind::Ei, state, traj.running_max(), traj.running_min(), Some(traj), TieBreak::LowestIndex, &mut NoRng)
}

pub fn one_sided_ucb_select(state: &PosteriorState, traj: &Trajectory) -> Result<AcquisitionScore> {
    require_observation(traj)?;
    argmax(PolicyKind::Ucb, state, traj.running_max(), traj.running_min(), Some(traj), TieBreak::LowestIndex, &mut NoRng)
}

/// Uniform draw among arms not yet visited.
pub fn random_without_replacement_select<R: Rng + ?Sized>(traj: &Trajectory, n_arms: usize, rng: &mut R) -> Result<usize> {
    if traj.n_arms() != n_arms {
        return Err(Error::domain(format!("trajectory covers {} arms, expected {n_arms}", traj.n_arms())));
    }
    let free = n_arms - traj.n_visited();
    if free == 0 {
        return Err(Error::Exhausted { n_arms });
    }
    if 2 * traj.n_visited() <= n_arms {
        loop {
            let a = rng.gen_range(0..n_arms);
            if !traj.is_visited(a) {
                return Ok(a);
            }
        }
    }
    let k = rng.gen_range(0..free);
    Ok((0..n_arms).filter(|&a| !traj.is_visited(a)).nth(k).expect("k < free"))
}

/// Threshold used for both running extremes before the first observation:
/// the average prior mean.
pub fn initial_threshold(state: &PosteriorState) -> f64 {
    let m = state.mean();
    m.iter().sum::<f64>() / m.len() as f64
}

/// First arm of a score-based policy, with `Ŷ₀ = Y̌₀ = mean(μ)` and
/// lowest-index ties.
pub fn first_action(state: &PosteriorState, kind: PolicyKind) -> Result<usize> {
    first_action_scored(state, kind).map(|s| s.arm)
}

pub fn first_action_scored(state: &PosteriorState, kind: PolicyKind) -> Result<AcquisitionScore> {
    if kind.is_prior_independent() {
        return Err(Error::Contract("random_wor draws its first arm from the generator".into()));
    }
    if !state.observed().is_empty() {
        return Err(Error::Contract("first_action expects a posterior without observations".into()));
    }
    let t0 = initial_threshold(state);
    argmax(kind, state, t0, t0, None, TieBreak::LowestIndex, &mut NoRng)
}

/// A policy together with its tie rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    pub kind: PolicyKind,
    #[serde(default)]
    pub tie_break: TieBreak,
}

/// A selected arm, with its score when the policy is score-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Choice {
    Scored(AcquisitionScore),
    Random(usize),
}

impl Choice {
    pub fn arm(&self) -> usize {
        match self {
            Choice::Scored(s) => s.arm,
            Choice::Random(a) => *a,
        }
    }
}

impl Policy {
    pub fn new(kind: PolicyKind) -> Self {
        Policy { kind, tie_break: TieBreak::LowestIndex }
    }

    pub fn with_tie_break(kind: PolicyKind, tie_break: TieBreak) -> Self {
        Policy { kind, tie_break }
    }

    /// Next arm. Sees only the posterior and the trajectory.
    pub fn choose<R: Rng + ?Sized>(&self, state: &PosteriorState, traj: &Trajectory, rng: &mut R) -> Result<Choice> {
        if self.kind == PolicyKind::RandomWor {
            return random_without_replacement_select(traj, state.n_arms(), rng).map(Choice::Random);
        }
        let (hi, lo) = if traj.is_empty() {
            let t0 = initial_threshold(state);
            (t0, t0)
        } else {
            (traj.running_max(), traj.running_min())
        };
        argmax(self.kind, state, hi, lo, Some(traj), self.tie_break, rng).map(Choice::Scored)
    }
}

impl From<PolicyKind> for Policy {
    fn from(kind: PolicyKind) -> Self {
        Policy::new(kind)
    }
}

/// Samples `F` and runs the policy for the instance horizon.
pub fn run_episode(instance: &ProblemInstance, policy: impl Into<Policy>, rng_seed: u64) -> Result<Trajectory> {
    let prepared = instance.prepare()?;
    let mut rng = seeds::episode_rng(rng_seed, 0);
    run_prepared_episode(&prepared, &policy.into(), &mut rng).map(|(_, t)| t)
}

/// Samples `F` from a prepared prior and runs one episode.
pub fn run_prepared_episode<R: Rng + ?Sized>(
    prepared: &PreparedInstance,
    policy: &Policy,
    rng: &mut R,
) -> Result<(SampledFunction, Trajectory)> {
    let f = prepared.sample(rng);
    let traj = run_episode_with_function(prepared, policy, &f, rng)?;
    Ok((f, traj))
}

/// Runs one episode against a given realization `F`.
pub fn run_episode_with_function<R: Rng + ?Sized>(
    prepared: &PreparedInstance,
    policy: &Policy,
    f: &SampledFunction,
    rng: &mut R,
) -> Result<Trajectory> {
    run_episode_observed(prepared, policy, f, rng, |_, _| Ok(()))
}

/// Like [`run_episode_with_function`], calling `observe` after every
/// conditioning step.
pub fn run_episode_observed<R, O>(
    prepared: &PreparedInstance,
    policy: &Policy,
    f: &SampledFunction,
    rng: &mut R,
    mut observe: O,
) -> Result<Trajectory>
where
    R: Rng + ?Sized,
    O: FnMut(&PosteriorState, &Trajectory) -> Result<()>,
{
    let n = prepared.n_arms();
    if f.values.len() != n {
        return Err(Error::domain(format!("function has {} values, instance has {n} arms", f.values.len())));
    }
    let mut state = prepared.posterior();
    let mut traj = Trajectory::new(n);
    for _ in 0..prepared.horizon() {
        let arm = policy.choose(&state, &traj, rng)?.arm();
        let y = f.values[arm];
        state.condition_in_place(arm, y)?;
        traj.push(arm, y);
        observe(&state, &traj)?;
    }
    Ok(traj)
}

/// Placeholder generator for deterministic selections; never consulted.
struct NoRng;

impl rand::RngCore for NoRng {
    fn next_u32(&mut self) -> u32 {
        unreachable!("deterministic tie-breaking does not draw")
    }
    fn next_u64(&mut self) -> u64 {
        unreachable!("deterministic tie-breaking does not draw")
    }
    fn fill_bytes(&mut self, _: &mut [u8]) {
        unreachable!("deterministic tie-breaking does not draw")
    }
    fn try_fill_bytes(&mut self, _: &mut [u8]) -> std::result::Result<(), rand::Error> {
        unreachable!("deterministic tie-breaking does not draw")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{ei, ei_scaled};
    use crate::gp::Covariance;
    use nalgebra::DMatrix;
    use rand::SeedableRng;

    fn iid_state(mean: Vec<f64>) -> PosteriorState {
        let n = mean.len();
        PosteriorState::from_prior(mean, Covariance::Diagonal(vec![1.0; n])).unwrap()
    }

    #[test]
    fn ei2_prefers_unobserved_arm() {
        let s = iid_state(vec![0.0, 0.0]).condition(0, 0.0).unwrap();
        let mut t = Trajectory::new(2);
        t.push(0, 0.0);
        let c = ei2_select(&s, &t).unwrap();
        assert_eq!(c.arm, 1);
        assert!((c.score - ei(0.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn ei2_all_observed_ties_to_arm_zero() {
        let mut s = iid_state(vec![0.0; 3]);
        let mut t = Trajectory::new(3);
        for a in 0..3 {
            s.condition_in_place(a, 1.0).unwrap();
            t.push(a, 1.0);
        }
        let c = ei2_select(&s, &t).unwrap();
        assert_eq!((c.arm, c.score), (0, 0.0));
    }

    #[test]
    fn ei2_up_branch_dominates_for_higher_mean() {
        let s = iid_state(vec![0.0, 0.0, 0.5]);
        let c = argmax(PolicyKind::Ei2, &s, 0.0, 0.0, None, TieBreak::LowestIndex, &mut NoRng).unwrap();
        assert_eq!(c.arm, 2);
        assert_eq!(c.side, Side::Up);
        assert!(ei_scaled(0.0, 0.5, 1.0).unwrap() > ei_scaled(0.0, -0.5, 1.0).unwrap());
        assert_eq!(c.score, ei_scaled(0.0, 0.5, 1.0).unwrap());
    }

    #[test]
    fn ucb2_examples() {
        let s = iid_state(vec![0.0; 4]);
        let c = argmax(PolicyKind::Ucb2, &s, 0.0, 0.0, None, TieBreak::LowestIndex, &mut NoRng).unwrap();
        assert_eq!(c.arm, 0);
        assert!((c.score - (2.0 * 4f64.ln()).sqrt()).abs() < 1e-15);

        let s = iid_state(vec![1.0, 0.0]);
        let c = argmax(PolicyKind::Ucb2, &s, 0.0, 0.0, None, TieBreak::LowestIndex, &mut NoRng).unwrap();
        assert_eq!((c.arm, c.side), (0, Side::Up));
        assert!((c.score - (1.0 + (2.0 * 2f64.ln()).sqrt())).abs() < 1e-15);

        // Observed arm at the running max scores 0; the unobserved arm more.
        let s = iid_state(vec![0.0, 0.0]).condition(0, 0.3).unwrap();
        let mut t = Trajectory::new(2);
        t.push(0, 0.3);
        assert_eq!(score_arm(PolicyKind::Ucb2, &s, 0, 0.3, 0.3).unwrap(), 0.0);
        assert_eq!(ucb2_select(&s, &t, 2).unwrap().arm, 1);

        let one = iid_state(vec![0.0]);
        let mut t1 = Trajectory::new(1);
        t1.push(0, 0.0);
        assert!(matches!(ucb2_select(&one, &t1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn one_sided_baselines() {
        let s = iid_state(vec![0.0; 3]);
        for kind in [PolicyKind::Ei, PolicyKind::Ucb] {
            assert_eq!(first_action(&s, kind).unwrap(), first_action(&s, PolicyKind::Ei2).unwrap());
        }
        // Both extremes at 1: arm 0 (mean -1) is attractive only downwards.
        let s = iid_state(vec![-1.0, 0.0]);
        let hi_lo = (1.0, 1.0);
        let up = argmax(PolicyKind::Ei, &s, hi_lo.0, hi_lo.1, None, TieBreak::LowestIndex, &mut NoRng).unwrap();
        assert_eq!(up.arm, 1);
        let two = argmax(PolicyKind::Ei2, &s, hi_lo.0, hi_lo.1, None, TieBreak::LowestIndex, &mut NoRng).unwrap();
        assert_eq!((two.arm, two.side), (0, Side::Down));
    }

    #[test]
    fn first_action_examples() {
        for kind in [PolicyKind::Ei2, PolicyKind::Ucb2, PolicyKind::Ei, PolicyKind::Ucb, PolicyKind::Ei2Sum] {
            assert_eq!(first_action(&iid_state(vec![0.0; 5]), kind).unwrap(), 0);
            let s = PosteriorState::from_prior(vec![0.0; 2], Covariance::Diagonal(vec![1.0, 4.0])).unwrap();
            assert_eq!(first_action(&s, kind).unwrap(), 1);
        }
        let golden = first_action_scored(&iid_state(vec![0.0, 0.5]), PolicyKind::Ei2).unwrap();
        assert_eq!(golden.arm, 0);
        assert_eq!(golden.side, Side::Down);
        assert_eq!(golden.score, ei(-0.25).unwrap());
        assert!((golden.score - 0.5363446982235801).abs() < 1e-15);
        assert!(first_action(&iid_state(vec![0.0; 2]), PolicyKind::RandomWor).is_err());
    }

    #[test]
    fn random_selection_contract() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let t = Trajectory::new(1);
        assert_eq!(random_without_replacement_select(&t, 1, &mut rng).unwrap(), 0);
        let mut t = Trajectory::new(3);
        t.push(0, 0.0);
        t.push(2, 0.0);
        assert_eq!(random_without_replacement_select(&t, 3, &mut rng).unwrap(), 1);
        t.push(1, 0.0);
        assert!(matches!(random_without_replacement_select(&t, 3, &mut rng), Err(Error::Exhausted { n_arms: 3 })));
    }

    #[test]
    fn random_first_pick_is_uniform() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let t = Trajectory::new(10);
        let mut counts = [0u32; 10];
        let trials = 100_000;
        for _ in 0..trials {
            counts[random_without_replacement_select(&t, 10, &mut rng).unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 / trials as f64 - 0.1).abs() < 0.004);
        }
    }

    #[test]
    fn deterministic_function_episode() {
        let inst = ProblemInstance::new(vec![3.0, 1.0, 2.0], Covariance::Dense(DMatrix::zeros(3, 3)), 3).unwrap();
        let t = run_episode(&inst, PolicyKind::Ei2, 1).unwrap();
        let mut obs = t.observations().to_vec();
        obs.sort_by(f64::total_cmp);
        assert_eq!(obs, vec![1.0, 2.0, 3.0]);
        assert_eq!((t.running_max(), t.running_min()), (3.0, 1.0));
    }

    #[test]
    fn full_horizon_iid_covers_every_arm_in_order() {
        let inst = ProblemInstance::iid(6, 6).unwrap();
        for kind in [PolicyKind::Ei2, PolicyKind::Ucb2] {
            let prep = inst.prepare().unwrap();
            let mut rng = seeds::episode_rng(3, 0);
            let (f, t) = run_prepared_episode(&prep, &Policy::new(kind), &mut rng).unwrap();
            assert_eq!(t.actions(), &[0, 1, 2, 3, 4, 5]);
            assert_eq!((t.running_max(), t.running_min()), (f.f_max, f.f_min));
        }
    }

    #[test]
    fn episodes_repeat_per_seed() {
        let inst = ProblemInstance::iid(20, 10).unwrap();
        for kind in PolicyKind::ALL {
            assert_eq!(run_episode(&inst, kind, 9).unwrap(), run_episode(&inst, kind, 9).unwrap());
        }
    }

    #[test]
    fn trajectory_extremes() {
        let mut t = Trajectory::new(4);
        assert_eq!(t.spread(), 0.0);
        for (a, y) in [(1, 0.5), (3, -2.0), (1, 0.5), (0, 4.0)] {
            t.push(a, y);
        }
        assert_eq!((t.running_max(), t.running_min(), t.spread()), (4.0, -2.0, 6.0));
        assert_eq!(t.n_visited(), 3);
    }

    #[test]
    fn policy_names_roundtrip() {
        for k in PolicyKind::ALL {
            assert_eq!(k.name().parse::<PolicyKind>().unwrap(), k);
        }
        assert!("thompson".parse::<PolicyKind>().is_err());
    }
}
