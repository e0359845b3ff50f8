use gpfewshot::gp::{Covariance, ProblemInstance, SampledFunction};
use gpfewshot::policy::{self, Choice, Policy, PolicyKind, Trajectory};
use gpfewshot::seeds;
use gpfewshot::sim::random_psd_instance;
use proptest::prelude::*;

const SCORED: [PolicyKind; 5] = [PolicyKind::Ei2, PolicyKind::Ucb2, PolicyKind::Ei, PolicyKind::Ucb, PolicyKind::Ei2Sum];

fn with_mean(inst: &ProblemInstance, mean: Vec<f64>) -> ProblemInstance {
    ProblemInstance::new(mean, inst.covariance().clone(), inst.horizon()).unwrap()
}

#[test]
fn sign_flip_mirrors_two_sided_policies() {
    for e in 0..200u64 {
        let base = random_psd_instance(24, 12, seeds::derive_master(e, "flip-instance")).unwrap();
        let mut rng = seeds::episode_rng(e, 0);
        let mean: Vec<f64> = (0..24).map(|i| ((i * 7 + e as usize) % 11) as f64 / 5.0 - 1.0).collect();
        let neg: Vec<f64> = mean.iter().map(|m| -m).collect();
        let up = with_mean(&base, mean).prepare().unwrap();
        let down = with_mean(&base, neg).prepare().unwrap();
        let f = up.sample(&mut rng);
        for kind in [PolicyKind::Ei2, PolicyKind::Ucb2, PolicyKind::Ei2Sum] {
            let p = Policy::new(kind);
            let a = policy::run_episode_with_function(&up, &p, &f, &mut rng).unwrap();
            let b = policy::run_episode_with_function(&down, &p, &f.negated(), &mut rng).unwrap();
            assert_eq!(a.actions(), b.actions(), "episode {e}, {kind}");
            for (x, y) in a.observations().iter().zip(b.observations()) {
                assert_eq!(*x, -*y);
            }
        }
    }
}

#[test]
fn shift_leaves_actions_unchanged() {
    for e in 0..50u64 {
        let base = random_psd_instance(20, 10, seeds::derive_master(e, "shift-instance")).unwrap();
        let shifted = with_mean(&base, vec![2.5; 20]);
        let (pa, pb) = (base.prepare().unwrap(), shifted.prepare().unwrap());
        let mut rng = seeds::episode_rng(e, 1);
        let f = pa.sample(&mut rng);
        for kind in SCORED {
            let p = Policy::new(kind);
            let a = policy::run_episode_with_function(&pa, &p, &f, &mut rng).unwrap();
            let b = policy::run_episode_with_function(&pb, &p, &f.shifted(2.5), &mut rng).unwrap();
            assert_eq!(a.actions(), b.actions(), "episode {e}, {kind}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The chosen arm is the exhaustive argmax; ties go to unvisited arms,
    /// then to the lowest index.
    #[test]
    fn choice_is_the_exhaustive_argmax(n in 2usize..=20, steps in 1usize..6, seed in any::<u64>()) {
        let inst = random_psd_instance(n, n, seed).unwrap();
        let prepared = inst.prepare().unwrap();
        let mut rng = seeds::episode_rng(seed, 0);
        let f = prepared.sample(&mut rng);
        for kind in SCORED {
            let mut state = prepared.posterior();
            let mut traj = Trajectory::new(n);
            for _ in 0..steps.min(n - 1) {
                let Choice::Scored(pick) = Policy::new(kind).choose(&state, &traj, &mut rng).unwrap() else {
                    unreachable!()
                };
                if !traj.is_empty() {
                    let (hi, lo) = (traj.running_max(), traj.running_min());
                    let scores: Vec<f64> =
                        (0..n).map(|a| policy::score_arm(kind, &state, a, hi, lo).unwrap()).collect();
                    let expected = (0..n)
                        .max_by(|&x, &y| {
                            (scores[x], !traj.is_visited(x))
                                .partial_cmp(&(scores[y], !traj.is_visited(y)))
                                .unwrap()
                                .then(y.cmp(&x))
                        })
                        .unwrap();
                    prop_assert_eq!(pick.arm, expected, "{}", kind);
                    prop_assert_eq!(pick.score, scores[expected]);
                }
                let y = f.values[pick.arm];
                state.condition_in_place(pick.arm, y).unwrap();
                traj.push(pick.arm, y);
            }
        }
    }

    #[test]
    fn zero_prior_is_fully_determined(n in 2usize..12, mu in prop::collection::vec(-3.0f64..3.0, 12)) {
        let inst = ProblemInstance::new(mu[..n].to_vec(), Covariance::Diagonal(vec![0.0; n]), n).unwrap();
        let prepared = inst.prepare().unwrap();
        let f = SampledFunction::new(mu[..n].to_vec());
        let mut rng = seeds::episode_rng(1, 0);
        let traj = policy::run_episode_with_function(&prepared, &Policy::new(PolicyKind::Ei2), &f, &mut rng).unwrap();
        prop_assert_eq!(traj.n_visited(), n);
    }
}
