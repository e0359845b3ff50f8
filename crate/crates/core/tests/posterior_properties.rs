use gpfewshot::gp::{Covariance, PosteriorState};
use gpfewshot::linalg::min_eigenvalue;
use gpfewshot::validation::batch_condition;
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Well-conditioned PSD matrix `BBᵀ/n + 0.05·I` with a mean vector, plus
/// observations at distinct arms.
fn instance() -> impl Strategy<Value = (Vec<f64>, DMatrix<f64>, Vec<(usize, f64)>)> {
    (2usize..=8).prop_flat_map(|n| {
        (
            prop::collection::vec(-2.0f64..2.0, n),
            prop::collection::vec(-1.0f64..1.0, n * n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            1..n,
            prop::collection::vec(-3.0f64..3.0, n),
        )
            .prop_map(move |(mean, b, arms, k, ys): (Vec<f64>, Vec<f64>, Vec<usize>, usize, Vec<f64>)| {
                let obs: Vec<(usize, f64)> = arms[..k].iter().zip(ys).map(|(&a, y)| (a, y)).collect();
                let b = DMatrix::from_row_slice(n, n, &b);
                let c = &b * b.transpose() / n as f64 + DMatrix::identity(n, n) * 0.05;
                (mean, (&c + c.transpose()) * 0.5, obs)
            })
    })
}

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sequential_matches_batch((mean, cov, obs) in instance()) {
        let mut s = PosteriorState::from_prior(mean.clone(), Covariance::Dense(cov.clone())).unwrap();
        for &(a, y) in &obs {
            s.condition_in_place(a, y).unwrap();
        }
        let (bm, bc) = batch_condition(&mean, &cov, &obs).unwrap();
        for (x, y) in s.mean().iter().zip(&bm) {
            prop_assert!((x - y).abs() <= 1e-8);
        }
        prop_assert!(max_diff(&s.cov(), &bc) <= 1e-8);
    }

    #[test]
    fn order_does_not_matter((mean, cov, obs) in instance()) {
        let prior = PosteriorState::from_prior(mean, Covariance::Dense(cov)).unwrap();
        let fwd = obs.iter().try_fold(prior.clone(), |s, &(a, y)| s.condition(a, y)).unwrap();
        let rev = obs.iter().rev().try_fold(prior, |s, &(a, y)| s.condition(a, y)).unwrap();
        for (x, y) in fwd.mean().iter().zip(rev.mean()) {
            prop_assert!((x - y).abs() <= 1e-8);
        }
        prop_assert!(max_diff(&fwd.cov(), &rev.cov()) <= 1e-8);
    }

    #[test]
    fn variances_shrink_and_psd_is_kept((mean, cov, obs) in instance()) {
        let n = mean.len();
        let scale = cov.trace() / n as f64;
        let mut s = PosteriorState::from_prior(mean, Covariance::Dense(cov)).unwrap();
        for &(a, y) in &obs {
            let before = s.variances().to_vec();
            s.condition_in_place(a, y).unwrap();
            for i in 0..n {
                prop_assert!(s.variances()[i] <= before[i] + 1e-10);
            }
            prop_assert!(s.variances()[a].abs() <= 1e-8);
            prop_assert!((s.mean()[a] - y).abs() <= 1e-8);
            prop_assert!(min_eigenvalue(&s.cov()) >= -1e-8 * scale);
        }
    }
}
