//! Finite-domain Gaussian prior and noise-free conditioning.
//!
//! The posterior covariance is kept in factored form
//! `C_t = Σ − Σ_k w_k w_kᵀ`, one rank-1 downdate per informative observation.
//! Only the mean and the diagonal are materialized, so a conditioning step
//! costs `O(N·t)` instead of `O(N²)`; the full matrix is available through
//! [`PosteriorState::cov`] when needed.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, LowRankFactor};

/// Arms whose posterior variance falls below `VAR_FLOOR_RTOL · trace(Σ)/N`
/// are treated as deterministic.
pub const VAR_FLOOR_RTOL: f64 = 1e-10;

/// Absolute tolerance for re-observing a determined arm.
pub const REOBSERVE_ABS_TOL: f64 = 1e-6;

/// Relative nugget `NUGGET_RTOL · trace(Σ)/N` added to each pivot. It bounds
/// how far rounding in one observation can move the posterior when the
/// observed arms are nearly collinear.
pub const NUGGET_RTOL: f64 = 1e-12;

/// Conditioning steps between batch recomputations of mean and variance.
pub const REFRESH_INTERVAL: usize = 64;

const SAMPLER_TOLERANCES: [f64; 3] = [1e-12, 1e-10, 1e-8];

/// Prior covariance of a finite instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Covariance {
    /// Independent arms with the given variances.
    Diagonal(Vec<f64>),
    Dense(DMatrix<f64>),
}

impl Covariance {
    pub fn n(&self) -> usize {
        match self {
            Covariance::Diagonal(d) => d.len(),
            Covariance::Dense(m) => m.nrows(),
        }
    }

    pub fn diag(&self, i: usize) -> f64 {
        match self {
            Covariance::Diagonal(d) => d[i],
            Covariance::Dense(m) => m[(i, i)],
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.diag(i)).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            Covariance::Diagonal(d) => DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone())),
            Covariance::Dense(m) => m.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Covariance::Diagonal(d) => {
                for (i, &v) in d.iter().enumerate() {
                    if !v.is_finite() || v < 0.0 {
                        return Err(Error::domain(format!("variance of arm {i} must be finite and >= 0, got {v}")));
                    }
                }
                Ok(())
            }
            Covariance::Dense(m) => linalg::check_psd(m, "prior covariance"),
        }
    }
}

/// A problem instance `(N, T, μ, Σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    mean: Vec<f64>,
    covariance: Covariance,
    horizon: usize,
}

impl ProblemInstance {
    pub fn new(mean: Vec<f64>, covariance: Covariance, horizon: usize) -> Result<Self> {
        let n = mean.len();
        if n == 0 {
            return Err(Error::domain("instance needs at least one arm"));
        }
        if covariance.n() != n {
            return Err(Error::domain(format!(
                "covariance has dimension {} but mean has length {n}",
                covariance.n()
            )));
        }
        if horizon == 0 || horizon > n {
            return Err(Error::domain(format!("horizon must satisfy 1 <= T <= N = {n}, got T = {horizon}")));
        }
        for (i, &m) in mean.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::domain(format!("prior mean of arm {i} is not finite")));
            }
        }
        covariance.validate()?;
        Ok(ProblemInstance { mean, covariance, horizon })
    }

    /// `μ = 0`, `Σ = I`.
    pub fn iid(n_arms: usize, horizon: usize) -> Result<Self> {
        Self::new(vec![0.0; n_arms], Covariance::Diagonal(vec![1.0; n_arms]), horizon)
    }

    pub fn n_arms(&self) -> usize {
        self.mean.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &Covariance {
        &self.covariance
    }

    pub fn is_centered(&self) -> bool {
        self.mean.iter().all(|&m| m == 0.0)
    }

    /// `true` for the `μ = 0, Σ = I` instance.
    pub fn is_standard_iid(&self) -> bool {
        self.is_centered()
            && match &self.covariance {
                Covariance::Diagonal(d) => d.iter().all(|&v| v == 1.0),
                Covariance::Dense(m) => {
                    let n = m.nrows();
                    (0..n).all(|i| (0..n).all(|j| m[(i, j)] == if i == j { 1.0 } else { 0.0 }))
                }
            }
    }

    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        Self::new(self.mean.clone(), self.covariance.clone(), horizon)
    }

    /// Factorizes the prior once so that many episodes can share it.
    pub fn prepare(&self) -> Result<PreparedInstance> {
        let mean = Arc::new(self.mean.clone());
        match &self.covariance {
            Covariance::Diagonal(d) => Ok(PreparedInstance {
                mean,
                prior: Arc::new(PriorCov::Diagonal(d.clone())),
                sampler: Arc::new(SamplerFactor::Diagonal(d.iter().map(|v| v.sqrt()).collect())),
                horizon: self.horizon,
            }),
            Covariance::Dense(m) => {
                let factor = sampling_factor(m)?;
                let prior = if factor.rank() == m.nrows() {
                    PriorCov::Dense(m.clone())
                } else {
                    PriorCov::LowRank(factor.clone())
                };
                Ok(PreparedInstance {
                    mean,
                    prior: Arc::new(prior),
                    sampler: Arc::new(SamplerFactor::LowRank(factor)),
                    horizon: self.horizon,
                })
            }
        }
    }
}

/// Pivoted Cholesky of `Σ` with an escalating truncation threshold.
fn sampling_factor(m: &DMatrix<f64>) -> Result<LowRankFactor> {
    let n = m.nrows();
    factor_lazy(n, |i| m[(i, i)], |p, out| out.copy_from_slice(m.column(p).as_slice()), usize::MAX)
}

/// Low-rank sampling factor of an implicitly given covariance: pivoted
/// Cholesky truncated at `1e-12`, `1e-10`, then `1e-8` times the mean
/// diagonal, accepting the first level whose residual diagonal is not
/// negative beyond the threshold.
pub fn factor_lazy<D, C>(n: usize, diag: D, mut column: C, max_entries: usize) -> Result<LowRankFactor>
where
    D: Fn(usize) -> f64,
    C: FnMut(usize, &mut [f64]),
{
    let mean_diag = (0..n).map(&diag).sum::<f64>() / n.max(1) as f64;
    let mut last = None;
    for rel in SAMPLER_TOLERANCES {
        let tol = rel * mean_diag;
        let pc = linalg::pivoted_cholesky(n, &diag, &mut column, tol, max_entries)?;
        if pc.min_residual >= -tol {
            return Ok(pc.factor);
        }
        last = Some((rel, pc.factor.rank(), pc.min_residual));
    }
    let (rel, rank, min_res) = last.expect("at least one tolerance tried");
    Err(Error::Numerical(format!(
        "pivoted Cholesky failed at jitter {rel:e}·mean diag: rank {rank}, residual diagonal {min_res:e}"
    )))
}

/// Prior covariance in the representation used for conditioning.
#[derive(Debug, Clone)]
pub enum PriorCov {
    Diagonal(Vec<f64>),
    Dense(DMatrix<f64>),
    /// `L Lᵀ` for a low-rank factor `L`.
    LowRank(LowRankFactor),
}

impl PriorCov {
    pub fn n(&self) -> usize {
        match self {
            PriorCov::Diagonal(d) => d.len(),
            PriorCov::Dense(m) => m.nrows(),
            PriorCov::LowRank(f) => f.n(),
        }
    }

    pub fn diag(&self, i: usize) -> f64 {
        match self {
            PriorCov::Diagonal(d) => d[i],
            PriorCov::Dense(m) => m[(i, i)],
            PriorCov::LowRank(f) => f.diag(i),
        }
    }

    fn column(&self, a: usize) -> Vec<f64> {
        match self {
            PriorCov::Diagonal(d) => {
                let mut c = vec![0.0; d.len()];
                c[a] = d[a];
                c
            }
            PriorCov::Dense(m) => m.column(a).iter().copied().collect(),
            PriorCov::LowRank(f) => f.product_column(a),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            PriorCov::Diagonal(d) => DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone())),
            PriorCov::Dense(m) => m.clone(),
            PriorCov::LowRank(f) => f.to_dense_product(),
        }
    }
}

#[derive(Debug, Clone)]
enum SamplerFactor {
    Diagonal(Vec<f64>),
    LowRank(LowRankFactor),
}

/// A prior factorized for repeated sampling and conditioning.
#[derive(Debug, Clone)]
pub struct PreparedInstance {
    mean: Arc<Vec<f64>>,
    prior: Arc<PriorCov>,
    sampler: Arc<SamplerFactor>,
    horizon: usize,
}

impl PreparedInstance {
    /// Builds a prepared instance directly from a low-rank factor of the
    /// prior covariance (zero mean).
    pub fn from_factor(factor: LowRankFactor, horizon: usize) -> Result<Self> {
        let n = factor.n();
        if horizon == 0 || horizon > n {
            return Err(Error::domain(format!("horizon must satisfy 1 <= T <= N = {n}, got T = {horizon}")));
        }
        Ok(PreparedInstance {
            mean: Arc::new(vec![0.0; n]),
            prior: Arc::new(PriorCov::LowRank(factor.clone())),
            sampler: Arc::new(SamplerFactor::LowRank(factor)),
            horizon,
        })
    }

    pub fn n_arms(&self) -> usize {
        self.mean.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn prior_mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn prior(&self) -> &PriorCov {
        &self.prior
    }

    /// Rank of the sampling factor (number of standard normals per draw).
    pub fn sampling_rank(&self) -> usize {
        match &*self.sampler {
            SamplerFactor::Diagonal(d) => d.len(),
            SamplerFactor::LowRank(f) => f.rank(),
        }
    }

    /// Draws `F ~ N(μ, Σ)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SampledFunction {
        let values = match &*self.sampler {
            SamplerFactor::Diagonal(sd) => self
                .mean
                .iter()
                .zip(sd)
                .map(|(m, s)| {
                    let z: f64 = rng.sample(StandardNormal);
                    m + s * z
                })
                .collect(),
            SamplerFactor::LowRank(f) => {
                let z: Vec<f64> = (0..f.rank()).map(|_| rng.sample(StandardNormal)).collect();
                f.mul_vec(&z)
                    .into_iter()
                    .zip(self.mean.iter())
                    .map(|(x, m)| x + m)
                    .collect()
            }
        };
        SampledFunction::new(values)
    }

    pub fn posterior(&self) -> PosteriorState {
        PosteriorState::from_shared(self.mean.clone(), self.prior.clone())
    }
}

/// Draws one function realization `F ~ N(μ, Σ)` from a seed.
pub fn sample_function(instance: &ProblemInstance, rng_seed: u64) -> Result<SampledFunction> {
    let prepared = instance.prepare()?;
    let mut rng = crate::seeds::episode_rng(rng_seed, 0);
    Ok(prepared.sample(&mut rng))
}

/// A realization `F` with its extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub values: Vec<f64>,
    pub f_max: f64,
    pub f_min: f64,
    pub f_spread: f64,
}

impl SampledFunction {
    pub fn new(values: Vec<f64>) -> Self {
        let f_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let f_min = values.iter().copied().fold(f64::INFINITY, f64::min);
        SampledFunction { values, f_max, f_min, f_spread: f_max - f_min }
    }

    /// `−F`.
    pub fn negated(&self) -> Self {
        SampledFunction::new(self.values.iter().map(|v| -v).collect())
    }

    pub fn shifted(&self, c: f64) -> Self {
        SampledFunction::new(self.values.iter().map(|v| v + c).collect())
    }
}

/// Posterior mean `M_t` and covariance `C_t` after noise-free observations.
#[derive(Debug, Clone)]
pub struct PosteriorState {
    prior_mean: Arc<Vec<f64>>,
    prior: Arc<PriorCov>,
    mean: Vec<f64>,
    var: Vec<f64>,
    /// Downdate vectors `w_k`, one per informative observation.
    rows: Vec<Vec<f64>>,
    /// Innovation of each downdate, `(y − M[a]) / √(C[a][a] + nugget)`.
    alphas: Vec<f64>,
    observed: BTreeMap<usize, f64>,
    var_floor: f64,
    nugget: f64,
    since_refresh: usize,
}

impl PosteriorState {
    /// Posterior at `t = 0` for the prior `N(mean, cov)`.
    pub fn from_prior(mean: Vec<f64>, cov: Covariance) -> Result<Self> {
        if mean.len() != cov.n() {
            return Err(Error::domain("mean and covariance dimensions differ"));
        }
        cov.validate()?;
        let prior = match cov {
            Covariance::Diagonal(d) => PriorCov::Diagonal(d),
            Covariance::Dense(m) => PriorCov::Dense(m),
        };
        Ok(Self::from_shared(Arc::new(mean), Arc::new(prior)))
    }

    fn from_shared(prior_mean: Arc<Vec<f64>>, prior: Arc<PriorCov>) -> Self {
        let n = prior.n();
        let var: Vec<f64> = (0..n).map(|i| prior.diag(i)).collect();
        let trace: f64 = var.iter().sum();
        let var_floor = if n > 0 { VAR_FLOOR_RTOL * trace / n as f64 } else { 0.0 };
        PosteriorState {
            mean: prior_mean.as_ref().clone(),
            prior_mean,
            prior,
            var,
            rows: Vec::new(),
            alphas: Vec::new(),
            observed: BTreeMap::new(),
            var_floor,
            nugget: if n > 0 { NUGGET_RTOL * trace / n as f64 } else { 0.0 },
            since_refresh: 0,
        }
    }

    pub fn n_arms(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Posterior variances `C_t[n][n]` (may carry tiny negative rounding).
    pub fn variances(&self) -> &[f64] {
        &self.var
    }

    pub fn observed(&self) -> &BTreeMap<usize, f64> {
        &self.observed
    }

    pub fn var_floor(&self) -> f64 {
        self.var_floor
    }

    /// Tolerance used when an already-determined arm is observed again.
    pub fn reobserve_tolerance(&self) -> f64 {
        REOBSERVE_ABS_TOL + 8.0 * self.var_floor.sqrt()
    }

    /// `√max(C_t[a][a], 0)`.
    pub fn posterior_sd(&self, arm: usize) -> f64 {
        self.var[arm].max(0.0).sqrt()
    }

    /// Dense posterior covariance `C_t`.
    pub fn cov(&self) -> DMatrix<f64> {
        if let PriorCov::Diagonal(_) = *self.prior {
            return DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.var));
        }
        let mut c = self.prior.to_dense();
        for w in &self.rows {
            for j in 0..w.len() {
                if w[j] == 0.0 {
                    continue;
                }
                for i in 0..w.len() {
                    c[(i, j)] -= w[i] * w[j];
                }
            }
        }
        c
    }

    /// Returns the posterior after additionally observing `F[arm] = value`.
    pub fn condition(&self, arm: usize, value: f64) -> Result<Self> {
        let mut next = self.clone();
        next.condition_in_place(arm, value)?;
        Ok(next)
    }

    /// In-place version of [`PosteriorState::condition`].
    pub fn condition_in_place(&mut self, arm: usize, value: f64) -> Result<()> {
        let n = self.n_arms();
        if arm >= n {
            return Err(Error::domain(format!("arm {arm} out of range for N = {n}")));
        }
        if !value.is_finite() {
            return Err(Error::domain(format!("observation must be finite, got {value}")));
        }
        let tol = self.reobserve_tolerance();
        if let Some(&prev) = self.observed.get(&arm) {
            if (prev - value).abs() > tol {
                return Err(Error::Inconsistent { arm, expected: prev, observed: value });
            }
            return Ok(());
        }

        if self.var[arm] <= self.var_floor {
            return self.accept_determined(arm, value, tol);
        }
        if matches!(*self.prior, PriorCov::Diagonal(_)) {
            // Independent arms: only the observed arm changes.
            self.pin(arm, value);
            return Ok(());
        }

        let mut col = self.prior.column(arm);
        for w in &self.rows {
            let wa = w[arm];
            if wa != 0.0 {
                for (c, &x) in col.iter_mut().zip(w.iter()) {
                    *c -= wa * x;
                }
            }
        }
        let pivot = col[arm];
        if pivot <= self.var_floor {
            return self.accept_determined(arm, value, tol);
        }
        let s = (pivot + self.nugget).sqrt();
        col.iter_mut().for_each(|c| *c /= s);

        let alpha = (value - self.mean[arm]) / s;
        for ((m, v), &w) in self.mean.iter_mut().zip(self.var.iter_mut()).zip(col.iter()) {
            *m += alpha * w;
            *v -= w * w;
        }
        self.rows.push(col);
        self.alphas.push(alpha);
        self.pin(arm, value);

        self.since_refresh += 1;
        if self.since_refresh >= REFRESH_INTERVAL {
            self.refresh();
        }
        Ok(())
    }

    fn accept_determined(&mut self, arm: usize, value: f64, tol: f64) -> Result<()> {
        if (value - self.mean[arm]).abs() > tol {
            return Err(Error::Inconsistent { arm, expected: self.mean[arm], observed: value });
        }
        self.pin(arm, value);
        Ok(())
    }

    fn pin(&mut self, arm: usize, value: f64) {
        self.mean[arm] = value;
        self.var[arm] = 0.0;
        self.observed.insert(arm, value);
    }

    /// Recomputes mean and variances from the stored downdates.
    fn refresh(&mut self) {
        self.since_refresh = 0;
        let n = self.n_arms();
        for i in 0..n {
            self.mean[i] = self.prior_mean[i];
            self.var[i] = self.prior.diag(i);
        }
        for (w, &al) in self.rows.iter().zip(&self.alphas) {
            for i in 0..n {
                self.mean[i] += al * w[i];
                self.var[i] -= w[i] * w[i];
            }
        }
        let observed: Vec<(usize, f64)> = self.observed.iter().map(|(&a, &y)| (a, y)).collect();
        for (a, y) in observed {
            self.mean[a] = y;
            self.var[a] = 0.0;
        }
    }
}

/// `√max(C_t[a][a], 0)`.
pub fn posterior_sd(state: &PosteriorState, arm: usize) -> f64 {
    state.posterior_sd(arm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn dense(rows: usize, data: &[f64]) -> Covariance {
        Covariance::Dense(DMatrix::from_row_slice(rows, rows, data))
    }

    #[test]
    fn degenerate_prior_samples_the_mean() {
        let inst = ProblemInstance::new(vec![1.0, 2.0, 3.0], Covariance::Dense(DMatrix::zeros(3, 3)), 3).unwrap();
        let f = sample_function(&inst, 11).unwrap();
        assert_eq!(f.values, vec![1.0, 2.0, 3.0]);
        assert_eq!((f.f_max, f.f_min, f.f_spread), (3.0, 1.0, 2.0));
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let inst = ProblemInstance::new(vec![0.0; 2], dense(2, &[1.0, 0.5, 0.5, 1.0]), 2).unwrap();
        assert_eq!(sample_function(&inst, 5).unwrap(), sample_function(&inst, 5).unwrap());
        assert_ne!(sample_function(&inst, 5).unwrap(), sample_function(&inst, 6).unwrap());
    }

    #[test]
    fn identity_prior_moments() {
        let inst = ProblemInstance::new(vec![0.0; 3], Covariance::Dense(DMatrix::identity(3, 3)), 3).unwrap();
        let prep = inst.prepare().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let m = 100_000;
        let mut sum = [0.0; 3];
        let mut sq = [0.0; 3];
        for _ in 0..m {
            let f = prep.sample(&mut rng);
            for i in 0..3 {
                sum[i] += f.values[i];
                sq[i] += f.values[i] * f.values[i];
            }
        }
        for i in 0..3 {
            let mean = sum[i] / m as f64;
            let var = sq[i] / m as f64 - mean * mean;
            assert!(mean.abs() < 4.0 / (m as f64).sqrt());
            assert!((var - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn correlated_prior_sample_correlation() {
        let inst = ProblemInstance::new(vec![0.0; 2], dense(2, &[1.0, 0.5, 0.5, 1.0]), 2).unwrap();
        let prep = inst.prepare().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let m = 100_000;
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..m {
            let f = prep.sample(&mut rng);
            let (x, y) = (f.values[0], f.values[1]);
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
        let mf = m as f64;
        let cov = sxy / mf - sx * sy / mf / mf;
        let corr = cov / ((sxx / mf - (sx / mf).powi(2)) * (syy / mf - (sy / mf).powi(2))).sqrt();
        assert!((corr - 0.5).abs() < 0.01, "corr = {corr}");
    }

    #[test]
    fn non_psd_instance_rejected() {
        let err = ProblemInstance::new(vec![0.0; 2], dense(2, &[1.0, 2.0, 2.0, 1.0]), 1).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(ProblemInstance::iid(3, 4).is_err());
        assert!(ProblemInstance::iid(3, 0).is_err());
    }

    #[test]
    fn hand_conditioning_example() {
        let s = PosteriorState::from_prior(vec![0.0; 2], dense(2, &[1.0, 0.5, 0.5, 1.0])).unwrap();
        let s = s.condition(0, 1.0).unwrap();
        assert!((s.mean()[0] - 1.0).abs() < 1e-11);
        assert!((s.mean()[1] - 0.5).abs() < 1e-11);
        let c = s.cov();
        let want = [[0.0, 0.0], [0.0, 0.75]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((c[(i, j)] - want[i][j]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn independent_arms_untouched() {
        let s = PosteriorState::from_prior(vec![0.0; 2], Covariance::Dense(DMatrix::identity(2, 2))).unwrap();
        let s = s.condition(0, 7.0).unwrap();
        assert_eq!(s.mean(), &[7.0, 0.0]);
        assert_eq!(s.variances(), &[0.0, 1.0]);
        assert_eq!(s.posterior_sd(1), 1.0);
        assert_eq!(s.posterior_sd(0), 0.0);
    }

    #[test]
    fn reobservation_semantics() {
        let s = PosteriorState::from_prior(vec![0.0; 2], dense(2, &[1.0, 0.5, 0.5, 1.0])).unwrap();
        let s = s.condition(0, 1.0).unwrap();
        let again = s.condition(0, 1.0 + 1e-9).unwrap();
        assert_eq!(again.mean(), s.mean());
        assert!(matches!(s.condition(0, 2.0), Err(Error::Inconsistent { arm: 0, .. })));
    }

    #[test]
    fn determined_arm_must_match_mean() {
        // Arm 1 is a copy of arm 0.
        let s = PosteriorState::from_prior(vec![0.0; 2], dense(2, &[1.0, 1.0, 1.0, 1.0])).unwrap();
        let s = s.condition(0, 0.3).unwrap();
        assert!(s.variances()[1].abs() < 1e-11);
        let s2 = s.condition(1, 0.3).unwrap();
        assert_eq!(s2.observed().len(), 2);
        assert!(matches!(s.condition(1, 1.3), Err(Error::Inconsistent { arm: 1, .. })));
    }

    #[test]
    fn negative_rounding_clamped() {
        let mut s = PosteriorState::from_prior(vec![0.0; 2], Covariance::Diagonal(vec![1.0, 1.0])).unwrap();
        s.var[1] = -1e-12;
        assert_eq!(s.posterior_sd(1), 0.0);
        assert_eq!(posterior_sd(&s, 0), 1.0);
    }

    #[test]
    fn out_of_range_arm() {
        let s = PosteriorState::from_prior(vec![0.0; 2], Covariance::Diagonal(vec![1.0, 1.0])).unwrap();
        assert!(s.condition(2, 0.0).is_err());
        assert!(s.condition(0, f64::NAN).is_err());
    }

    #[test]
    fn low_rank_prepared_instance_is_consistent() {
        // Rank-2 covariance on 5 arms: after two informative observations
        // every arm is determined and re-observations must agree.
        let v1 = [1.0, 0.5, -0.3, 0.8, 0.0];
        let v2 = [0.0, 1.0, 0.7, -0.2, 0.4];
        let m = DMatrix::from_fn(5, 5, |i, j| v1[i] * v1[j] + v2[i] * v2[j]);
        let inst = ProblemInstance::new(vec![0.0; 5], Covariance::Dense(m), 5).unwrap();
        let prep = inst.prepare().unwrap();
        assert_eq!(prep.sampling_rank(), 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = prep.sample(&mut rng);
        let mut s = prep.posterior();
        for a in 0..5 {
            s.condition_in_place(a, f.values[a]).unwrap();
        }
        for a in 0..5 {
            assert!((s.mean()[a] - f.values[a]).abs() < 1e-12);
        }
    }

    #[test]
    fn refresh_keeps_interpolation() {
        let n = 80;
        let m = DMatrix::from_fn(n, n, |i, j| {
            let d = (i as f64 - j as f64) / 30.0;
            (-0.5 * d * d).exp() + if i == j { 0.5 } else { 0.0 }
        });
        let inst = ProblemInstance::new(vec![0.0; n], Covariance::Dense(m), n).unwrap();
        let prep = inst.prepare().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let f = prep.sample(&mut rng);
        let mut s = prep.posterior();
        for a in 0..70 {
            s.condition_in_place((a * 7) % n, f.values[(a * 7) % n]).unwrap();
        }
        for (&a, &y) in s.observed() {
            assert!((s.mean()[a] - y).abs() <= 1e-8);
            assert!(s.variances()[a] <= 1e-8);
        }
        let c = s.cov();
        for i in 0..n {
            assert!((c[(i, i)] - s.variances()[i]).abs() < 1e-8);
        }
    }
}
