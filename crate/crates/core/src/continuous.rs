//! Stationary kernels on the unit cube and their reduction to finite
//! instances on a uniform grid.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::gp::{self, Covariance, PreparedInstance, ProblemInstance, SampledFunction};
use crate::linalg::LowRankFactor;
use crate::policy::{self, Policy, Trajectory};
use crate::seeds;

/// Largest grid for which a dense covariance is built.
pub const MAX_GRID_ARMS: usize = 20_000;

/// Largest joint (coarse + refinement) sampling factor, in entries.
pub const MAX_JOINT_FACTOR_ENTRIES: usize = 60_000_000;

/// Points per side of the refinement grid relative to the coarse grid.
pub const REFINEMENT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    /// `σ²·exp(−‖x−y‖₂²/(2ℓ²))`
    #[serde(rename = "sqexp")]
    SquaredExponential,
    /// `σ²·exp(−‖x−y‖₁/ℓ)`
    #[serde(rename = "exp")]
    Exponential,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::SquaredExponential => "sqexp",
            KernelKind::Exponential => "exp",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqexp" => Ok(KernelKind::SquaredExponential),
            "exp" => Ok(KernelKind::Exponential),
            other => Err(Error::domain(format!("unknown kernel {other:?}; expected sqexp or exp"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub length_scale: f64,
    pub variance: f64,
    pub dim: u32,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, length_scale: f64, variance: f64, dim: u32) -> Result<Self> {
        let spec = KernelSpec { kind, length_scale, variance, dim };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_scale.is_finite() && self.length_scale > 0.0) {
            return Err(Error::domain(format!("length scale must be > 0, got {}", self.length_scale)));
        }
        if !(self.variance.is_finite() && self.variance > 0.0) {
            return Err(Error::domain(format!("kernel variance must be > 0, got {}", self.variance)));
        }
        if self.dim == 0 {
            return Err(Error::domain("kernel dimension must be ≥ 1"));
        }
        Ok(())
    }

    #[inline]
    fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.kind {
            KernelKind::SquaredExponential => {
                let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                self.variance * (-r2 / (2.0 * self.length_scale * self.length_scale)).exp()
            }
            KernelKind::Exponential => {
                let r1: f64 = x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum();
                self.variance * (-r1 / self.length_scale).exp()
            }
        }
    }
}

/// `k(x, y)` for points of the unit cube.
pub fn kernel_eval(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    spec.validate()?;
    for p in [x, y] {
        if p.len() != spec.dim as usize {
            return Err(Error::domain(format!("point has {} coordinates, kernel has D = {}", p.len(), spec.dim)));
        }
        if let Some(c) = p.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::domain(format!("coordinate {c} lies outside the unit cube")));
        }
    }
    Ok(spec.eval_unchecked(x, y))
}

/// Certified `L_k` with `|k(x,x) − k(x,y)| ≤ L_k‖x−y‖_∞` on the unit cube.
pub fn lipschitz_constant(spec: &KernelSpec) -> f64 {
    let d = spec.dim as f64;
    match spec.kind {
        KernelKind::Exponential => spec.variance * d / spec.length_scale,
        KernelKind::SquaredExponential => spec.variance * d.sqrt() / (spec.length_scale * E.sqrt()),
    }
}

/// A kernel on `[0,1]^D` with an evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousInstance {
    pub kernel: KernelSpec,
    pub horizon: u64,
}

impl ContinuousInstance {
    pub fn new(kernel: KernelSpec, horizon: u64) -> Result<Self> {
        kernel.validate()?;
        if horizon == 0 {
            return Err(Error::domain("horizon must be ≥ 1"));
        }
        Ok(ContinuousInstance { kernel, horizon })
    }

    pub fn lipschitz(&self) -> f64 {
        lipschitz_constant(&self.kernel)
    }

    /// Segments per side of the uniform grid.
    pub fn grid_sides(&self) -> Result<u64> {
        let lk = self.lipschitz();
        if lk <= E {
            return Err(Error::domain(format!(
                "grid sizing requires L_k > e, got L_k = {lk} (decrease the length scale or raise the variance)"
            )));
        }
        bounds::thm2_grid_sides(self.kernel.dim, self.horizon as f64, lk)
    }
}

/// Cell centers `(i + 0.5)/S` of the uniform grid with `sides` cells per
/// coordinate, first coordinate varying fastest.
pub fn grid_points(dim: u32, sides: usize) -> Result<Vec<Vec<f64>>> {
    let n = grid_size(dim, sides)?;
    let d = dim as usize;
    Ok((0..n)
        .map(|mut idx| {
            (0..d)
                .map(|_| {
                    let i = idx % sides;
                    idx /= sides;
                    (i as f64 + 0.5) / sides as f64
                })
                .collect()
        })
        .collect())
}

fn grid_size(dim: u32, sides: usize) -> Result<usize> {
    if sides == 0 || dim == 0 {
        return Err(Error::domain("grid needs D ≥ 1 and at least one cell per side"));
    }
    (sides as u128)
        .checked_pow(dim)
        .filter(|&n| n <= usize::MAX as u128 / 64)
        .map(|n| n as usize)
        .ok_or_else(|| Error::Resource(format!("grid with {sides}^{dim} points is too large")))
}

fn check_budget(n: usize) -> Result<()> {
    if n > MAX_GRID_ARMS {
        return Err(Error::Resource(format!(
            "grid has {n} points, above the dense budget of {MAX_GRID_ARMS}; use a smaller T or a larger length scale"
        )));
    }
    Ok(())
}

/// Zero-mean instance on a grid with explicit side count.
pub fn build_grid_with_sides(
    kernel: &KernelSpec,
    sides: usize,
    horizon: usize,
) -> Result<(ProblemInstance, Vec<Vec<f64>>)> {
    kernel.validate()?;
    let n = grid_size(kernel.dim, sides)?;
    check_budget(n)?;
    let points = grid_points(kernel.dim, sides)?;
    let mut cov = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            let v = kernel.eval_unchecked(&points[i], &points[j]);
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    let inst = ProblemInstance::new(vec![0.0; n], Covariance::Dense(cov), horizon)?;
    Ok((inst, points))
}

/// Finite instance on the grid sized from `L_k` and `T`.
pub fn build_grid_instance(cont: &ContinuousInstance) -> Result<(ProblemInstance, Vec<Vec<f64>>)> {
    let sides = cont.grid_sides()?;
    let n = grid_size(cont.kernel.dim, sides as usize)?;
    check_budget(n)?;
    let horizon = usize::try_from(cont.horizon).map_err(|_| Error::domain("horizon too large"))?;
    build_grid_with_sides(&cont.kernel, sides as usize, horizon)
}

/// Grid instance with a joint sampler over the coarse grid and its
/// refinement, built once and shared by many episodes.
#[derive(Debug, Clone)]
pub struct ContinuousSetup {
    kernel: KernelSpec,
    sides: usize,
    n_coarse: usize,
    joint: LowRankFactor,
    prepared: PreparedInstance,
}

/// Outcome of one continuous episode.
#[derive(Debug, Clone)]
pub struct ContinuousOutcome {
    pub trajectory: Trajectory,
    /// The realization on the coarse grid.
    pub function: SampledFunction,
    /// Maximum over the coarse grid and its refinement.
    pub sup_estimate: f64,
    /// Minimum over the coarse grid and its refinement.
    pub inf_estimate: f64,
}

impl ContinuousSetup {
    pub fn new(cont: &ContinuousInstance) -> Result<Self> {
        let sides = cont.grid_sides()? as usize;
        let horizon = usize::try_from(cont.horizon).map_err(|_| Error::domain("horizon too large"))?;
        Self::with_sides(&cont.kernel, sides, horizon)
    }

    pub fn with_sides(kernel: &KernelSpec, sides: usize, horizon: usize) -> Result<Self> {
        kernel.validate()?;
        let n_coarse = grid_size(kernel.dim, sides)?;
        check_budget(n_coarse)?;
        if horizon == 0 || horizon > n_coarse {
            return Err(Error::domain(format!("horizon must satisfy 1 <= T <= N = {n_coarse}, got T = {horizon}")));
        }
        let fine_sides = sides
            .checked_mul(REFINEMENT)
            .ok_or_else(|| Error::Resource("refinement grid too large".into()))?;
        let n_fine = grid_size(kernel.dim, fine_sides)?;
        let d = kernel.dim as usize;
        let mut points: Vec<f64> = Vec::with_capacity((n_coarse + n_fine) * d);
        for p in grid_points(kernel.dim, sides)? {
            points.extend(p);
        }
        if n_fine.saturating_mul(d) > MAX_JOINT_FACTOR_ENTRIES {
            return Err(Error::Resource(format!(
                "refinement grid with {n_fine} points is too large; use a smaller T or a larger length scale"
            )));
        }
        for p in grid_points(kernel.dim, fine_sides)? {
            points.extend(p);
        }
        let n = n_coarse + n_fine;
        let pt = |i: usize| &points[i * d..(i + 1) * d];
        let joint = gp::factor_lazy(
            n,
            |_| kernel.variance,
            |p, out| {
                let xp = pt(p);
                for (i, o) in out.iter_mut().enumerate() {
                    *o = kernel.eval_unchecked(pt(i), xp);
                }
            },
            MAX_JOINT_FACTOR_ENTRIES,
        )
        .map_err(|e| match e {
            Error::Resource(msg) => Error::Resource(format!("{msg}; use a smaller T or a larger length scale")),
            other => other,
        })?;
        let prepared = PreparedInstance::from_factor(joint.truncate_rows(n_coarse), horizon)?;
        Ok(ContinuousSetup { kernel: *kernel, sides, n_coarse, joint, prepared })
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn sides(&self) -> usize {
        self.sides
    }

    pub fn n_arms(&self) -> usize {
        self.n_coarse
    }

    pub fn n_refined(&self) -> usize {
        self.joint.n() - self.n_coarse
    }

    pub fn rank(&self) -> usize {
        self.joint.rank()
    }

    pub fn prepared(&self) -> &PreparedInstance {
        &self.prepared
    }

    /// Draws one joint sample and runs the policy on the coarse grid.
    pub fn episode<R: Rng + ?Sized>(&self, policy: &Policy, rng: &mut R) -> Result<ContinuousOutcome> {
        let z: Vec<f64> = (0..self.joint.rank()).map(|_| rng.sample(rand_distr::StandardNormal)).collect();
        let values = self.joint.mul_vec(&z);
        let sup_estimate = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let inf_estimate = values.iter().copied().fold(f64::INFINITY, f64::min);
        let function = SampledFunction::new(values[..self.n_coarse].to_vec());
        let trajectory = policy::run_episode_with_function(&self.prepared, policy, &function, rng)?;
        Ok(ContinuousOutcome { trajectory, function, sup_estimate, inf_estimate })
    }
}

/// Runs one episode on the grid and returns the trajectory with the
/// refinement estimate of `sup G`.
pub fn continuous_episode(cont: &ContinuousInstance, policy: impl Into<Policy>, seed: u64) -> Result<(Trajectory, f64)> {
    let setup = ContinuousSetup::new(cont)?;
    let mut rng = seeds::episode_rng(seed, 0);
    let out = setup.episode(&policy.into(), &mut rng)?;
    Ok((out.trajectory, out.sup_estimate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::min_eigenvalue;
    use crate::policy::PolicyKind;
    use rand::SeedableRng;

    fn sqexp(ell: f64, var: f64, dim: u32) -> KernelSpec {
        KernelSpec::new(KernelKind::SquaredExponential, ell, var, dim).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let k = sqexp(0.1, 2.0, 1);
        assert_eq!(kernel_eval(&k, &[0.3], &[0.3]).unwrap(), 2.0);
        let v = kernel_eval(&k, &[0.2], &[0.3]).unwrap();
        assert!((v - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
        let e = KernelSpec::new(KernelKind::Exponential, 0.5, 1.0, 2).unwrap();
        let (x, y) = ([0.1, 0.7], [0.4, 0.2]);
        assert_eq!(kernel_eval(&e, &x, &y).unwrap(), kernel_eval(&e, &y, &x).unwrap());
        assert!((kernel_eval(&e, &x, &y).unwrap() - (-1.6f64).exp()).abs() < 1e-15);
        assert!(kernel_eval(&k, &[1.2], &[0.0]).is_err());
        assert!(KernelSpec::new(KernelKind::Exponential, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        let e = KernelSpec::new(KernelKind::Exponential, 1.0, 1.0, 1).unwrap();
        assert_eq!(lipschitz_constant(&e), 1.0);
        let s = sqexp(1.0, 1.0, 1);
        assert!((lipschitz_constant(&s) - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn lipschitz_certificate_dominates_empirical_ratio() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let kind = if rng.gen_bool(0.5) { KernelKind::Exponential } else { KernelKind::SquaredExponential };
            let dim = rng.gen_range(1..=4);
            let ell = 10f64.powf(rng.gen_range(-2.0..0.5));
            let var = 10f64.powf(rng.gen_range(-1.0..1.0));
            let spec = KernelSpec::new(kind, ell, var, dim).unwrap();
            let lk = lipschitz_constant(&spec);
            let mut worst: f64 = 0.0;
            for i in 0..100_000 {
                let x: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
                let y: Vec<f64> = if i % 2 == 0 {
                    (0..dim).map(|_| rng.gen::<f64>()).collect()
                } else {
                    let scale = ell * 10f64.powf(rng.gen_range(-3.0..0.5));
                    x.iter().map(|c| (c + scale * rng.gen_range(-1.0..1.0)).clamp(0.0, 1.0)).collect()
                };
                let dist = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                if dist > 0.0 {
                    let r = (spec.eval_unchecked(&x, &x) - spec.eval_unchecked(&x, &y)).abs() / dist;
                    worst = worst.max(r);
                }
            }
            assert!(worst <= lk, "{spec:?}: empirical {worst} > certified {lk}");
        }
    }

    #[test]
    fn grid_geometry() {
        let pts = grid_points(1, 4).unwrap();
        let xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.125, 0.375, 0.625, 0.875]);
        let (inst, pts) = build_grid_with_sides(&sqexp(0.3, 1.7, 2), 3, 9).unwrap();
        assert_eq!(pts.len(), 9);
        let c = inst.covariance().to_dense();
        assert_eq!(c.nrows(), 9);
        assert!((0..9).all(|i| c[(i, i)] == 1.7));
        assert!(min_eigenvalue(&c) >= -1e-8 * 1.7);
        let (again, _) = build_grid_with_sides(&sqexp(0.3, 1.7, 2), 3, 9).unwrap();
        assert_eq!(again.covariance(), inst.covariance());
    }

    #[test]
    fn grid_covariance_psd_up_to_two_thousand() {
        for (spec, sides) in [
            (sqexp(0.05, 1.0, 1), 2000),
            (KernelSpec::new(KernelKind::Exponential, 0.1, 1.0, 1).unwrap(), 2000),
            (sqexp(0.1, 1.0, 2), 40),
        ] {
            let (inst, _) = build_grid_with_sides(&spec, sides, 1).unwrap();
            let c = inst.covariance().to_dense();
            assert!(min_eigenvalue(&c) >= -1e-8 * spec.variance);
        }
    }

    #[test]
    fn sized_grid_follows_horizon() {
        let cont = ContinuousInstance::new(sqexp(0.02, 1.0, 1), 500).unwrap();
        assert_eq!(cont.grid_sides().unwrap(), 4445);
        let small = ContinuousInstance::new(sqexp(0.5, 1.0, 1), 10).unwrap();
        assert!(matches!(small.grid_sides(), Err(Error::Domain(_))));
        let huge = ContinuousInstance::new(sqexp(0.001, 1.0, 2), 1000).unwrap();
        assert!(matches!(build_grid_instance(&huge), Err(Error::Resource(_))));
    }

    #[test]
    fn refinement_sup_dominates_coarse_max() {
        let setup = ContinuousSetup::with_sides(&sqexp(0.1, 1.0, 1), 30, 10).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let out = setup.episode(&Policy::new(PolicyKind::Ei2), &mut rng).unwrap();
            assert!(out.sup_estimate >= out.function.f_max);
            assert!(out.function.f_max >= out.trajectory.running_max());
        }
    }

    #[test]
    fn vanishing_variance_gives_vanishing_regret() {
        let setup = ContinuousSetup::with_sides(&sqexp(0.1, 1e-12, 1), 20, 5).unwrap();
        let (t, sup) = {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
            let o = setup.episode(&Policy::new(PolicyKind::Ucb2), &mut rng).unwrap();
            (o.trajectory, o.sup_estimate)
        };
        assert!(sup.abs() < 1e-4);
        assert!((sup - t.running_max()).abs() < 1e-4);
    }

    #[test]
    fn continuous_episode_is_reproducible() {
        let cont = ContinuousInstance::new(KernelSpec::new(KernelKind::Exponential, 0.1, 1.0, 1).unwrap(), 20).unwrap();
        let a = continuous_episode(&cont, PolicyKind::Ei2, 3).unwrap();
        let b = continuous_episode(&cont, PolicyKind::Ei2, 3).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}
