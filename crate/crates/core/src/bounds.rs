//! Closed-form simple-regret bounds. All logarithms are natural.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest horizon for which the finite-domain bound is stated.
pub const MIN_HORIZON: f64 = 500.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Upper bound on `1 − E[Ŷ̌]/E[F̂̌]`.
    Thm1Spread,
    /// Upper bound on normreg for zero-mean priors.
    Cor1Normreg,
    /// Asymptotic normreg floor for i.i.d. arms.
    LowerIid,
    /// `1 − T/N`, achievable against any prior-independent policy.
    LowerPriorIndependent,
    /// Continuous-domain regret bound via a uniform grid.
    Thm2Continuous,
    /// Earlier continuous-domain regret bound, for comparison.
    Grunewalder,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Thm1Spread => "thm1_spread",
            BoundKind::Cor1Normreg => "cor1_normreg",
            BoundKind::LowerIid => "lower_iid",
            BoundKind::LowerPriorIndependent => "lower_prior_independent",
            BoundKind::Thm2Continuous => "thm2_continuous",
            BoundKind::Grunewalder => "grunewalder",
        }
    }
}

/// A bound value together with the inputs it was evaluated at.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
}

impl BoundReport {
    fn new(kind: BoundKind, inputs: &[(&str, f64)], value: f64) -> Self {
        BoundReport {
            kind,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
        }
    }

    pub fn thm1(n: f64, t: f64) -> Result<Self> {
        Ok(Self::new(BoundKind::Thm1Spread, &[("n", n), ("t", t)], thm1_regret_bound(n, t)?))
    }

    pub fn cor1(n: f64, t: f64) -> Result<Self> {
        Ok(Self::new(BoundKind::Cor1Normreg, &[("n", n), ("t", t)], cor1_normreg_bound(n, t)?))
    }

    pub fn lower_iid(n: f64, t: f64) -> Result<Self> {
        Ok(Self::new(BoundKind::LowerIid, &[("n", n), ("t", t)], lower_bound_iid(n, t)?))
    }

    pub fn lower_prior_independent(n: f64, t: f64) -> Result<Self> {
        Ok(Self::new(
            BoundKind::LowerPriorIndependent,
            &[("n", n), ("t", t)],
            lower_bound_prior_independent(n, t)?,
        ))
    }

    pub fn thm2(d: u32, t: f64, lk: f64, sigma: f64) -> Result<Self> {
        Ok(Self::new(
            BoundKind::Thm2Continuous,
            &[("d", d as f64), ("t", t), ("lk", lk), ("sigma", sigma)],
            thm2_continuous_bound(d, t, lk, sigma)?,
        ))
    }

    pub fn grunewalder(d: u32, t: f64, lk: f64) -> Result<Self> {
        Ok(Self::new(
            BoundKind::Grunewalder,
            &[("d", d as f64), ("t", t), ("lk", lk)],
            grunewalder_bound(d, t, lk)?,
        ))
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    crate::error::ensure_finite(name, x)
}

fn check_thm1_domain(n: f64, t: f64) -> Result<()> {
    finite("N", n)?;
    finite("T", t)?;
    if !(n >= t && t >= MIN_HORIZON) {
        return Err(Error::domain(format!(
            "bound requires N ≥ T ≥ 500, got N = {n}, T = {t}"
        )));
    }
    Ok(())
}

fn check_asymptotic_domain(n: f64, t: f64) -> Result<()> {
    finite("N", n)?;
    finite("T", t)?;
    if n < 2.0 {
        return Err(Error::domain(format!("asymptotic form requires N ≥ 2, got N = {n}")));
    }
    if !(n >= t && t >= 2.0) {
        return Err(Error::domain(format!("asymptotic form requires N ≥ T ≥ 2, got N = {n}, T = {t}")));
    }
    Ok(())
}

/// `1 − T^{−1/(2√π)}`.
fn horizon_shrink(t: f64) -> f64 {
    1.0 - t.powf(-1.0 / (2.0 * PI.sqrt()))
}

/// `log T − log(3 log^{3/2} T)`.
fn effective_log_horizon(t: f64) -> f64 {
    let lt = t.ln();
    lt - (3.0 * lt.powf(1.5)).ln()
}

/// Upper bound on `1 − E[Ŷ̌]/E[F̂̌]` for EI2/UCB2 with `T` evaluations on
/// `N` arms.
pub fn thm1_regret_bound(n: f64, t: f64) -> Result<f64> {
    check_thm1_domain(n, t)?;
    Ok(1.0 - horizon_shrink(t) * (effective_log_horizon(t) / n.ln()).sqrt())
}

/// Normalized simple-regret bound for zero-mean priors (same expression).
pub fn cor1_normreg_bound(n: f64, t: f64) -> Result<f64> {
    thm1_regret_bound(n, t)
}

/// `1 − √(log T / log N)`, the large-`N` envelope.
pub fn asymptotic_normreg(n: f64, t: f64) -> Result<f64> {
    check_asymptotic_domain(n, t)?;
    Ok(1.0 - (t.ln() / n.ln()).sqrt())
}

/// Normreg floor for i.i.d. standard normal arms (large-`N` envelope).
pub fn lower_bound_iid(n: f64, t: f64) -> Result<f64> {
    asymptotic_normreg(n, t)
}

/// `1 − T/N`.
pub fn lower_bound_prior_independent(n: f64, t: f64) -> Result<f64> {
    finite("N", n)?;
    finite("T", t)?;
    if !(t >= 1.0 && t <= n) {
        return Err(Error::domain(format!("requires 1 ≤ T ≤ N, got N = {n}, T = {t}")));
    }
    Ok(1.0 - t / n)
}

/// Envelope `N^{(1−target)²}` of the evaluations needed for a target normreg.
pub fn required_t_upper(n: f64, target_normreg: f64) -> Result<f64> {
    finite("N", n)?;
    finite("target_normreg", target_normreg)?;
    if n < 2.0 {
        return Err(Error::domain(format!("requires N ≥ 2, got N = {n}")));
    }
    if !(0.0..=1.0).contains(&target_normreg) {
        return Err(Error::domain(format!("target normreg must lie in [0, 1], got {target_normreg}")));
    }
    let e = (1.0 - target_normreg).powi(2);
    Ok((e * n.ln()).exp())
}

/// Smallest integer `T ∈ [500, N]` with `thm1_regret_bound(N, T) ≤ target`,
/// found by bisection. `None` when even `T = N` misses the target.
pub fn required_t_bisection(n: f64, target_normreg: f64) -> Result<Option<u64>> {
    finite("target_normreg", target_normreg)?;
    if !(0.0..=1.0).contains(&target_normreg) {
        return Err(Error::domain(format!("target normreg must lie in [0, 1], got {target_normreg}")));
    }
    check_thm1_domain(n, MIN_HORIZON)?;
    if n >= u64::MAX as f64 {
        return Err(Error::domain(format!("N = {n} exceeds the 64-bit horizon range")));
    }
    let hi_t = n.floor() as u64;
    let bound = |t: u64| thm1_regret_bound(n, t as f64);
    if bound(hi_t)? > target_normreg {
        return Ok(None);
    }
    let (mut lo, mut hi) = (MIN_HORIZON as u64, hi_t);
    if bound(lo)? <= target_normreg {
        return Ok(Some(lo));
    }
    // Invariant: bound(lo) > target ≥ bound(hi).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid)? <= target_normreg {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

fn check_continuous(d: u32, t: f64, lk: f64) -> Result<()> {
    finite("T", t)?;
    finite("L_k", lk)?;
    if d == 0 {
        return Err(Error::domain("dimension D must be ≥ 1"));
    }
    if t < 1.0 {
        return Err(Error::domain(format!("horizon T must be ≥ 1, got {t}")));
    }
    Ok(())
}

fn grid_sides_f64(d: u32, t: f64, lk: f64) -> Result<f64> {
    check_continuous(d, t, lk)?;
    if lk <= E {
        return Err(Error::domain(format!("grid sizing requires L_k > e, got L_k = {lk}")));
    }
    Ok((lk / lk.ln() * (t.ln() / d as f64).exp()).ceil())
}

/// Segments per side `⌈(L_k / log L_k)·T^{1/D}⌉` of the uniform grid.
pub fn thm2_grid_sides(d: u32, t: f64, lk: f64) -> Result<u64> {
    let s = grid_sides_f64(d, t, lk)?;
    if s >= u64::MAX as f64 {
        return Err(Error::Resource(format!("grid side count {s:e} exceeds 64 bits")));
    }
    Ok(s as u64)
}

/// Regret bound for EI2/UCB2 restricted to the uniform grid on `[0,1]^D`
/// with `T` evaluations, kernel Lipschitz constant `L_k` and variance cap `σ²`.
pub fn thm2_continuous_bound(d: u32, t: f64, lk: f64, sigma: f64) -> Result<f64> {
    finite("sigma", sigma)?;
    if sigma <= 0.0 {
        return Err(Error::domain(format!("requires σ > 0, got σ = {sigma}")));
    }
    let s = grid_sides_f64(d, t, lk)?;
    if t < MIN_HORIZON {
        return Err(Error::domain(format!("requires N ≥ T ≥ 500 (grid size N = S^D), got T = {t}")));
    }
    let df = d as f64;
    let log_n = df * s.ln();
    if log_n < t.ln() {
        return Err(Error::domain(format!(
            "requires N ≥ T ≥ 500 with N = S^D, got S = {s}, D = {d}, T = {t}"
        )));
    }
    let spacing_term =
        (2.0 * lk.ln() / (t.ln() / df).exp()).sqrt() * (2.0 * (std::f64::consts::LN_2 + log_n).sqrt() + 15.0 * df.sqrt());
    let finite_term = std::f64::consts::SQRT_2
        * sigma
        * (log_n.sqrt() - horizon_shrink(t) * effective_log_horizon(t).sqrt());
    Ok(spacing_term + finite_term)
}

/// `⌊T^{1/D}⌋` computed exactly for integral powers.
fn floor_root(t: f64, d: u32) -> f64 {
    let mut r = (t.ln() / d as f64).exp().floor();
    while (r + 1.0).powi(d as i32) <= t {
        r += 1.0;
    }
    while r > 0.0 && r.powi(d as i32) > t {
        r -= 1.0;
    }
    r
}

/// `√(2L_k/⌊T^{1/D}⌋)·(2√(log 2T) + 15√D)`.
pub fn grunewalder_bound(d: u32, t: f64, lk: f64) -> Result<f64> {
    check_continuous(d, t, lk)?;
    if lk <= 0.0 {
        return Err(Error::domain(format!("requires L_k > 0, got {lk}")));
    }
    let r = floor_root(t, d);
    if r < 1.0 {
        return Err(Error::domain(format!("requires ⌊T^(1/D)⌋ ≥ 1, got T = {t}, D = {d}")));
    }
    Ok((2.0 * lk / r).sqrt() * (2.0 * (2.0 * t).ln().sqrt() + 15.0 * (d as f64).sqrt()))
}
