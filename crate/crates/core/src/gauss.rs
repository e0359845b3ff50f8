//! Scalar Gaussian special functions and the expected-improvement family.
//!
//! `ei(τ) = N(τ) − τ Φᶜ(τ)` is the expected amount by which a standard normal
//! exceeds `τ`. The tail of `ei` is evaluated through the Laplace continued
//! fraction of the Mills ratio, which avoids the cancellation of the direct
//! formula for large `τ`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;

use crate::error::{ensure_finite, Error, Result};
use crate::linalg;

/// `1 / sqrt(2π)`
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Above this threshold `ei` switches to the continued-fraction form.
const EI_TAIL_THRESHOLD: f64 = 6.0;
const EI_CF_DEPTH: u32 = 120;

#[inline]
pub(crate) fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

#[inline]
pub(crate) fn ccdf(tau: f64) -> f64 {
    0.5 * libm::erfc(tau * FRAC_1_SQRT_2)
}

/// `1 − τ·R(τ)` scaled form: returns `K/(τ+K)` where the Mills ratio is
/// `R(τ) = 1/(τ+K)`.
#[inline]
fn ei_tail_factor(tau: f64) -> f64 {
    let depth = (150.0 / tau) as u32 + 8;
    let mut f = tau;
    for j in (2..=depth.min(EI_CF_DEPTH)).rev() {
        f = tau + j as f64 / f;
    }
    let k = 1.0 / f;
    k / (tau + k)
}

#[inline]
pub(crate) fn ei_raw(tau: f64) -> f64 {
    if tau >= EI_TAIL_THRESHOLD {
        let p = pdf(tau);
        if p == 0.0 {
            return 0.0;
        }
        p * ei_tail_factor(tau)
    } else {
        pdf(tau) - tau * ccdf(tau)
    }
}

/// `σ·ei((τ−μ)/σ)`, with the `σ = 0` limit `max(μ−τ, 0)`.
#[inline]
pub(crate) fn ei_scaled_raw(tau: f64, mu: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        sigma * ei_raw((tau - mu) / sigma)
    } else {
        (mu - tau).max(0.0)
    }
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(pdf(x))
}

/// Complementary CDF `Φᶜ(τ) = P(Z ≥ τ)`, evaluated through `erfc` so the
/// upper tail keeps full relative precision.
pub fn std_normal_ccdf(tau: f64) -> Result<f64> {
    ensure_finite("tau", tau)?;
    Ok(ccdf(tau))
}

pub fn std_normal_cdf(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(ccdf(-x))
}

/// Lower and upper bounds `((τ⁻¹−τ⁻³)N(τ), (τ⁻¹−τ⁻³+3τ⁻⁵)N(τ))` on `Φᶜ(τ)`,
/// valid for `τ > 0`.
pub fn ccdf_sandwich(tau: f64) -> Result<(f64, f64)> {
    ensure_finite("tau", tau)?;
    if tau <= 0.0 {
        return Err(Error::domain(format!("ccdf sandwich requires tau > 0, got {tau}")));
    }
    let n = pdf(tau);
    let t1 = 1.0 / tau;
    let t3 = t1 * t1 * t1;
    let t5 = t3 * t1 * t1;
    Ok(((t1 - t3) * n, (t1 - t3 + 3.0 * t5) * n))
}

/// Standard expected improvement `ei(τ) = N(τ) − τΦᶜ(τ)`.
pub fn ei(tau: f64) -> Result<f64> {
    ensure_finite("tau", tau)?;
    Ok(ei_raw(tau))
}

/// Expected improvement of `N(μ, σ²)` over the threshold `τ`.
pub fn ei_scaled(tau: f64, mu: f64, sigma: f64) -> Result<f64> {
    ensure_finite("tau", tau)?;
    ensure_finite("mu", mu)?;
    ensure_finite("sigma", sigma)?;
    if sigma < 0.0 {
        return Err(Error::domain(format!("sigma must be >= 0, got {sigma}")));
    }
    Ok(ei_scaled_raw(tau, mu, sigma))
}

/// Bounds `((τ⁻²−3τ⁻⁴)N(τ), τ⁻²N(τ))` on `ei(τ)` for `τ > 0`.
pub fn ei_sandwich(tau: f64) -> Result<(f64, f64)> {
    ensure_finite("tau", tau)?;
    if tau <= 0.0 {
        return Err(Error::domain(format!("ei sandwich requires tau > 0, got {tau}")));
    }
    let n = pdf(tau);
    let t2 = 1.0 / (tau * tau);
    Ok(((t2 - 3.0 * t2 * t2) * n, t2 * n))
}

/// `d²ei/dτ² = e^{−τ²/2}/√(2π)`; positive everywhere, so `ei` is convex.
pub fn ei_second_derivative(tau: f64) -> Result<f64> {
    ensure_finite("tau", tau)?;
    Ok((-0.5 * tau * tau).exp() / (2.0 * PI).sqrt())
}

/// Mean, covariance and threshold of a multivariate expected improvement
/// `mei(τ|m,c) = E[max{max_n F_n − τ, 0}]` with `F ~ N(m, c)`.
#[derive(Debug, Clone)]
pub struct MeiInput {
    pub m: Vec<f64>,
    pub c: DMatrix<f64>,
    pub tau: f64,
}

impl MeiInput {
    pub fn new(m: Vec<f64>, c: DMatrix<f64>, tau: f64) -> Self {
        MeiInput { m, c, tau }
    }

    fn validate(&self) -> Result<()> {
        let n = self.m.len();
        if n < 2 {
            return Err(Error::domain(format!(
                "multivariate EI bound needs N >= 2 (log N appears in a denominator), got N = {n}"
            )));
        }
        if self.c.nrows() != n || self.c.ncols() != n {
            return Err(Error::domain(format!(
                "covariance is {}x{} but mean has length {n}",
                self.c.nrows(),
                self.c.ncols()
            )));
        }
        ensure_finite("tau", self.tau)?;
        for &x in &self.m {
            ensure_finite("m", x)?;
        }
        linalg::check_psd(&self.c, "covariance")
    }
}

/// Upper bound on the multivariate expected improvement:
///
/// `max{max_n(m_n − τ + √(2 c_nn log N)), 0} + max_n √c_nn / (2√(2π) log N)`.
pub fn mei_upper_bound(input: &MeiInput) -> Result<f64> {
    input.validate()?;
    let n = input.m.len();
    let log_n = (n as f64).ln();
    let mut b = 0.0_f64;
    let mut max_sd = 0.0_f64;
    for (i, &mi) in input.m.iter().enumerate() {
        let var = input.c[(i, i)].max(0.0);
        let shifted = mi - input.tau;
        b = b.max(shifted + (var * 2.0 * log_n).sqrt());
        max_sd = max_sd.max(var.sqrt());
    }
    Ok(b + max_sd / (2.0 * (2.0 * PI).sqrt() * log_n))
}
