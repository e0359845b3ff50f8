//! Gaussian-process optimization with few evaluations: exact noise-free
//! posterior updates, the symmetric EI2/UCB2 acquisition policies,
//! closed-form simple-regret bounds and a seeded Monte Carlo harness that
//! checks them.

pub mod bounds;
pub mod continuous;
pub mod error;
pub mod figures;
pub mod format;
pub mod gauss;
pub mod gp;
pub mod linalg;
pub mod policy;
pub mod quadrature;
pub mod seeds;
pub mod sim;
pub mod validation;

pub use error::{Error, Result};
