use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated an operation's stated precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine could not produce a result.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// An already-determined arm was observed at a different value.
    #[error(
        "inconsistent observation for arm {arm}: posterior mean {expected} is determined, observed {observed}"
    )]
    Inconsistent {
        arm: usize,
        expected: f64,
        observed: f64,
    },

    /// Sampling without replacement ran out of unvisited arms.
    #[error("all {n_arms} arms have been visited")]
    Exhausted { n_arms: usize },

    /// The requested problem exceeds the dense-algebra budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A caller asked for something the operation explicitly does not support.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An episode of a Monte Carlo experiment failed.
    #[error("episode {index} (seed {seed:#018x}) failed: {source}")]
    Episode {
        index: u64,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// The innermost error, unwrapping episode context.
    pub fn root(&self) -> &Error {
        match self {
            Error::Episode { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {x}")))
    }
}
