//! Process exit codes and the error type carrying them.

use std::fmt;

use gpfewshot::Error;

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_VALIDATION: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(EXIT_DOMAIN, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(EXIT_INTERNAL, message)
    }

    /// Error category reported on stderr.
    pub fn category(&self) -> &'static str {
        match self.code {
            EXIT_DOMAIN => "domain",
            EXIT_RESOURCE => "resource",
            EXIT_VALIDATION => "validation",
            _ => "internal",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::Domain(_) | Error::Contract(_) => EXIT_DOMAIN,
            Error::Resource(_) => EXIT_RESOURCE,
            _ => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    }
}
