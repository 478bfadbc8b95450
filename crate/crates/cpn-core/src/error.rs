use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum CpnError {
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CpnError>;

impl CpnError {
    /// Process exit code the CLI maps this error to: 2 for usage/validation
    /// problems, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CpnError::InvalidEnsemble(_)
            | CpnError::InvalidStrategy(_)
            | CpnError::InvalidSweep(_)
            | CpnError::Parse(_) => 2,
            CpnError::Numeric(_) | CpnError::Io(_) => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_split_usage_from_runtime() {
        assert_eq!(CpnError::InvalidEnsemble("x".into()).exit_code(), 2);
        assert_eq!(CpnError::InvalidStrategy("x".into()).exit_code(), 2);
        assert_eq!(CpnError::InvalidSweep("x".into()).exit_code(), 2);
        assert_eq!(CpnError::Parse("x".into()).exit_code(), 2);
        assert_eq!(CpnError::Numeric("x".into()).exit_code(), 3);
        let io = CpnError::from(std::io::Error::new(std::io::ErrorKind::Other, "x"));
        assert_eq!(io.exit_code(), 3);
    }

    #[test]
    fn messages_carry_context() {
        let e = CpnError::InvalidEnsemble("priors sum to 0.9".into());
        assert!(e.to_string().contains("priors sum to 0.9"));
    }
}
