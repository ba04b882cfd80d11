//! Failure categories and the process exit codes they map to.

use std::fmt;

use qst_core::Error as CoreError;

/// Anything that can stop a command, sorted by exit code: unusable input
/// exits 1, a verification mismatch exits 2, broken numerics exit 3.
#[derive(Debug)]
pub enum Failure {
    /// File system, syntax, schema, or model validation problems.
    Config(String),
    /// The independently recomputed fidelity disagrees with the recorded one.
    Verification(String),
    /// The numerics broke down: eigensolver failure or non-finite values.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Failure::Config(msg.into())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Verification(m) => write!(f, "verification mismatch: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NotHermitian(_) | CoreError::NonFiniteEntry | CoreError::EigenFailure => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<toml::de::Error> for Failure {
    fn from(e: toml::de::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_failure_category() {
        assert_eq!(Failure::config("x").exit_code(), 1);
        assert_eq!(Failure::Verification("x".into()).exit_code(), 2);
        assert_eq!(Failure::Numerical("x".into()).exit_code(), 3);
    }

    #[test]
    fn numerics_errors_map_to_exit_three_and_the_rest_to_one() {
        assert_eq!(Failure::from(CoreError::EigenFailure).exit_code(), 3);
        assert_eq!(Failure::from(CoreError::NotHermitian(1e-3)).exit_code(), 3);
        assert_eq!(Failure::from(CoreError::NonFiniteEntry).exit_code(), 3);
        assert_eq!(Failure::from(CoreError::ChainTooShort(1)).exit_code(), 1);
        assert_eq!(
            Failure::from(CoreError::InvalidConfig("bad".into())).exit_code(),
            1
        );
    }
}
