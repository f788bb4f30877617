use serde::Serialize;

/// Exit status for a run that failed verification or did not converge.
pub const EXIT_FAILED_CHECK: u8 = 2;
/// Exit status for any other error.
pub const EXIT_ERROR: u8 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        CliError {
            code: code.into(),
            message: message.into(),
        }
    }

    /// `NoConvergence` counts as a failed check, everything else as an error.
    pub fn exit_code(&self) -> u8 {
        if self.code == "NoConvergence" {
            EXIT_FAILED_CHECK
        } else {
            EXIT_ERROR
        }
    }

    /// `{"error": {"code": ..., "message": ...}}`
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<geninv::Error> for CliError {
    fn from(e: geninv::Error) -> Self {
        CliError::new(e.code(), e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
