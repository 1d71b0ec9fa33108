use std::fmt;

/// Failure classes, one per nonzero exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad or unreadable configuration, unusable data parameters, IO. Exit 1.
    Config(String),
    /// The datum does not meet the selected theorem's hypotheses. Exit 2.
    Refused(String),
    /// The solver stopped with an error. Exit 3.
    Aborted(String),
    /// verify-theorem ran but the bound was not met. Exit 4.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Refused(_) => 2,
            CliError::Aborted(_) => 3,
            CliError::Failed(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Refused(m) => write!(f, "hypotheses not satisfied: {m}"),
            CliError::Aborted(m) => write!(f, "simulation aborted: {m}"),
            CliError::Failed(m) => write!(f, "verdict: fail: {m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("json: {e}"))
    }
}

/// Library errors outside the solver are data or parameter problems.
impl From<blowup_lab::Error> for CliError {
    fn from(e: blowup_lab::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
