use std::fmt;
use std::path::Path;
use std::process::ExitCode;

/// Failure classes, each with a fixed exit status.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input; exit 1.
    Input(String),
    /// Contradictory or incomplete options; exit 2.
    Config(String),
    /// A library invariant failed; exit 3.
    Internal(String),
    /// Production and oracle tables differ; exit 4.
    Mismatch(String),
}

impl CliError {
    pub fn at_line(path: &Path, line: usize, message: impl fmt::Display) -> Self {
        CliError::Input(format!("{}:{line}: {message}", path.display()))
    }

    pub fn in_file(path: &Path, message: impl fmt::Display) -> Self {
        CliError::Input(format!("{}: {message}", path.display()))
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Input(_) => 1,
            CliError::Config(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Mismatch(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m)
            | CliError::Config(m)
            | CliError::Internal(m)
            | CliError::Mismatch(m) => f.write_str(m),
        }
    }
}
