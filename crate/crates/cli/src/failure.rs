use std::fmt;
use std::process::ExitCode;

use qschmidt_core::Error;

/// A failure class with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input (exit 2).
    Parse(String),
    /// Coefficients that do not form a unit vector (exit 3).
    Normalization(String),
    /// Grid, decomposition or report checks (exit 4).
    Numeric(String),
    /// Could not write the output (exit 1).
    Output(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Output(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Normalization(_) => 3,
            Failure::Numeric(_) => 4,
        })
    }

    /// Classifies an error raised while building a state.
    pub fn from_state(e: Error) -> Self {
        match e {
            Error::NotNormalized { .. } | Error::TailUnreachable { .. } | Error::ZeroProjection(_) => {
                Failure::Normalization(e.to_string())
            }
            _ => Failure::Parse(e.to_string()),
        }
    }

    /// Classifies an error raised by the analysis itself.
    pub fn from_numeric(e: Error) -> Self {
        match e {
            Error::NotNormalized { .. } => Failure::Normalization(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }

    pub fn output(e: impl fmt::Display) -> Self {
        Failure::Output(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (class, msg) = match self {
            Failure::Parse(m) => ("parse error", m),
            Failure::Normalization(m) => ("normalization error", m),
            Failure::Numeric(m) => ("numeric error", m),
            Failure::Output(m) => ("output error", m),
        };
        // Keep the diagnostic on one line.
        write!(f, "{class}: {}", msg.replace('\n', " "))
    }
}
