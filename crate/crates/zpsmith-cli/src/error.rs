use serde_json::json;
use zpsmith::complex::ComplexError;
use zpsmith::join::JoinError;
use zpsmith::linalg::LinalgError;
use zpsmith::smith::SmithError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Invalid complex or an impossible request on a valid one.
    Domain,
    Io,
    Parse,
    MemoryCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn domain(m: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Domain,
            message: m.into(),
        }
    }

    pub fn io(m: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Io,
            message: m.into(),
        }
    }

    pub fn parse(m: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Parse,
            message: m.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Domain => 1,
            ErrorKind::Io | ErrorKind::Parse => 2,
            ErrorKind::MemoryCap => 3,
        }
    }

    /// Single-line JSON for stderr.
    pub fn to_line(&self) -> String {
        let kind = match self.kind {
            ErrorKind::Domain => "domain",
            ErrorKind::Io => "io",
            ErrorKind::Parse => "parse",
            ErrorKind::MemoryCap => "memory-cap",
        };
        json!({ "error": kind, "message": self.message }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        CliError::domain(e.to_string())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::MemoryCap { .. } => CliError {
                kind: ErrorKind::MemoryCap,
                message: e.to_string(),
            },
            other => CliError::domain(other.to_string()),
        }
    }
}

impl From<SmithError> for CliError {
    fn from(e: SmithError) -> Self {
        match e {
            SmithError::Linalg(l) => l.into(),
            other => CliError::domain(other.to_string()),
        }
    }
}

impl From<JoinError> for CliError {
    fn from(e: JoinError) -> Self {
        match e {
            JoinError::Complex(c) => c.into(),
            JoinError::Resolution(s) => s.into(),
        }
    }
}
