use std::fmt;

use fracwave::Error;

/// Why a run stopped. Maps onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Clap(clap::Error),
    Usage(String),
    Numerical { op: String, message: String },
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure::Usage(message.into())
    }

    /// Classifies a library error raised while running `op`.
    pub fn from_core(op: &str, err: Error) -> Self {
        if err.is_numerical() {
            Failure::Numerical {
                op: op.to_string(),
                message: err.to_string(),
            }
        } else {
            Failure::Usage(format!("{op}: {err}"))
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Clap(e) if !e.use_stderr() => 0,
            Failure::Clap(_) | Failure::Usage(_) => 2,
            Failure::Numerical { .. } => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Clap(e) => {
                let text = e.to_string();
                let line = text.lines().next().unwrap_or("");
                write!(f, "{}", line.strip_prefix("error: ").unwrap_or(line))
            }
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Numerical { op, message } => write!(f, "{op} failed: {message}"),
        }
    }
}

/// Tags library errors with the operation that raised them.
pub trait Context<T> {
    fn during(self, op: &str) -> Result<T, Failure>;
}

impl<T> Context<T> for fracwave::Result<T> {
    fn during(self, op: &str) -> Result<T, Failure> {
        self.map_err(|e| Failure::from_core(op, e))
    }
}
