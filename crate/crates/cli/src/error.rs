use std::fmt;
use std::path::Path;

/// Failures surfaced to the operator, each with a fixed exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config { file: Option<String>, line: usize, msg: String },
    Io(String),
    Lib(cubelock::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn config(line: usize, msg: impl Into<String>) -> Self {
        CliError::Config { file: None, line, msg: msg.into() }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Config { line, msg, .. } => {
                CliError::Config { file: Some(path.display().to_string()), line, msg }
            }
            other => other,
        }
    }

    /// 0 success, 1 I/O, 2 usage, 3 integrity / wrong key / format,
    /// 4 capacity / parameter.
    pub fn exit_code(&self) -> u8 {
        use cubelock::Error as E;
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) | CliError::Config { .. } => 2,
            CliError::Lib(E::Integrity(_) | E::WrongKey(_) | E::Format { .. }) => 3,
            CliError::Lib(E::Capacity(_) | E::Parameter(_) | E::OutOfDomain(_) | E::AttackFailed(_)) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Config { file: Some(file), line, msg } => write!(f, "config {file}, line {line}: {msg}"),
            CliError::Config { file: None, line, msg } => write!(f, "config line {line}: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
            CliError::Lib(cubelock::Error::WrongKey(msg)) => write!(f, "wrong key: {msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<cubelock::Error> for CliError {
    fn from(e: cubelock::Error) -> Self {
        CliError::Lib(e)
    }
}
