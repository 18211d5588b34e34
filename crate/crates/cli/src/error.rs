use std::fmt;

use unruh_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(CoreError),
    Io(String),
}

impl CliError {
    /// 0 success, 2 usage, 3 numeric failure, 4 I/O, 5 no sudden change.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 4,
            CliError::Core(e) => match e {
                CoreError::InvalidArgument(_) | CoreError::Domain(_) => 2,
                CoreError::NoSuddenChange { .. } | CoreError::NoKinkDetected { .. } => 5,
                _ => 3,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
