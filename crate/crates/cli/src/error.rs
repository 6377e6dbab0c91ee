use std::fmt;

/// Failure of a CLI command, split by the exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(#[from] teleflow::Error),
}

impl CliError {
    pub fn arg(msg: impl fmt::Display) -> Self {
        CliError::Argument(msg.to_string())
    }

    pub fn io(context: impl fmt::Display, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.to_string(),
            source,
        }
    }

    /// 2 for anything the caller got wrong (flags, unreadable files), 3 when
    /// the simulation itself refuses a state or map.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Argument(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
