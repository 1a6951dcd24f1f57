use std::path::PathBuf;

pub type Result<T, E = SbsError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum SbsError {
    /// Bad configuration value or flag.
    #[error("config error: {0}")]
    Config(String),

    /// A corpus or auxiliary input file could not be read or parsed.
    #[error("{path}:{line}: {message}")]
    Ingest {
        path: PathBuf,
        /// 1-based; 0 when the error concerns the whole file.
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Core(#[from] sbs_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl SbsError {
    pub fn ingest(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        SbsError::Ingest {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SbsError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 for configuration problems, 3 for unreadable
    /// inputs, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            SbsError::Config(_) => 2,
            SbsError::Ingest { .. } => 3,
            SbsError::Io { .. } => 1,
            SbsError::Core(_) => 1,
        }
    }
}
