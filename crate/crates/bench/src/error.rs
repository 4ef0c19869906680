use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: tssr_core::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl BenchError {
    pub fn core(context: impl Into<String>, source: tssr_core::Error) -> Self {
        BenchError::Core {
            context: context.into(),
            source,
        }
    }

    /// 1 for configuration problems, 2 for failures while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            BenchError::Config(_) => 1,
            BenchError::Core {
                source: tssr_core::Error::InvalidConfig(_),
                ..
            } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
