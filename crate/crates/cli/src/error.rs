use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("exact backend cannot cover the grid: {0}")]
    Oracle(String),
}

impl CliError {
    /// 1 for usage and output problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Output { .. } => 1,
            CliError::Numerical(_) | CliError::Oracle(_) => 2,
        }
    }
}
