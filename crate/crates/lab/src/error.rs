use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] bisph_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("snapshot: {0}")]
    Snapshot(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    /// 2 for anything the caller can fix by changing inputs, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use bisph_core::Error as E;
        match self {
            LabError::Core(E::CheckFailed(_) | E::Uncertified(_) | E::SupportViolation(_) | E::NonpositiveRatio(_)) => 1,
            _ => 2,
        }
    }
}
