use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AltError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("non-normalizable member: {0}")]
    NonNormalizable(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("recurrence corrupted at k = {k}: constant term {detail} before division by x")]
    RecurrenceCorruption { k: usize, detail: String },

    #[error("eigenvalue solver failed: {0}")]
    EigenFailure(String),

    #[error("root finding failed: {0}")]
    RootFailure(String),

    #[error("no feasible candidate: {0}")]
    Infeasible(String),

    #[error("singular collocation matrix (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },
}

impl AltError {
    /// Stable machine-readable tag for each variant.
    pub fn kind(&self) -> &'static str {
        match self {
            AltError::InvalidParameters(_) => "invalid_parameters",
            AltError::NonNormalizable(_) => "non_normalizable",
            AltError::Divergent(_) => "divergent",
            AltError::RecurrenceCorruption { .. } => "recurrence_corruption",
            AltError::EigenFailure(_) => "eigen_failure",
            AltError::RootFailure(_) => "root_failure",
            AltError::Infeasible(_) => "infeasible",
            AltError::SingularSystem { .. } => "singular_system",
        }
    }
}

pub type Result<T> = std::result::Result<T, AltError>;
