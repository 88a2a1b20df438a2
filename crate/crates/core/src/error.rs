use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("photon cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),

    #[error("state is not normalized: |norm^2 - 1| = {defect:.3e}")]
    NotNormalized { defect: f64 },

    #[error("truncation error: norm deficit {deficit:.3e} exceeds {limit:.1e}")]
    Truncation { deficit: f64, limit: f64 },

    #[error("truncation leakage {leakage:.3e} exceeds {limit:.1e}; raise the photon cutoff")]
    Leakage { leakage: f64, limit: f64 },

    #[error("non-physical density matrix: minimum eigenvalue {min_eigenvalue:.3e}")]
    NonPhysical { min_eigenvalue: f64 },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

impl Error {
    /// Numeric failures (as opposed to bad inputs) are reported with a
    /// distinct exit status by the command-line front end.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotNormalized { .. }
                | Error::Truncation { .. }
                | Error::Leakage { .. }
                | Error::NonPhysical { .. }
        )
    }
}
