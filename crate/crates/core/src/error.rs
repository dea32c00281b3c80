use thiserror::Error;

/// Errors raised across the simulator and estimator.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Fock-space expansion would exceed the configured photon cap.
    #[error("photon total {total} exceeds capacity {cap}")]
    Capacity { total: usize, cap: usize },

    /// A gain record required by the estimator is absent from the table.
    #[error("missing gain record: {0}")]
    MissingRecord(String),

    #[error("config line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid value for `{key}`: {msg}")]
    Value { key: String, msg: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {p} is not a probability")))
    }
}
