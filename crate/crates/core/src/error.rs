use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("ordering is not in KLT form: {0}")]
    NotKltForm(String),

    #[error("non-generic kinematics: Q_e vanishes on split {0}")]
    NonGeneric(String),

    #[error("could not draw generic kinematics after {0} attempts")]
    RetryExhausted(usize),

    #[error("scattering solver found {found} of {expected} solutions within {starts} starts")]
    SolverFailure {
        found: usize,
        expected: usize,
        starts: usize,
    },

    #[error("near-singular reduced Hessian on solution {0}")]
    SingularHessian(usize),

    #[error("magnitude mismatch at ({row}, {col}): numerical {numerical:e} vs exact {exact:e}")]
    MagnitudeMismatch {
        row: usize,
        col: usize,
        numerical: f64,
        exact: f64,
    },

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange {
            what,
            value,
            min,
            max,
        });
    }
    Ok(())
}
