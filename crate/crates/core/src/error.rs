use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m^dagger| = {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix is not unitary: max |U^dagger U - 1| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("non-finite entry in {what}")]
    NonFinite { what: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found} ({what})")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integration under-resolved: {given} steps per carrier period, at least {required} required")]
    UnderResolved { given: usize, required: usize },

    #[error("fringe grid too coarse: {per_period:.1} points per fringe period, need {required} (about {required_points} points over this span)")]
    GridTooCoarse {
        per_period: f64,
        required: usize,
        required_points: usize,
    },

    #[error("fringe grid spans {span:e} rad/s, less than one fringe period {period:e} rad/s")]
    GridTooNarrow { span: f64, period: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
