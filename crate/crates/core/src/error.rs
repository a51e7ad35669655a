use thiserror::Error;

/// Errors produced by matrix construction, functional calculus and the checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    Shape {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (max residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid interval ({lo}, {hi})")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("spectrum outside domain {domain} of {name}: offending eigenvalues {offending:?}")]
    DomainViolation {
        name: String,
        domain: String,
        offending: Vec<f64>,
    },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("invalid parameters for `{name}`: {reason}")]
    InvalidParameters { name: String, reason: String },

    #[error("invalid projection family: {0}")]
    InvalidProjectionFamily(String),

    #[error("C*C + D*D deviates from I by {residual:e}")]
    InvalidContractionPair { residual: f64 },

    #[error("alpha is not strictly below A (margin {margin:e})")]
    NotStrictlyBelow { margin: f64 },

    #[error("A is not below Y in the Loewner order (margin {margin:e})")]
    NotOrdered { margin: f64 },

    #[error("Y - alpha is numerically singular (min eigenvalue {min_eig:e}, floor {floor:e})")]
    Singular { min_eig: f64, floor: f64 },

    #[error("Phi(t I) is not a multiple of the identity (residual {residual:e})")]
    NotScalar { residual: f64 },

    #[error("degenerate clustering: a cluster spans {span:e} (limit {limit:e})")]
    DegenerateClustering { span: f64, limit: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
