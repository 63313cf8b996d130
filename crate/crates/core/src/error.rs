use thiserror::Error;

/// Every failure mode of the library.
///
/// Numeric payloads are widened to `f64` so the error type does not depend on
/// the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("trace is not one (got {trace})")]
    TraceNotOne { trace: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("eigenvalues cannot be grouped with tolerance {tol:.3e}")]
    AmbiguousGrouping { tol: f64 },
    #[error("bad profile: {0}")]
    BadProfile(String),
    #[error("bad basis: {0}")]
    BadBasis(String),
    #[error("invalid observable: {0}")]
    InvalidObservable(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("outcome {outcome} has zero probability")]
    ZeroProbabilityOutcome { outcome: usize },
    #[error("vector {index} of block {block} lies outside its eigenspace (residual {residual:.3e})")]
    VectorOutsideEigenspace {
        block: usize,
        index: usize,
        residual: f64,
    },
    #[error("vectors of block {block} are not orthonormal")]
    NonOrthonormal { block: usize },
    #[error("fine-graining does not refine the observable")]
    IncompatibleFineGraining,
    #[error("channel is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },
    #[error("Kraus operators do not form a quantum operation (excess {excess:.3e})")]
    NotAnOperation { excess: f64 },
    #[error("channel is not unital (deviation {deviation:.3e})")]
    NotUnital { deviation: f64 },
    #[error("channel is not genuinely incoherent in the given basis")]
    NotGio,
    #[error("Kraus operator has more than one nonzero entry in column {column}")]
    NotIoForm { column: usize },
    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("diagonal entry {index} is not one (got {value})")]
    DiagonalNotOne { index: usize, value: f64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("map is not an isometry (deviation {deviation:.3e})")]
    NotIsometry { deviation: f64 },
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("invalid dilation model: {0}")]
    InvalidModel(String),
    #[error("no dilation builder for channel class {0}")]
    UnsupportedClass(String),
}

pub type Result<T> = std::result::Result<T, Error>;
