use thiserror::Error;

/// Errors raised by state construction, verification and the linear-algebra kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("subsystem `{0}` has zero dimension")]
    ZeroDimension(String),

    #[error("order is not a permutation of the layout labels")]
    NotPermutation,

    #[error("partial trace must keep at least one subsystem")]
    EmptyKeep,

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("subsystem `{label}` is not a qubit (dim {dim})")]
    NotQubit { label: String, dim: usize },

    #[error("missing unitary for even-parity index {0}")]
    MissingParityKey(String),

    #[error("unitary supplied for odd-parity index {0}")]
    OddParityKey(String),

    #[error("states {0} and {1} do not have orthogonal supports")]
    OverlappingSupports(usize, usize),

    #[error("measurement outcome {0} has zero probability")]
    ZeroProbability(String),

    #[error("invalid bipartite split: {0}")]
    InvalidSplit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed state file: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
