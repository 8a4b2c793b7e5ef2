use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is numerically singular (|det| = {det:e}, threshold {threshold:e})")]
    Singular { det: f64, threshold: f64 },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is rank deficient (smallest eigenvalue {min_eigenvalue:e})")]
    RankDeficient { min_eigenvalue: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("polynomial is not real-rooted (max imaginary part {max_imag:e})")]
    NotRealRooted { max_imag: f64 },
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("constant polynomial has no roots")]
    NoRoots,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("capacity exceeded: {what} needs {needed}, cap is {cap}")]
    Capacity { what: &'static str, needed: u64, cap: u64 },
    #[error("descent aborted at level {level}: best child root {best_child} exceeds parent root {parent_root}")]
    DescentAbort {
        level: usize,
        prefix: Vec<usize>,
        parent_root: f64,
        best_child: f64,
    },
    #[error("barrier pole: polynomial value {value:e} is numerically zero")]
    Pole { value: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported input: {0}")]
    Capability(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = core::result::Result<T, Error>;
