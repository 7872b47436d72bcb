use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("amplitude vector of length {len} does not describe {n_qubits} qubits")]
    AmplitudeLength { n_qubits: usize, len: usize },

    #[error("state norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("state is the zero vector")]
    ZeroVector,

    #[error("{n_qubits} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { n_qubits: usize, max: usize },

    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("inconsistent qubit counts: {first} and {second}")]
    InconsistentQubits { first: usize, second: usize },

    #[error("unknown state '{0}'")]
    UnknownState(String),

    #[error("invalid qubit labels: {0}")]
    InvalidLabels(String),

    #[error("density matrix trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("density matrix has eigenvalue {value:e} below zero")]
    NegativeEigenvalue { value: f64 },

    #[error("invalid teleportation task: {0}")]
    InvalidTask(String),

    #[error("task is infeasible: Schmidt spectrum across the cut is not {m} equal coefficients")]
    Infeasible { m: usize },

    #[error("message {message} out of range (only {available} orthogonal encodings)")]
    MessageOutOfRange { message: usize, available: usize },

    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
