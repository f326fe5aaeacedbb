//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register must have between 1 and {max} qubits, got {got}")]
    BadQubitCount { got: usize, max: usize },

    #[error("basis index {index} out of range for {qubits} qubits")]
    BadBasisIndex { index: usize, qubits: usize },

    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("qubit indices must be distinct, {index} repeats")]
    DuplicateQubit { index: usize },

    #[error("no qubits selected")]
    EmptySelection,

    #[error("amplitude vector length {len} is not a power of two")]
    BadLength { len: usize },

    #[error("state norm {norm} too far from 1")]
    NotNormalized { norm: f64 },

    #[error("states have different qubit counts: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("matrix is not unitary, max deviation {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("{0}")]
    BadFunction(String),

    #[error("spans overlap or do not fit the register: {0}")]
    BadSpan(String),

    #[error("{0}")]
    BadParameter(String),

    #[error("dump line {line}: {reason}")]
    BadDump { line: usize, reason: String },
}
