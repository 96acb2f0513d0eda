use thiserror::Error;

use crate::qubit::QubitId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("layout needs at least 2 logical qubits, got {0}")]
    TooFewLogical(usize),
    #[error("logical index {index} out of range for n = {n}")]
    LogicalIndex { index: usize, n: usize },
    #[error("qubit {0} is not part of the layout")]
    UnknownQubit(QubitId),
    #[error("invalid qubit token `{0}`")]
    BadToken(String),
    #[error("invalid constraint: {0}")]
    BadConstraint(String),
    #[error("invalid gate: {0}")]
    BadGate(String),
    #[error("circuit contains non-unitary gate {0}")]
    NonUnitary(String),
    #[error("{qubit} is not adjacent to {other}")]
    NotAdjacent { qubit: QubitId, other: QubitId },
    #[error("duplicate logical index {0}")]
    DuplicateIndex(usize),
    #[error("simulation needs {needed} qubits, limit is {limit}")]
    TooManyQubits { needed: usize, limit: usize },
    #[error("statevector size mismatch: {0} vs {1} qubits")]
    SizeMismatch(usize, usize),
    #[error("init on {0} which is not in a definite Z state (P(1) = {1:.3e})")]
    InitOnSuperposed(QubitId, f64),
    #[error("parity qubits still carry population {0:.3e}; decode before reading data qubits")]
    ResidualParity(f64),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
