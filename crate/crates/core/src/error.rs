use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {0} out of range (1..={max})", max = crate::state::MAX_QUBITS)]
    QubitCount(usize),

    #[error("bitstring length {got} does not match {expected} qubits")]
    BitstringLength { expected: usize, got: usize },

    #[error("invalid character {0:?} in bitstring")]
    BitstringChar(char),

    #[error("amplitude vector length {0} is not a power of two")]
    AmplitudeLength(usize),

    #[error("wire {wire} out of range for {num_qubits} qubits")]
    WireOutOfRange { wire: usize, num_qubits: usize },

    #[error("wire {0} used more than once")]
    WireCollision(usize),

    #[error("gate matrix is not unitary (deviation {0:e})")]
    NonUnitary(f64),

    #[error("state norm drifted by {0:e}")]
    NormDrift(f64),

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("layer {index} out of range (circuit depth {depth})")]
    LayerOutOfRange { index: usize, depth: usize },

    #[error("annotation cannot be replayed: {0}")]
    Unsupported(String),

    #[error("operation needs at least {needed} qubits, state has {got}")]
    TooFewQubits { needed: usize, got: usize },

    #[error("layout column bits {column_bits} exceed qubit count {num_qubits}")]
    Layout { column_bits: usize, num_qubits: usize },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error(transparent)]
    Parse(#[from] crate::format::ParseError),
}
