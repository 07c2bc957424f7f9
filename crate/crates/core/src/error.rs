use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant onto an exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("identity Pauli product is not a valid generator")]
    IdentityGenerator,

    #[error("zero x-string has no odd-y partition members")]
    ZeroXString,

    #[error("invalid Pauli string {text:?}: {reason}")]
    ParsePauli { text: String, reason: String },

    #[error("invalid reference bit string {0:?}")]
    ParseReference(String),

    #[error("term {label} has an imaginary coefficient in Z*X form; real-valued Hamiltonian required")]
    ComplexCoefficient { label: String },

    #[error("no nonzero commutators found for x-string {x_string}")]
    EmptyCommutatorSet { x_string: String },

    #[error("no pair of Hamiltonian x-strings factorizes {x_string}")]
    NoValidPairs { x_string: String },

    #[error("gradient table is empty")]
    EmptyPartitionTable,

    #[error("flat energy curve for generator {generator} (B = C = 0) despite nonzero gradient")]
    FlatEnergyCurve { generator: String },

    #[error("{what}: {n_qubits} qubits exceeds the limit of {limit}")]
    SizeGuard {
        what: &'static str,
        n_qubits: usize,
        limit: usize,
    },

    #[error("unknown {kind} {name:?} (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
