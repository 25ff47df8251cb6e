use alloc::string::String;

/// Errors raised by contract violations in the simulation core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operator sizes differ: {left} vs {right} qubits")]
    SizeMismatch { left: usize, right: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("product is not Hermitian (phase i^{phase})")]
    NonHermitian { phase: u8 },
    #[error("cannot parse Pauli string: {0}")]
    Parse(String),
    #[error("a state needs at least one qubit")]
    EmptySystem,
    #[error("gate targets must be distinct, got {0:?}")]
    CoincidentTargets(alloc::vec::Vec<usize>),
    #[error("cannot measure the identity operator")]
    IdentityMeasurement,
    #[error("invalid lattice size {0}: need a multiple of 3 that is at least 3")]
    LatticeSize(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("readout requested after the {0} round; only valid after a red round")]
    MidCycle(&'static str),
    #[error("red link {0} cannot be missed in this mode")]
    RedLinkMissed(usize),
    #[error("overlapping or invalid regions in partition")]
    InvalidPartition,
    #[error("cycle outcome does not match any of the five channels: {0}")]
    Unclassifiable(String),
    #[error("fit failed: {0}")]
    FitFailed(String),
    #[error("system of {qubits} qubits exceeds the configured limit of {limit}")]
    ResourceLimit { qubits: usize, limit: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
