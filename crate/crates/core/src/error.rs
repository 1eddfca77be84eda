use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count must be even and positive, got {0}")]
    OddQubitCount(usize),
    #[error("expected {expected} amplitudes, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("zero state vector")]
    ZeroVector,
    #[error("norm defect {0:e} exceeds tolerance")]
    NotNormalized(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("generator coefficients are all zero")]
    ZeroGenerator,
    #[error("Pauli class sums to {got}, state has {n} qubits")]
    ClassMismatch { n: usize, got: usize },
    #[error("invalid Renyi index q = {0}")]
    InvalidRenyiIndex(f64),
    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("N = {n} exceeds the limit {limit} for this method")]
    TooLarge { n: usize, limit: usize },
    #[error("mean spin vanishes, squeezing parameter undefined")]
    VanishingMeanSpin,
    #[error("calibration gain is degenerate (|B| = {0:e})")]
    DegenerateGain(f64),
    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("state file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
