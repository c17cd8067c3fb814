use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BetheError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("singular scattering phase for k_i = {k_i}, k_j = {k_j}: numerator and denominator both vanish")]
    SingularPair { k_i: f64, k_j: f64 },
    #[error("momenta {0} and {1} coincide; the wavefunction vanishes identically")]
    DegenerateMomenta(usize, usize),
    #[error("solution has not converged (residual {0:e})")]
    NotConverged(f64),
    #[error("M = {0} exceeds the exact-state limit of 10")]
    TooManyDownSpins(usize),
    #[error("the Bethe wavefunction vanishes for these momenta")]
    VanishingState,
    #[error("sector vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("energy has an imaginary part of {0:e}")]
    ComplexEnergy(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("{kind} expects {expected}, got {got}")]
    Arity {
        kind: &'static str,
        expected: &'static str,
        got: String,
    },
    #[error("qubit {0} appears more than once in a gate")]
    RepeatedQubit(usize),
    #[error("non-finite angle")]
    BadAngle,
    #[error("qubit {qubit} outside a layout of {total} qubits")]
    OutOfRange { qubit: usize, total: usize },
    #[error("unitary_of supports at most {max} qubits, circuit has {got}")]
    TooLarge { max: usize, got: usize },
    #[error("MCX with {controls} controls needs {needed} work qubits, {available} available")]
    NotEnoughWork {
        controls: usize,
        needed: usize,
        available: usize,
    },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error(transparent)]
    Bethe(#[from] BetheError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("amplification needs at least one round")]
    NoRounds,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(
        "{needed} qubits exceed the simulator cap of {cap} (L = {l}, M = {m}); raise the cap explicitly to go further"
    )]
    CapExceeded {
        needed: usize,
        cap: usize,
        l: usize,
        m: usize,
    },
    #[error("initial state has {got} qubits, circuit needs {expected}")]
    QubitMismatch { expected: usize, got: usize },
    #[error("amplitude vector of length {0} is not a power of two")]
    BadLength(usize),
    #[error("norm drifted to {norm} after gate {gate}")]
    NormDrift { gate: usize, norm: f64 },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Bethe(#[from] BetheError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResourceError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("M = {0} exceeds the factorial guard of 20")]
    FactorialGuard(usize),
    #[error("integer overflow while counting for L = {l}, M = {m}")]
    Overflow { l: usize, m: usize },
    #[error("success probability must lie in (0, 1], got {0}")]
    BadProbability(f64),
    #[error("invalid size: {0}")]
    InvalidSize(String),
}
