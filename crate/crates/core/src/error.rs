use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("match fraction {0} outside (0, 1]; at least one marked item must exist")]
    Fraction(f64),
    #[error("match angle {0} outside (0, pi/2]")]
    Theta(f64),
    #[error("phase {0} outside [0, 2pi]")]
    Phase(f64),
    #[error("qubit count {0} outside 1..=24")]
    Capacity(u32),
    #[error("state has {got} amplitudes, instance has {expected} items")]
    LengthMismatch { expected: usize, got: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("marked index {index} outside [0, {size})")]
    MarkedIndex { index: usize, size: usize },
    #[error("marked set is empty")]
    NoMarked,
    #[error("growth factor {0} outside (1, 4/3)")]
    Lambda(f64),
    #[error("Grover cost model holds only for M <= 3N/4 (fraction {0})")]
    GroverDomain(f64),
    #[error("sin(delta) vanishes; the critical range is unbounded")]
    DegenerateDelta,
    #[error("invalid marked spec {0:?}; expected count:M or set:i1,i2,...")]
    MarkedSpec(String),
    #[error("invalid envelope spec: {0}")]
    Envelope(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
