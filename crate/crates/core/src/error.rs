use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("block length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("sorted channel list is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("information length {k} exceeds block length {n}")]
    InfoLengthTooLarge { k: usize, n: usize },
    #[error("bits per symbol must be even and positive, got {0}")]
    OddBitsPerSymbol(usize),
    #[error("list size must be at least 1")]
    ZeroListSize,
    #[error("information length {k} is shorter than the {crc}-bit CRC")]
    CrcLongerThanMessage { k: usize, crc: usize },
    #[error("{name} = {value} is outside its domain ({domain})")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("codeword on level {level} exceeded {cap} transmissions")]
    RetransmissionCap { level: usize, cap: usize },
    #[error("pending-frame queue on level {level} exceeded {cap} frames")]
    QueueOverflow { level: usize, cap: usize },
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
