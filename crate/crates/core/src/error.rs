use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("form {0:?} is reducible over Q")]
    Reducible([i64; 4]),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("relation collection did not saturate for disc {disc}: {reason}")]
    Certification { disc: i64, reason: String },
    #[error("2-saturation failed for disc {disc}: {reason}")]
    Saturation { disc: i64, reason: String },
    #[error("oracle refuses |disc| = {disc} above threshold {threshold}")]
    ResourceLimit { disc: i64, threshold: i64 },
    #[error("tame mass oracle needs p > 3, got {0}")]
    WildPrime(u64),
    #[error("nu value {s} outside [{lo}, {hi}]")]
    NuRange { s: i64, lo: i64, hi: i64 },
    #[error("corrupt cache record at line {line}: {reason}")]
    CorruptRecord { line: usize, reason: String },
    #[error("conflicting cache records for form {0}")]
    ConflictingRecord(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
