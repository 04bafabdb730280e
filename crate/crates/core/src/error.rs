use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("composition needs at least 2 parts, got {0}")]
    TooShort(usize),

    #[error("entry {index} is {value}; zeros and negatives must be replaced before closure")]
    ZeroEntry { index: usize, value: f64 },

    #[error("entry {0} is not finite")]
    NonFinite(usize),

    #[error("composition does not sum to 1 (sum = {0})")]
    NotOnSimplex(f64),

    #[error("exponent out of representable range at component {0}")]
    Overflow(usize),

    #[error("index {index} out of range for {p} parts")]
    IndexOutOfRange { index: usize, p: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("variation matrix needs at least 2 variables, got {0}")]
    SubsetTooSmall(usize),

    #[error("row {row} has {got} parts, expected {expected}")]
    RaggedRows { row: usize, expected: usize, got: usize },

    #[error("feature names: {0}")]
    FeatureNames(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("response has length {got}, expected {expected}")]
    ResponseLength { expected: usize, got: usize },

    #[error("binary response at position {index} is {value}, expected 0 or 1")]
    NotBinary { index: usize, value: f64 },

    #[error("response contains a single class")]
    OneClassOnly,

    #[error("screened size m = {0} is below 2")]
    MTooSmall(usize),

    #[error("screened size m = {m} exceeds p = {p}")]
    MTooLarge { m: usize, p: usize },

    #[error("balance is constant across samples")]
    ConstantBalance,

    #[error("expected {expected} parts, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("number of folds must be at least 2, got {0}")]
    KTooSmall(usize),

    #[error("{k} folds requested for {n} samples")]
    KTooLarge { k: usize, n: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("input is empty")]
    Empty,

    #[error("exhaustive search limited to p <= {max}, got p = {p}")]
    PTooLarge { p: usize, max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
