use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("index {index} out of range for a grid of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("grid too small: need at least {need} points, got {got}")]
    GridTooSmall { need: usize, got: usize },

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("vanishing function: |f| = {modulus:e} at x = {x}")]
    VanishingFunction { x: f64, modulus: f64 },

    #[error("|z| = {0} is outside the supported Bessel range |z| <= 12")]
    BesselRange(f64),

    #[error("unsupported Bessel order {0} (only 0 and 1)")]
    BesselOrder(u32),

    #[error("insufficient basis depth: need K_max >= {need}, have {have}")]
    InsufficientDepth { need: usize, have: usize },

    #[error("basis must be centered at the origin: {0}")]
    NotCentered(String),

    #[error("normalization violated: {0}")]
    Normalization(String),

    #[error("kernel kind mismatch: expected {expected}, got {got}")]
    KernelKind { expected: &'static str, got: &'static str },

    #[error("iteration did not converge in {iterations} steps (last increment {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("least-squares system is rank deficient (condition estimate {condition:e})")]
    RankDeficient { condition: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
