use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unknown variable {0}")]
    UnknownVariable(String),

    #[error("polynomial already depends on s")]
    ContainsS,

    #[error("polynomial still depends on s")]
    ResidualS,

    #[error("polynomial is not a function of |x|: {0}")]
    NotRadial(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("odd power r^{0} rejected: V(|x|) must be smooth")]
    OddPower(u32),

    #[error("leading coefficient must be positive, got {0}")]
    NonPositiveLeading(String),

    #[error("requested parametrix depth {requested} exceeds the cap {cap}")]
    DepthExceeded { requested: usize, cap: usize },

    #[error("parametrix depth {available} is insufficient, need A_{needed}")]
    InsufficientDepth { needed: usize, available: usize },

    #[error("A_{k}(r) has degree {degree} above the bound gamma_{k} = {gamma}")]
    DegreeExceedsGamma { k: usize, degree: u32, gamma: u32 },

    #[error("odd power r^{power} in A_{k}(r)")]
    OddDiagonalPower { k: usize, power: u32 },

    #[error("Gamma argument {0} is not positive")]
    NonPositiveGamma(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("cannot multiply two coefficients that both carry Gamma factors")]
    GammaProduct,

    #[error("t must be positive, got {0}")]
    NonPositiveT(f64),

    #[error("invalid spectral configuration: {0}")]
    InvalidConfig(String),

    #[error("domain radius {radius} too small: V(R) = {v_edge} below ground state {ground}")]
    DomainTooSmall { radius: f64, v_edge: f64, ground: f64 },

    #[error("spectral oracle only supports dimensions 1 and 3, got {0}")]
    UnsupportedDimension(usize),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
