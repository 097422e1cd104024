use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude count {len} does not match product of dims {expected}")]
    LengthMismatch { len: usize, expected: usize },

    #[error("subsystem dimension must be at least 2, got {0}")]
    BadDimension(usize),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("invalid party layout: {0}")]
    InvalidLayout(String),

    #[error("unknown party `{0}`")]
    UnknownParty(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("ensemble members are not mutually orthogonal")]
    NonOrthogonal,

    #[error("bound premise violated: {0}")]
    PremiseViolated(String),

    #[error("instrument is not complete (residual {0})")]
    IncompleteInstrument(f64),

    #[error("invalid protocol tree: {0}")]
    InvalidTree(String),

    #[error("no full-rank member in matrix representation")]
    NoFullRankMember,

    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;
