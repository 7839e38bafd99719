use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("rank {0} is not supported: the free group must have at least 2 generators")]
    RankTooSmall(usize),
    #[error("unrecognised letter symbol {0:?}")]
    BadSymbol(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("letter index {index} is out of range for rank {rank}")]
    InvalidLetter { index: usize, rank: usize },
    #[error("integer overflow while multiplying {0} elements")]
    Overflow(&'static str),
    #[error("ball of radius {radius} exceeds the state budget {budget}")]
    BallBudgetExceeded { radius: usize, budget: usize },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("generator image {0} is not invertible in the backend")]
    NotInvertible(usize),
    #[error("group {0:?} has an infinite backend")]
    NotFinite(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("brute force over {words} words exceeds the enumeration budget {budget}")]
    EnumerationBudget { words: String, budget: u64 },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("trivial kernel: every even cogrowth coefficient after the first vanishes")]
    TrivialKernel,
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
