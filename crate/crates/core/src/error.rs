use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("name must not be empty")]
    EmptyName,
    #[error("name {0:?} is already taken")]
    DuplicateName(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("latent variable has {actual} dimensions, catalog has {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("the same set of objects is already taught as {0:?}")]
    DuplicateSetup(String),
    #[error("a breakfast needs at least one food item")]
    NoFoodItem,
    #[error("unknown breakfast entry {0}")]
    UnknownEntry(usize),
    #[error("unknown breakfast {0:?}")]
    UnknownBreakfast(String),
    #[error("episodic memory is empty")]
    EmptyMemory,
    #[error("conditional probability needs two different items")]
    SameItem,
    #[error("items {0} and {1} belong to different classes")]
    ClassMismatch(usize, usize),
    #[error("object {0} is not a food")]
    NotAFood(usize),
    #[error("food {0} does not appear in any taught setup")]
    FoodUnseen(usize),
    #[error("rule for food {0} cannot be satisfied inside the catalog")]
    Unsatisfiable(usize),
    #[error("covariance matrix is not positive semi-definite (min eigenvalue {0:e})")]
    FactorizationFailure(f64),
    #[error("no novel breakfast found after {0} attempts")]
    AttemptsExhausted(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported state schema version {0}")]
    UnsupportedVersion(u32),
    #[error("state is locked by another process ({0})")]
    Locked(String),
    #[error("state file: {0}")]
    Io(#[from] std::io::Error),
    #[error("state file: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable identifier, used by the HTTP API and the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyName => "EmptyName",
            Error::DuplicateName(_) => "DuplicateName",
            Error::UnknownObject(_) => "UnknownObject",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DuplicateSetup(_) => "DuplicateSetup",
            Error::NoFoodItem => "NoFoodItem",
            Error::UnknownEntry(_) => "UnknownEntry",
            Error::UnknownBreakfast(_) => "UnknownBreakfast",
            Error::EmptyMemory => "EmptyMemory",
            Error::SameItem => "SameItem",
            Error::ClassMismatch(..) => "ClassMismatch",
            Error::NotAFood(_) => "NotAFood",
            Error::FoodUnseen(_) => "FoodUnseen",
            Error::Unsatisfiable(_) => "Unsatisfiable",
            Error::FactorizationFailure(_) => "FactorizationFailure",
            Error::AttemptsExhausted(_) => "AttemptsExhausted",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::UnsupportedVersion(_) => "UnsupportedVersion",
            Error::Locked(_) => "Locked",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
