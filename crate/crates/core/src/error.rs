use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero seed")]
    ZeroSeed,
    #[error("truncation overflow: raise n (need order {need}, ring has {have})")]
    TruncationOverflow { need: usize, have: usize },
    #[error("axiom failure: {0}")]
    AxiomFailure(String),
    #[error("structure constants violated: {0}")]
    StructureViolation(String),
    #[error("not isotypic: {0}")]
    NotIsotypic(String),
    #[error("not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable short code for reporting.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "E_FIELD",
            Error::Parse(_) => "E_PARSE",
            Error::ZeroSeed => "E_SEED",
            Error::TruncationOverflow { .. } => "E_TRUNCATION",
            Error::AxiomFailure(_) => "E_AXIOM",
            Error::StructureViolation(_) => "E_STRUCTURE",
            Error::NotIsotypic(_) => "E_ISOTYPIC",
            Error::NotMultiplicative(_) => "E_MULTIPLICATIVE",
            Error::NotClosed(_) => "E_CLOSURE",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::Certification(_) => "E_CERTIFICATION",
            Error::Inconclusive(_) => "E_INCONCLUSIVE",
            Error::UnknownCheck(_) => "E_UNKNOWN_CHECK",
            Error::Json(_) => "E_JSON",
        }
    }

    /// Whether the error comes from bad input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidField(_) | Error::Parse(_) | Error::ZeroSeed | Error::Precondition(_) | Error::UnknownCheck(_)
        )
    }
}
