use thiserror::Error;

/// Errors raised by the library. Every variant has a stable name (see
/// [`Error::name`]) that the command-line front end reports verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis symbol `{0}` declared more than once")]
    DuplicateSymbol(String),

    #[error("basis symbol `{0}` is reserved or malformed")]
    InvalidSymbol(String),

    #[error("approximation `{approx}` for symbol `{symbol}` is not a positive decimal")]
    NonPositiveApprox { symbol: String, approx: String },

    #[error("precision for symbol `{0}` must be a positive number of digits")]
    InvalidPrecision(String),

    #[error("symbol `{0}` is not declared in the basis registry")]
    UnknownSymbol(String),

    #[error("values cannot be ordered at {digits} digits of precision")]
    IndistinguishableAtPrecision { digits: u32 },

    #[error("division by the zero value")]
    DivisionByZero,

    #[error("expected strictly positive input, got {0}")]
    NonPositiveInput(String),

    #[error("empty input where a nonempty set is required")]
    EmptyInput,

    #[error("invalid Seifert invariants: {0}")]
    InvalidSeifert(String),

    #[error("invalid lens space parameters p={p}, q={q}")]
    InvalidLensParameters { p: i64, q: i64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("contact form is not Besse: {0}")]
    NotBesse(String),

    #[error("models live on different manifolds: `{0}` vs `{1}`")]
    ManifoldMismatch(String, String),

    #[error("invalid Besse model: {0}")]
    InvalidModel(String),

    #[error("invalid orbit set: {0}")]
    InvalidOrbitSet(String),
}

impl Error {
    /// Stable identifier used in structured error reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DuplicateSymbol(_) => "DuplicateSymbol",
            Error::InvalidSymbol(_) => "InvalidSymbol",
            Error::NonPositiveApprox { .. } => "NonPositiveApprox",
            Error::InvalidPrecision(_) => "InvalidPrecision",
            Error::UnknownSymbol(_) => "UnknownSymbol",
            Error::IndistinguishableAtPrecision { .. } => "IndistinguishableAtPrecision",
            Error::DivisionByZero => "DivisionByZero",
            Error::NonPositiveInput(_) => "NonPositiveInput",
            Error::EmptyInput => "EmptyInput",
            Error::InvalidSeifert(_) => "InvalidSeifert",
            Error::InvalidLensParameters { .. } => "InvalidLensParameters",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NotBesse(_) => "NotBesse",
            Error::ManifoldMismatch(..) => "ManifoldMismatch",
            Error::InvalidModel(_) => "InvalidModel",
            Error::InvalidOrbitSet(_) => "InvalidOrbitSet",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
