use thiserror::Error;

/// Every failure the library can report.
///
/// [`Error::code`] gives a stable, module-qualified identifier that the
/// command-line front end puts into reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("jet vanishes through its truncation order {order} but is not known to be exact")]
    TruncationAmbiguous { order: usize },

    #[error("truncation order {available} is insufficient, need {needed}")]
    TruncationInsufficient { module: &'static str, needed: usize, available: usize },

    #[error("generators are linearly dependent")]
    DependentGenerators,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("Gram matrix of the pairing is singular")]
    DegenerateGram,

    #[error("least space is not D-invariant: {0}")]
    NotDInvariant(String),

    #[error("algebra axiom violated: {0}")]
    AxiomViolation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{count} candidates exceed the enumeration cap {cap}")]
    CombinatorialBlowup { count: usize, cap: usize },

    #[error("built-in `{builtin}` applied to an argument with nonzero constant term {value}")]
    NonRationalExpansion { builtin: String, value: String },

    #[error("Jacobian has rank {rank} < {n} at the base point")]
    NotAnImmersion { rank: usize, n: usize },

    #[error("results changed when the truncation order was doubled from {k}: {detail}")]
    StabilityCheckFailed { k: usize, detail: String },

    #[error("inconsistent classification: {0}")]
    InconsistentClassification(String),

    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },

    #[error("cannot parse scalar `{0}`")]
    ScalarParse(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Stable module-qualified error code, e.g. `least.DependentGenerators`.
    pub fn code(&self) -> String {
        let s = match self {
            Error::TruncationAmbiguous { .. } => "core.TruncationAmbiguous",
            Error::TruncationInsufficient { module, .. } => {
                return format!("{module}.TruncationInsufficient")
            }
            Error::DependentGenerators => "least.DependentGenerators",
            Error::SingularMatrix => "least.SingularMatrix",
            Error::DegenerateGram => "pairing.DegenerateGram",
            Error::NotDInvariant(_) => "artin.NotDInvariant",
            Error::AxiomViolation(_) => "artin.AxiomViolation",
            Error::DimensionMismatch(_) => "artin.DimensionMismatch",
            Error::CombinatorialBlowup { .. } => "wronskian.CombinatorialBlowup",
            Error::NonRationalExpansion { .. } => "frontend.NonRationalExpansion",
            Error::NotAnImmersion { .. } => "frontend.NotAnImmersion",
            Error::StabilityCheckFailed { .. } => "pushforward.StabilityCheckFailed",
            Error::InconsistentClassification(_) => "invariants.InconsistentClassification",
            Error::Syntax { .. } => "frontend.SyntaxError",
            Error::ScalarParse(_) => "core.ScalarParse",
            Error::Config(_) => "frontend.ConfigError",
            Error::Io(_) => "frontend.IoError",
        };
        s.to_string()
    }

    /// Usage errors (bad input files or syntax) as opposed to mathematical failures.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::ScalarParse(_) | Error::Config(_) | Error::Io(_)
        )
    }

    pub fn is_truncation(&self) -> bool {
        matches!(self, Error::TruncationInsufficient { .. } | Error::TruncationAmbiguous { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
