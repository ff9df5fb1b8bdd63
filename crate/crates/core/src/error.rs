use thiserror::Error;

/// Every failure the library can report. Each variant carries a stable
/// machine-readable code (see [`Error::code`]) used by the CLI reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("probability out of range or malformed: {0}")]
    InvalidProbability(String),

    #[error("not normalized: {0}")]
    NonNormalized(String),

    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),

    #[error("exact tables must be compared at tolerance 0 (got {0})")]
    ExactTolerance(f64),

    #[error("enumeration cap exceeded: {count} > {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("phenomenon is not in the local polytope")]
    NotMember,

    #[error("model is not locally causal: {0}")]
    NotLocallyCausal(String),

    #[error("two outcomes per side required, got ({alice}, {bob})")]
    OutcomeArity { alice: usize, bob: usize },

    #[error("setting index out of range: {0}")]
    SettingIndex(String),

    #[error("value outside its domain: {0}")]
    Domain(String),

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("invalid measurement direction: {0}")]
    InvalidSetting(String),

    #[error("ensemble does not reproduce the stated mixture: {0}")]
    EnsembleMismatch(String),

    #[error("no sampled instance satisfied the antecedents ({0} trials)")]
    InsufficientSamples(usize),

    #[error("invalid causal model: {0}")]
    InvalidCausalModel(String),

    #[error("missing conditional probability table for `{0}`")]
    MissingCpt(String),

    #[error("unknown event label `{0}`")]
    UnknownLabel(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown format version {0}")]
    UnknownVersion(i64),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier rendered in reports and on stderr.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidScenario(_) => "E_SCENARIO",
            Error::InvalidProbability(_) => "E_PROBABILITY",
            Error::NonNormalized(_) => "E_NON_NORMALIZED",
            Error::ScenarioMismatch(_) => "E_SCENARIO_MISMATCH",
            Error::ExactTolerance(_) => "E_EXACT_TOLERANCE",
            Error::CapExceeded { .. } => "E_CAP_EXCEEDED",
            Error::NotMember => "E_NOT_MEMBER",
            Error::NotLocallyCausal(_) => "E_NOT_LOCALLY_CAUSAL",
            Error::OutcomeArity { .. } => "E_OUTCOME_ARITY",
            Error::SettingIndex(_) => "E_SETTING_INDEX",
            Error::Domain(_) => "E_DOMAIN",
            Error::InvalidState(_) => "E_INVALID_STATE",
            Error::InvalidSetting(_) => "E_INVALID_SETTING",
            Error::EnsembleMismatch(_) => "E_ENSEMBLE_MISMATCH",
            Error::InsufficientSamples(_) => "E_INSUFFICIENT_SAMPLES",
            Error::InvalidCausalModel(_) => "E_CAUSAL_MODEL",
            Error::MissingCpt(_) => "E_MISSING_CPT",
            Error::UnknownLabel(_) => "E_UNKNOWN_LABEL",
            Error::Parse { .. } => "E_PARSE",
            Error::UnknownVersion(_) => "E_UNKNOWN_VERSION",
            Error::Usage(_) => "E_USAGE",
            Error::Io(_) => "E_IO",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
