use thiserror::Error;

/// Errors raised by the credal-set engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative probability mass {value} at atom {atom}")]
    NegativeMass { atom: String, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid outcome space: {0}")]
    InvalidSpace(String),
    #[error("distributions are defined over different outcome spaces")]
    SpaceMismatch,
    #[error("invalid mixture weights: {0}")]
    WeightInvalid(String),
    #[error("outcome space is not factorized into variables")]
    NotFactorized,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("conditioning event has probability {prob}, too small to condition on")]
    ZeroEvidence { prob: f64 },
    #[error("every member of the set gives the conditioning event zero probability")]
    ZeroEvidenceEverywhere,
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParamRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid interval distribution: {0}")]
    InvalidInterval(String),
    #[error("constraint system is infeasible")]
    Infeasible,
    #[error("credal set is empty")]
    EmptySet,
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("simplex failed to converge: {0}")]
    NumericalFailure(String),
    #[error("denominator event has upper probability {upper} over the set")]
    DenominatorVanishes { upper: f64 },
    #[error("outcome space has {atoms} atoms; subset enumeration is limited to {limit}")]
    SpaceTooLarge { atoms: usize, limit: usize },
    #[error("invalid mass function: {0}")]
    InvalidMass(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("invalid utility matrix: {0}")]
    InvalidUtility(String),
    #[error("group has no members")]
    EmptyGroup,
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("invalid ticket: {0}")]
    InvalidTicket(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
