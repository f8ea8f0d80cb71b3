use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("rational arithmetic overflow")]
    Overflow,

    #[error("division by zero in symbolic expression")]
    DivisionByZero,

    #[error("point violates the domain of coordinate `{0}`")]
    DomainViolation(String),

    #[error("point has dimension {got}, chart `{chart}` has dimension {expected}")]
    DimensionMismatch {
        chart: String,
        expected: usize,
        got: usize,
    },

    #[error("evaluation singularity in `{0}`")]
    Singular(String),

    #[error("no admissible sample points found on chart `{0}`")]
    NoAdmissibleSamples(String),

    #[error("chart mismatch: `{0}` vs `{1}`")]
    ChartMismatch(String, String),

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("non-invertible Jacobian at the identity")]
    SingularJacobian,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("field does not vanish at the identity: {0}")]
    NotVanishingAtIdentity(String),

    #[error("point is not on the level set (|H - level| = {0:e})")]
    OffLevelSet(f64),

    #[error("membership undecided: singular representative `{0}`")]
    MembershipUndecided(String),

    #[error("expression is not an exact rational constant: `{0}`")]
    NotConstant(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("manifest error: {0}")]
    Manifest(String),
}
