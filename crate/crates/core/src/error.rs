use thiserror::Error;

/// Everything that can go wrong while building or evaluating an object.
///
/// Unavailability of a value (missing unit-norm data and friends) is an
/// error here too; callers that want partial results keep the `Result`
/// around instead of propagating it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("Hasse bound violated: a = {trace}, q = {q}")]
    HasseBoundViolation { trace: i64, q: u64 },
    #[error("point is not on the curve")]
    OffCurvePoint,
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("invalid Hasse domain: {0}")]
    InvalidDomain(String),
    #[error("fiber sum mismatch over place #{place}: sum of residue degrees {sum} != {degree}")]
    FiberSumMismatch { place: usize, sum: usize, degree: usize },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("unsupported cover: {0}")]
    UnsupportedCover(String),
    #[error("fundamental group is not admissible: {0}")]
    NotAdmissible(String),
    #[error("inconsistent twist: {0}")]
    InconsistentTwist(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("no splitting point: the chosen place is not declared a splitting point")]
    NoSplittingPoint,
    #[error("unit norm data unavailable: {0}")]
    UnitsUnavailable(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("line {line}: {message}")]
    Request { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// True for the errors that signal a value which cannot be determined
    /// from the data at hand, as opposed to malformed input.
    pub fn is_unavailability(&self) -> bool {
        matches!(
            self,
            Error::NotAdmissible(_)
                | Error::UnitsUnavailable(_)
                | Error::NoSplittingPoint
                | Error::UnsupportedCover(_)
                | Error::NotApplicable(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
