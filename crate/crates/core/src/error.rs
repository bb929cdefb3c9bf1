use thiserror::Error;

/// Everything that can go wrong while building fields, rings and reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("division by zero in the base field")]
    DivisionByZero,

    #[error("minimal polynomial for `{name}` is invalid: {reason}")]
    BadMinimalPolynomial { name: String, reason: String },

    #[error("generator name `{0}` is already in use or reserved")]
    DuplicateGenerator(String),

    #[error("multiplication table is not {0} on basis elements {1:?}")]
    BadStructureConstants(&'static str, Vec<usize>),

    #[error("cannot invert zero")]
    InverseOfZero,

    #[error("element {element} has a singular multiplication matrix; the tower is not a field (is a minimal polynomial reducible?)")]
    NotAField { element: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("series belong to different fields")]
    FieldMismatch,

    #[error("shift by {shift} would drop the nonzero coefficient at degree {degree}")]
    ShiftDropsCoefficient { shift: isize, degree: usize },

    #[error("series bound {found} is below the required bound {required}")]
    InsufficientBound { required: usize, found: usize },

    #[error("degree-0 space must be the line spanned by 1 (the ring must be local with residue field k)")]
    NotLocal,

    #[error("products of degree {0} and degree {1} do not land in degree {2}")]
    NotMultiplicativelyClosed(usize, usize, usize),

    #[error("space at degree {degree} is out of range for conductor exponent {conductor}")]
    DegreeOutOfRange { degree: usize, conductor: usize },

    #[error("ring image is invalid: {0}")]
    InvalidRing(String),

    #[error("generator {index} has valuation {valuation:?}; generators must have positive valuation")]
    BadGenerator { index: usize, valuation: Option<usize> },

    #[error("no conductor found below degree cap {cap}; leading-space dimensions so far: {partial:?}")]
    ConductorNotFound { cap: usize, partial: Vec<usize> },

    #[error("ideal index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("fractional ideal is not contained in the ring")]
    NotContainedInRing,

    #[error("first module is not contained in the second")]
    NotContained,

    #[error("invalid numerical semigroup: {0}")]
    InvalidSemigroup(String),

    #[error("internal inconsistency in `{check}`: {detail}")]
    Inconsistency { check: &'static str, detail: String },

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid document: {0}")]
    Document(String),

    #[error("invalid fuzz parameters: {0}")]
    FuzzParams(String),

    #[error("{stage}: {cause}")]
    Stage {
        stage: &'static str,
        cause: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |e| Error::Stage {
            stage,
            cause: Box::new(e),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
