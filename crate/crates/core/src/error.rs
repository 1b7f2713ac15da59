use thiserror::Error;

use crate::element::Element;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid construction: {0}")]
    InvalidSpec(String),

    #[error("declared heights exceed the exact arithmetic width: {0}")]
    OverflowRisk(String),

    #[error("ideal is not graded: component {component:?} of {element:?} escapes the ideal")]
    NotGraded { element: Element, component: Element },

    #[error("ideal contains 1")]
    ImproperIdeal,

    #[error("element {0:?} is not homogeneous")]
    NotHomogeneous(Element),

    #[error("operation requires a finite ring")]
    NotFinite,

    #[error("unsupported construction: {0}")]
    UnsupportedConstruction(String),

    #[error("avoidance hypothesis fails: {a:?} * {b:?} lies in the ideal but neither factor lies in the union")]
    HypothesisFails { a: Element, b: Element },

    #[error("no homogeneous prime found within height bound {0}")]
    NotFoundWithinBound(u32),

    #[error("precondition fails: homogeneous element {0:?} of Q lies outside every graded maximal ideal over I")]
    PreconditionFails(Element),

    #[error("ideal is not a graded maximal ideal")]
    NotMaximal,

    #[error("the two maximal ideals are equal")]
    Equal,

    #[error("closed sets are not disjoint")]
    NotDisjoint,

    #[error("element {0:?} does not lie in the degree-e component")]
    NotDegreeE(Element),

    #[error("{location}: {message}")]
    Parse { location: String, message: String },

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidSpec(msg.into())
    }

    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
