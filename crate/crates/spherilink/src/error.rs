use crate::classify::VertexType;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("sector angle {name} = {value} is outside the open interval (0, π)")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("quadrilateral inequality violated: {0}")]
    QuadrilateralInequality(String),

    #[error("non-finite input {0}")]
    NonFinite(f64),

    #[error("elliptic modulus {0} outside [0, 1)")]
    ModulusOutOfRange(f64),

    #[error("dc inverse needs an argument >= 1, got {0}")]
    DomainError(f64),

    #[error("argument lies within the pole exclusion zone (cn = {0:e})")]
    PoleProximity(f64),

    #[error("{0} vertex has no elliptic modulus")]
    NotElliptic(VertexType),

    #[error("phase shifts are defined for conic and elliptic vertices, not {0}")]
    TypeMismatch(VertexType),

    #[error("elliptic vertex is too close to a degenerate type: {0}")]
    NearDegenerate(String),

    #[error("parameter {s} outside the branch domain [{lo}, {hi}]")]
    OutOfDomain { s: f64, lo: f64, hi: f64 },

    #[error("coordinate {coordinate} kept an imaginary part {residue:e}; wrong parameter line")]
    ImaginaryResidue { coordinate: char, residue: f64 },

    #[error("state has a fold tangent at zero or infinity")]
    DegenerateState,

    #[error("embedding chart is singular for these sector angles")]
    ChartSingular,

    #[error("strip switch variant {0} does not exist (expected 1..=4)")]
    UnknownVariant(u8),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
