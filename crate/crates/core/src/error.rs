use thiserror::Error;

/// Everything that can go wrong while building or measuring a surface.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge {poly}:{edge} is unglued, glued twice, or its partner has a different length")]
    UnmatchedEdge { poly: usize, edge: usize },
    #[error("gluing of {poly}:{edge} is not of the declared kind: {reason}")]
    InvalidGluing {
        poly: usize,
        edge: usize,
        reason: String,
    },
    #[error("the glued complex is not connected")]
    Disconnected,
    #[error(
        "polygon {0} is degenerate (fewer than 3 vertices, zero-length edge, or non-positive area)"
    )]
    DegeneratePolygon(usize),
    #[error("polygon {0} is not convex with counterclockwise vertex order")]
    NonConvexPolygon(usize),
    #[error("vertex class {0} does not have a disk neighbourhood")]
    NonManifoldVertex(usize),
    #[error("lattice vectors are linearly dependent")]
    DegenerateLattice,
    #[error("genus must be at least 2 (got {0})")]
    InvalidGenus(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("surface point is outside polygon {0}")]
    PointOutsideChart(usize),
    #[error("basepoint coincides with cone point {0}")]
    BasepointOnConePoint(usize),
    #[error("unfolding exceeded its node budget of {0}")]
    BudgetExceeded(usize),
    #[error("surface has a cone point of positive curvature")]
    NotNonpositivelyCurved,
    #[error("radius {radius} is not below half the systole ({half_systole})")]
    RadiusTooLarge { radius: f64, half_systole: f64 },
    #[error("two distinct straight segments of length ≤ r reach cone point {0}")]
    VisibilityNotUnique(usize),
    #[error("sampling cap exceeded without meeting the average bound")]
    SamplingCapExceeded,
    #[error("curvature must be non-positive (got {0})")]
    PositiveCurvatureUnsupported(f64),
    #[error("Euler characteristic must be non-positive (got {0})")]
    PositiveEuler(i64),
    #[error("non-positive input")]
    NonpositiveInput,
    #[error("no closed geodesic of length at most {0} was found")]
    NoLoopWithinCutoff(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnmatchedEdge { .. } => "UnmatchedEdge",
            Error::InvalidGluing { .. } => "InvalidGluing",
            Error::Disconnected => "Disconnected",
            Error::DegeneratePolygon(_) => "DegeneratePolygon",
            Error::NonConvexPolygon(_) => "NonConvexPolygon",
            Error::NonManifoldVertex(_) => "NonManifoldVertex",
            Error::DegenerateLattice => "DegenerateLattice",
            Error::InvalidGenus(_) => "InvalidGenus",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::PointOutsideChart(_) => "PointOutsideChart",
            Error::BasepointOnConePoint(_) => "BasepointOnConePoint",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::NotNonpositivelyCurved => "NotNonpositivelyCurved",
            Error::RadiusTooLarge { .. } => "RadiusTooLarge",
            Error::VisibilityNotUnique(_) => "VisibilityNotUnique",
            Error::SamplingCapExceeded => "SamplingCapExceeded",
            Error::PositiveCurvatureUnsupported(_) => "PositiveCurvatureUnsupported",
            Error::PositiveEuler(_) => "PositiveEuler",
            Error::NonpositiveInput => "NonpositiveInput",
            Error::NoLoopWithinCutoff(_) => "NoLoopWithinCutoff",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
