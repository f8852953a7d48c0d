use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which configurable size cap was exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Dimensions,
    Cuboids,
    Samples,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitKind::Dimensions => "dimension count",
            LimitKind::Cuboids => "cuboid count",
            LimitKind::Samples => "sample count",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The domain structure itself is malformed (empty or duplicate names).
    InvalidStructure(String),
    /// A point or bound vector has the wrong number of coordinates.
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// A coordinate needed by the computation is missing or not finite.
    UndefinedCoordinate {
        dimension: String,
    },
    /// Weight normalization or positivity violated.
    InvalidWeights(String),
    /// Cuboid bounds violate the defined/undefined domain convention.
    InvalidCuboid(String),
    /// The cuboids of a core do not share a common point.
    EmptyCentralRegion {
        dimension: String,
        max_lower: f64,
        min_upper: f64,
    },
    /// A measure was requested on a cuboid that is unbounded in scope.
    UnboundedCuboid {
        dimension: String,
    },
    /// The central region is unbounded on a requested dimension.
    MidpointUndefined {
        dimension: String,
    },
    /// The two concepts share no domain.
    NoCommonDomain,
    /// Objects built on different domain structures were combined.
    StructureMismatch,
    /// The integration region has zero volume.
    DegenerateDomain,
    InvalidArgument(String),
    LimitExceeded {
        kind: LimitKind,
        value: usize,
        limit: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidStructure(msg) => write!(f, "invalid domain structure: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} coordinates, found {found}")
            }
            Error::UndefinedCoordinate { dimension } => {
                write!(
                    f,
                    "coordinate for dimension `{dimension}` is missing or not finite"
                )
            }
            Error::InvalidWeights(msg) => write!(f, "invalid weights: {msg}"),
            Error::InvalidCuboid(msg) => write!(f, "invalid cuboid: {msg}"),
            Error::EmptyCentralRegion {
                dimension,
                max_lower,
                min_upper,
            } => write!(
                f,
                "core has an empty central region: on dimension `{dimension}` the largest lower \
                 bound {max_lower} exceeds the smallest upper bound {min_upper}"
            ),
            Error::UnboundedCuboid { dimension } => write!(
                f,
                "cuboid is unbounded on dimension `{dimension}`; restrict the concept to the \
                 domains it is defined on first"
            ),
            Error::MidpointUndefined { dimension } => {
                write!(
                    f,
                    "central region is unbounded on dimension `{dimension}`, no midpoint"
                )
            }
            Error::NoCommonDomain => f.write_str("concepts have no domain in common"),
            Error::StructureMismatch => {
                f.write_str("objects belong to different domain structures")
            }
            Error::DegenerateDomain => f.write_str("integration region has zero volume"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::LimitExceeded { kind, value, limit } => {
                write!(f, "{kind} {value} exceeds the configured limit of {limit}")
            }
        }
    }
}

impl core::error::Error for Error {}
