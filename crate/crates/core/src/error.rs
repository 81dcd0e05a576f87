use core::fmt;

/// Every failure the numerical core can report.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    ZeroAxis,
    AngleOutOfRange {
        angle: f64,
    },
    NonpositiveRadius {
        radius: f64,
    },
    /// `d·x̂` is not bounded away from zero on the cone's directions.
    NoUniformBound {
        max_dot: f64,
    },
    ApexInsideBase {
        index: usize,
    },
    /// The spike axis points back into the base body.
    InwardAxis {
        index: usize,
    },
    /// The corner's axis ray never reaches the base body.
    DetachedCorner {
        index: usize,
    },
    OverlappingAttachment {
        first: usize,
        second: usize,
    },
    InvalidBackground,
    InvalidCgoParams(&'static str),
    WavenumberMismatch {
        expected: f64,
        found: f64,
    },
    NonTransversePolarization,
    BudgetExceeded {
        nodes: usize,
        cap: usize,
    },
    SupportMarginViolated,
    EmptyIntersection,
    PreconditionViolated(&'static str),
    DirectionBoundViolated {
        max_dot: f64,
    },
    InsufficientData {
        samples: usize,
    },
    NonpositiveValue {
        index: usize,
    },
    UnboundedSupport,
    NonCompactSupport,
    GridMismatch,
    ExtrapolationDiverged {
        ratio: f64,
    },
    RateGateFailed,
    /// The normalizing cone integral is too small to divide by safely.
    DegenerateNormalization {
        normalized: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroAxis => write!(f, "cone axis is the zero vector"),
            Error::AngleOutOfRange { angle } => {
                write!(f, "half-angle {angle} rad is outside (0, pi/2)")
            }
            Error::NonpositiveRadius { radius } => write!(f, "radius {radius} is not positive"),
            Error::NoUniformBound { max_dot } => {
                write!(f, "direction has no uniform bound on the cone (max d.x = {max_dot})")
            }
            Error::ApexInsideBase { index } => {
                write!(f, "apex of corner {index} is not strictly outside the base body")
            }
            Error::InwardAxis { index } => write!(f, "axis of corner {index} points into the base"),
            Error::DetachedCorner { index } => {
                write!(f, "corner {index} does not reach the base body")
            }
            Error::OverlappingAttachment { first, second } => {
                write!(f, "attachment patches of corners {first} and {second} overlap")
            }
            Error::InvalidBackground => write!(f, "omega, eps0 and mu0 must all be positive"),
            Error::InvalidCgoParams(why) => write!(f, "invalid CGO parameters: {why}"),
            Error::WavenumberMismatch { expected, found } => {
                write!(f, "wavenumber mismatch: background k = {expected}, parameters k = {found}")
            }
            Error::NonTransversePolarization => {
                write!(f, "polarization is not transverse to the propagation direction")
            }
            Error::BudgetExceeded { nodes, cap } => {
                write!(f, "quadrature needs {nodes} nodes, cap is {cap}")
            }
            Error::SupportMarginViolated => {
                write!(f, "evaluation point is too close to a support boundary")
            }
            Error::EmptyIntersection => write!(f, "averaging ball does not meet the domain"),
            Error::PreconditionViolated(what) => write!(f, "precondition violated: {what}"),
            Error::DirectionBoundViolated { max_dot } => {
                write!(f, "CGO direction violates the cone bound (max d.x = {max_dot})")
            }
            Error::InsufficientData { samples } => {
                write!(f, "need at least 3 samples, got {samples}")
            }
            Error::NonpositiveValue { index } => write!(f, "sample {index} is not positive"),
            Error::UnboundedSupport => write!(f, "source support is unbounded"),
            Error::NonCompactSupport => write!(f, "field is not compactly supported"),
            Error::GridMismatch => write!(f, "far-field patterns use different direction grids"),
            Error::ExtrapolationDiverged { ratio } => {
                write!(f, "tau extrapolation diverged (difference ratio {ratio})")
            }
            Error::RateGateFailed => write!(f, "approximation rates fail the admissibility gate"),
            Error::DegenerateNormalization { normalized } => {
                write!(f, "normalized cone integral {normalized} is too small")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
