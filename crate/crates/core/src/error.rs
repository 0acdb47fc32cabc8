use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole sequence is empty")]
    EmptySequence,

    #[error("pole {index} is not in the open upper half-plane (beta = {beta})")]
    PoleNotInUpperHalfPlane { index: usize, beta: f64 },

    #[error("lambda must be a finite positive number, got {0}")]
    NonPositiveLambda(f64),

    #[error("weight scale rho0 must be nonzero")]
    ZeroWeightScale,

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("cannot deflate a constant polynomial")]
    DegreeZeroInput,

    #[error("divided-difference node w = {0} lies on the real axis")]
    RealArgumentW(Complex64),

    #[error("evaluation point {0} coincides with a pole")]
    PoleHit(Complex64),

    #[error("z coincides with conj(zeta) = {0}")]
    CoincidentArguments(Complex64),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("kernel coefficients must be real (A = {a}, B = {b})")]
    ComplexCoefficients { a: Complex64, b: Complex64 },

    #[error("polynomial degree {degree} exceeds the admissible maximum {max}")]
    DegreeTooHigh { degree: usize, max: usize },

    #[error("basis expansion system is singular")]
    SingularSystem,

    #[error("point {0} is not in the open upper half-plane")]
    ArgumentNotInUpperHalfPlane(Complex64),

    #[error("integrand decay exponent {0} is below 2")]
    InsufficientDecay(f64),

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadratureSpec(&'static str),

    #[error("invalid test function: {0}")]
    InvalidTestFunction(&'static str),

    #[error(
        "quadrature did not converge: last estimate {estimate}, previous {previous}, gap {gap:e}"
    )]
    NoConvergence {
        estimate: Complex64,
        previous: Complex64,
        gap: f64,
        /// Gap between successive estimates at each doubling.
        gaps: Vec<f64>,
    },
}

impl Error {
    /// Short stable identifier, used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySequence => "EmptySequence",
            Error::PoleNotInUpperHalfPlane { .. } => "PoleNotInUpperHalfPlane",
            Error::NonPositiveLambda(_) => "NonPositiveLambda",
            Error::ZeroWeightScale => "ZeroWeightScale",
            Error::NonFinite(_) => "NonFinite",
            Error::DegreeZeroInput => "DegreeZeroInput",
            Error::RealArgumentW(_) => "RealArgumentW",
            Error::PoleHit(_) => "PoleHit",
            Error::CoincidentArguments(_) => "CoincidentArguments",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::ComplexCoefficients { .. } => "ComplexCoefficients",
            Error::DegreeTooHigh { .. } => "DegreeTooHigh",
            Error::SingularSystem => "SingularSystem",
            Error::ArgumentNotInUpperHalfPlane(_) => "ArgumentNotInUpperHalfPlane",
            Error::InsufficientDecay(_) => "InsufficientDecay",
            Error::InvalidQuadratureSpec(_) => "InvalidQuadratureSpec",
            Error::InvalidTestFunction(_) => "InvalidTestFunction",
            Error::NoConvergence { .. } => "NoConvergence",
        }
    }
}
