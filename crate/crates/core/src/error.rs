//! Error type shared by every module of the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the library.
///
/// Variants mirror the documented failure cases of the public operations;
/// none of them is produced for inputs that satisfy the preconditions.
#[derive(Debug)]
pub enum Error {
    /// Zeta evaluation requested at the pole `s = 1`.
    ZetaPole,
    /// Zeta derivative requested at a point other than the supported ones.
    UnsupportedDerivativePoint { point: f64 },
    /// An argument that must be strictly positive was not.
    NonPositive { name: &'static str, value: f64 },
    /// A dimension or size argument was out of range.
    InvalidArgument { what: String },
    /// Closed-form zeta data exists only for the built-in models.
    ProfileUnavailable,
    /// A custom spectrum file failed to parse; `line` is 1-based.
    Parse { line: usize, message: String },
    /// A custom spectrum does not reach the requested energy cutoff.
    SpectrumTruncated { horizon: u64, e_max: u64 },
    /// A point that must lie in the open right half-plane did not.
    OutsideHalfPlane { x: f64 },
    /// The point lies outside the sector `|y| <= x` required for the
    /// principal-part decomposition.
    OutsideSector { x: f64, y: f64 },
    /// `y` is outside the fundamental strip / comparison range `x <= |y| <= pi`.
    YOutOfRange { x: f64, y: f64 },
    /// Too few quadrature nodes to separate Fourier coefficients.
    AliasingRefused { quad_points: usize, required: usize },
    /// Window half-width outside `(0, pi]`.
    WindowOutOfRange { t: f64 },
    /// The saddle polynomial has no unique positive root at this energy.
    NonUniqueSaddle { e: f64 },
    /// The saddle solver could not certify its root.
    SaddleFailure { e: f64, detail: String },
    /// Joint table does not cover every particle number contributing at `e_max`.
    IncompleteJoint { n_max: u64, required: u64 },
    /// Chemical potential must be strictly negative.
    FugacityDomain { mu: f64 },
    /// Brute-force oracle refused an infeasibly large cutoff.
    BruteForceTooLarge { e_max: u64, limit: u64 },
    /// Spectral tail summation exceeded its hard iteration cap.
    TruncationCap { lambda: u64 },
    /// Underlying I/O failure (file loading, CSV writing).
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZetaPole => write!(f, "zeta has a pole at s = 1"),
            Error::UnsupportedDerivativePoint { point } => {
                write!(f, "zeta derivative is only tabulated at s = 0 and s = -1 (got {point})")
            }
            Error::NonPositive { name, value } => {
                write!(f, "{name} must be strictly positive (got {value})")
            }
            Error::InvalidArgument { what } => write!(f, "{what}"),
            Error::ProfileUnavailable => {
                write!(f, "closed-form zeta profile is only available for built-in models")
            }
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::SpectrumTruncated { horizon, e_max } => write!(
                f,
                "spectrum truncated below e_max: horizon {horizon} < requested cutoff {e_max}"
            ),
            Error::OutsideHalfPlane { x } => {
                write!(f, "point must satisfy x > 0 (got x = {x})")
            }
            Error::OutsideSector { x, y } => {
                write!(f, "decomposition requires |y| <= x (got x = {x}, y = {y})")
            }
            Error::YOutOfRange { x, y } => {
                write!(f, "margin requires x <= |y| <= pi (got x = {x}, y = {y})")
            }
            Error::AliasingRefused { quad_points, required } => write!(
                f,
                "{quad_points} quadrature nodes alias the target coefficient; need at least {required}"
            ),
            Error::WindowOutOfRange { t } => {
                write!(f, "window half-width must lie in (0, pi] (got {t})")
            }
            Error::NonUniqueSaddle { e } => {
                write!(f, "saddle polynomial does not have a unique positive root at E = {e}")
            }
            Error::SaddleFailure { e, detail } => {
                write!(f, "saddle solve failed at E = {e}: {detail}")
            }
            Error::IncompleteJoint { n_max, required } => write!(
                f,
                "joint table covers N <= {n_max} but energies reach N = {required}; fugacity sum would be incomplete"
            ),
            Error::FugacityDomain { mu } => {
                write!(f, "chemical potential must be strictly negative (got {mu})")
            }
            Error::BruteForceTooLarge { e_max, limit } => {
                write!(f, "brute-force oracle is limited to e_max <= {limit} (got {e_max})")
            }
            Error::TruncationCap { lambda } => write!(
                f,
                "spectral tail did not meet the tolerance before lambda = {lambda}; x is too small for this tolerance"
            ),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}
