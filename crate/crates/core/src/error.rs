use thiserror::Error;

/// Grid edge direction: `1` steps in `m`, `2` steps in `n`.
pub type Direction = u8;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("quaternion is not invertible (|q| = {norm:e})")]
    ZeroDivision { norm: f64 },

    #[error("degenerate homogeneous coordinates")]
    DegeneratePoint,

    #[error("point lies at infinity of the chart")]
    PointAtInfinity,

    #[error("consecutive points coincide")]
    CoincidentPoints,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("invalid grid window: {0}")]
    InvalidWindow(String),

    #[error("window mismatch: {0}")]
    WindowMismatch(String),

    #[error("degenerate quadrilateral at ({m}, {n})")]
    DegenerateQuad { m: i32, n: i32 },

    #[error("net is not regular at ({m}, {n}): {reason}")]
    NotRegular {
        m: i32,
        n: i32,
        reason: &'static str,
    },

    #[error("cross ratios do not factor as a_m / b_n (relative residual {residual:e})")]
    NotFactorizable { residual: f64 },

    #[error("net is not isothermic: {0}")]
    NotIsothermic(String),

    #[error("{what}: closure residual {residual:e} exceeds {tolerance:e}")]
    ClosureFailure {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("singular spectral parameter: 1 - lambda*{}_{index} = {gap:e} (direction {direction})", if *.direction == 1 { "a" } else { "b" })]
    SingularLambda {
        direction: Direction,
        index: i32,
        gap: f64,
    },

    #[error("zero spectral parameter is not allowed here")]
    ZeroLambda,

    #[error("transformed net degenerates at ({m}, {n})")]
    DegenerateImage { m: i32, n: i32 },

    #[error("initial point coincides with the net at the origin")]
    BadInitialPoint,

    #[error("degenerate configuration at ({m}, {n})")]
    DegenerateConfiguration { m: i32, n: i32 },

    #[error("difference of nets not invertible at ({m}, {n})")]
    DegenerateDifference { m: i32, n: i32 },

    #[error("base point must be imaginary and off the boundary plane span(j, k)")]
    BadBasePoint,

    #[error("vertex ({m}, {n}) lands on the boundary sphere")]
    BoundaryHit { m: i32, n: i32 },

    #[error("zero denominator at ({m}, {n})")]
    ZeroDenominator { m: i32, n: i32 },

    #[error("holomorphic nets do not form a Christoffel pair (residual {residual:e})")]
    NotChristoffelPair { residual: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Input errors are the caller's fault; everything else is a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::KindMismatch(_)
                | Error::Io(_)
                | Error::InvalidWindow(_)
                | Error::WindowMismatch(_)
                | Error::BadBasePoint
                | Error::BadInitialPoint
                | Error::ZeroLambda
                | Error::InvalidParameter(_)
                | Error::SingularLambda { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
