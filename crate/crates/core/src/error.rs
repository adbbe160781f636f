use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Fewer usable ladder points than a fit needs.
    InsufficientLadder { usable: usize, required: usize },
    InvalidLadder(String),
    LadderMismatch,
    InvalidGrid(String),
    GridMismatch,
    UnsupportedOrder { order: usize, max: usize },
    EvaluationError { location: [f64; 2], detail: String },
    OutOfDomain { point: [f64; 2] },
    SupportError(String),
    CertificateViolation(String),
    /// A fit failed the residual gate, so no classification is issued.
    FitRejected { seminorm: String, residual: f64 },
    EmptyCone,
    AliasingError { top_octave_ratio: f64 },
    Parse { position: usize, message: String },
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InsufficientLadder { usable, required } => {
                write!(f, "insufficient ladder: {usable} usable points, {required} required")
            }
            Error::InvalidLadder(m) => write!(f, "invalid ladder: {m}"),
            Error::LadderMismatch => f.write_str("operands live on different ladders"),
            Error::InvalidGrid(m) => write!(f, "invalid grid: {m}"),
            Error::GridMismatch => f.write_str("operands live on different grids"),
            Error::UnsupportedOrder { order, max } => {
                write!(f, "derivative order {order} exceeds supported maximum {max}")
            }
            Error::EvaluationError { location, detail } => {
                write!(f, "non-finite evaluation at ({}, {}): {detail}", location[0], location[1])
            }
            Error::OutOfDomain { point } => {
                write!(f, "point ({}, {}) lies outside the grid box", point[0], point[1])
            }
            Error::SupportError(m) => write!(f, "support mismatch: {m}"),
            Error::CertificateViolation(m) => write!(f, "certificate violation: {m}"),
            Error::FitRejected { seminorm, residual } => {
                write!(f, "fit for {seminorm} rejected: residual {residual} above gate")
            }
            Error::EmptyCone => f.write_str("cone does not meet the frequency window"),
            Error::AliasingError { top_octave_ratio } => {
                write!(f, "aliasing guard violated: top-octave energy ratio {top_octave_ratio:e}")
            }
            Error::Parse { position, message } => {
                write!(f, "parse error at offset {position}: {message}")
            }
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
        }
    }
}

impl core::error::Error for Error {}
