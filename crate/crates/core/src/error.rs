//! Error type shared by every module in the crate.
//!
//! Variants are grouped by how a front end should react to them: bad input
//! data (dimension mismatches, out-of-range values, unknown ids), numerical
//! trouble during a run ([`Error::Singularity`], [`Error::Runtime`]), and
//! plain I/O failures.

use std::fmt;

/// Everything that can go wrong while building or running a simulation.
#[derive(Debug)]
pub enum Error {
    /// Two quantities that must share a dimension do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A coordinate, mass, or parameter is NaN or infinite.
    NonFinite { quantity: String },
    /// A value fell outside its documented range.
    OutOfRange {
        quantity: String,
        value: f64,
        min: f64,
        max: f64,
    },
    /// A parameter violates a structural requirement (sign, emptiness, ...).
    InvalidParameter { name: String, reason: String },
    /// A body id, complex id, or column reference does not resolve.
    UnknownId { id: String },
    /// Two poll records cover the same (evaluator, subject, dimension) cell.
    DuplicatePollRecord {
        evaluator: String,
        subject: String,
        dimension: usize,
    },
    /// A poll record's evaluator is not a leaf of the complex being polled.
    EvaluatorOutsideComplex { evaluator: String, complex: String },
    /// Complex membership loops back on itself.
    MembershipCycle { complex: String },
    /// A complex contains no leaf bodies at all.
    EmptyComplex { complex: String },
    /// Two coincident bodies with zero softening: the force law has no value.
    Singularity { body_a: String, body_b: String },
    /// A body outside the public layer was asked for surface gravity.
    OutsideLayer { body: String, complex: String },
    /// Line-oriented input (poll records, trajectory CSV) failed to parse.
    Parse { line: usize, message: String },
    /// Scenario config file failed to parse or validate.
    Config { message: String },
    /// An error raised while stepping, tagged with the body and time.
    Runtime {
        body: String,
        t: f64,
        source: Box<Error>,
    },
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite { quantity } => write!(f, "{quantity} must be finite"),
            Error::OutOfRange {
                quantity,
                value,
                min,
                max,
            } => write!(f, "{quantity} = {value} outside [{min}, {max}]"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::UnknownId { id } => write!(f, "unknown id `{id}`"),
            Error::DuplicatePollRecord {
                evaluator,
                subject,
                dimension,
            } => write!(
                f,
                "duplicate poll record: evaluator `{evaluator}`, subject `{subject}`, dimension {dimension}"
            ),
            Error::EvaluatorOutsideComplex { evaluator, complex } => write!(
                f,
                "evaluator `{evaluator}` is not a member of complex `{complex}`"
            ),
            Error::MembershipCycle { complex } => {
                write!(f, "complex `{complex}` participates in a membership cycle")
            }
            Error::EmptyComplex { complex } => {
                write!(f, "complex `{complex}` has no leaf bodies")
            }
            Error::Singularity { body_a, body_b } => write!(
                f,
                "bodies `{body_a}` and `{body_b}` coincide with zero softening"
            ),
            Error::OutsideLayer { body, complex } => write!(
                f,
                "body `{body}` is not in the public layer of complex `{complex}`"
            ),
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::Config { message } => write!(f, "config error: {message}"),
            Error::Runtime { body, t, source } => {
                write!(f, "at t = {t}, body `{body}`: {source}")
            }
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Runtime { source, .. } => Some(source),
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
