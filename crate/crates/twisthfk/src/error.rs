use std::fmt;

/// Errors surfaced by structure validation, pairing and invariant extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input file (JSON syntax, unknown field values, bad shapes).
    Schema(String),
    /// An operation whose arguments do not compose in the torus algebra.
    Composability { op: String, reason: String },
    /// Grading data that cannot define a valid double-coset context.
    DegenerateContext(String),
    /// The z-view pairing does not have one-dimensional homology.
    NotKnotPattern { dim: usize },
    /// No integral Alexander shift symmetrizes the homology dimensions.
    AsymmetricHfk(String),
    /// Matrix dimensions do not match.
    Dimension(String),
    /// A curve slope coincides with the surgery line.
    SlopeCollision { p: i64, q: i64, m: u32 },
    /// Series data that should be affine on the tail but is not.
    NonAffine(String),
    /// Per-m failure inside a sweep, with the failing m identified.
    SweepFailure { m: u32, cause: Box<Error> },
    /// A decorated-graph path whose label word admits no valid regrouping.
    UnparsableWord { path: String, word: String },
    /// Anything else that indicates invalid pairing input.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Schema(msg) => write!(f, "schema error: {msg}"),
            Error::Composability { op, reason } => {
                write!(f, "non-composable operation {op}: {reason}")
            }
            Error::DegenerateContext(msg) => write!(f, "degenerate grading context: {msg}"),
            Error::NotKnotPattern { dim } => {
                write!(
                    f,
                    "not a knot pattern: z-view homology has dimension {dim}, expected 1"
                )
            }
            Error::AsymmetricHfk(msg) => write!(f, "asymmetric HFK: {msg}"),
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::SlopeCollision { p, q, m } => {
                write!(f, "slope ({p},{q}) collides with the surgery line at m={m}")
            }
            Error::NonAffine(msg) => write!(f, "non-affine series: {msg}"),
            Error::SweepFailure { m, cause } => write!(f, "sweep failed at m={m}: {cause}"),
            Error::UnparsableWord { path, word } => {
                write!(f, "unparsable label word {word:?} along path {path}")
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
