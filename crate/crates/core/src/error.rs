use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One reason a set of monodromy data fails to describe a connected branched cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverViolation {
    /// An array has the wrong number of entries or a permutation the wrong degree.
    DegreeMismatch { field: String, expected: usize, found: usize },
    /// `field` is not a bijection of the sheet set.
    NotAPermutation { field: String },
    /// The surface relator does not evaluate to the identity.
    RelationViolated,
    /// The images generate an intransitive group (disconnected total space).
    NotTransitive,
    /// `c_i` maps to the identity, so `x_i` is not a branch point (1-based).
    TrivialBranchPoint(usize),
    ZeroDegree,
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverViolation::DegreeMismatch {
                field,
                expected,
                found,
            } => write!(f, "{field}: expected length {expected}, found {found}"),
            CoverViolation::NotAPermutation { field } => {
                write!(f, "{field}: not a permutation of the sheets")
            }
            CoverViolation::RelationViolated => {
                write!(f, "relation violated: surface relator is not sent to the identity")
            }
            CoverViolation::NotTransitive => write!(f, "monodromy is not transitive"),
            CoverViolation::TrivialBranchPoint(i) => {
                write!(f, "c[{}]: identity monodromy at branch point {i}", i - 1)
            }
            CoverViolation::ZeroDegree => write!(f, "degree must be at least 1"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("cannot infer degree from an empty generator list")]
    EmptyDegree,
    #[error("generators do not act transitively")]
    Intransitive,
    #[error("invalid cover: {}", join_violations(.0))]
    InvalidCover(Vec<CoverViolation>),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("word parse error: {0}")]
    ParseWord(String),
    #[error("generator {0} is not in the alphabet of this signature")]
    AlphabetMismatch(String),
    #[error("automorphism {0} does not preserve the surface relator")]
    NotRelatorPreserving(String),
    #[error("unsupported signature: {0}")]
    UnsupportedSignature(String),
    #[error("need at least 4 branch points for an essential curve on the sphere, got {0}")]
    TooFewBranchPoints(usize),
    #[error("orbit exceeds the limit of {0} classes")]
    OrbitLimitExceeded(usize),
    #[error("malformed cut: {0}")]
    MalformedCut(String),
    #[error("total space has Euler characteristic {0}; this check requires a negative value")]
    NonNegativeEuler(i64),
    #[error("{0}")]
    NotApplicable(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[CoverViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
