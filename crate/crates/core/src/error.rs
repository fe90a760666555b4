use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Combination rules for building polyhedron terms. Violations carry the
/// rule so callers (and error messages) can name what was broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineRule {
    /// Bouquets take two or more pointed pieces; the result is a polyhedron
    /// type (bit 0).
    Bouquet,
    /// Products require at least one factor of manifold type; the result is
    /// a polyhedron type (bit 0).
    Product,
    /// Connected sums require all summands to be closed, connected,
    /// orientable manifold types of one common dimension (bit 1).
    ConnSum,
}

impl std::fmt::Display for CombineRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CombineRule::Bouquet => write!(f, "bouquet rule"),
            CombineRule::Product => write!(f, "product rule"),
            CombineRule::ConnSum => write!(f, "connected-sum rule"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("coefficient mismatch: {left} vs {right}")]
    CoefficientMismatch { left: String, right: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid invariant factor {0}: factors must be at least 2")]
    InvalidInvariantFactor(u64),

    #[error("invariant factor arithmetic overflowed u64")]
    InvariantFactorOverflow,

    #[error("degree {degree} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("matrix shape mismatch: {0}")]
    MatrixShape(String),

    #[error("boundary composition is nonzero at degree {degree}")]
    BoundarySquareNonzero { degree: usize },

    #[error("chain complex ill-formed: {0}")]
    ChainComplex(String),

    #[error("simplicial complex ill-formed: {0}")]
    Simplicial(String),

    #[error(
        "integral cohomology has torsion in degree {degree}; \
         compute over a field instead"
    )]
    TorsionOverIntegers { degree: usize },

    #[error("complex dimension {dim} exceeds the supported bound {bound}")]
    DimensionBound { dim: usize, bound: usize },

    #[error("sphere dimension {dim} out of range for ambient dimension {ambient}")]
    SphereDimOutOfRange { dim: i64, ambient: usize },

    #[error("violates the {rule}: {detail}")]
    RuleViolation { rule: CombineRule, detail: String },

    #[error("atom table: {0}")]
    AtomTable(String),

    #[error("invalid atom {name}: {detail}")]
    InvalidAtom { name: String, detail: String },

    #[error("root sequence: {0}")]
    RootSequence(String),

    #[error("index {index} out of bounds for root sequence of length {len}")]
    RootIndex { index: usize, len: usize },

    #[error("hole spec: {0}")]
    HoleSpec(String),

    #[error("rank hypothesis violated: {0}")]
    RankHypothesis(String),

    #[error("coefficient sequence length mismatch: expected {expected}, got {got} ({which})")]
    SequenceLength {
        which: &'static str,
        expected: usize,
        got: usize,
    },

    #[error(
        "middle-degree coefficient index {index} out of range 1..={len} in literal mode; \
         triangular index mode succeeds here"
    )]
    LiteralIndexOutOfRange { index: usize, len: usize },

    #[error("cohomology ring ill-formed: {0}")]
    Ring(String),

    #[error("differential graded algebra invalid: {0}")]
    Dga(String),

    #[error("linear system has no exact solution ({0})")]
    Unsolvable(String),

    #[error("source dimension {m} must exceed target dimension {n}")]
    CodimensionNotPositive { m: usize, n: usize },

    #[error("rule is only encoded for source dimension 7, got {0}")]
    UnsupportedSourceDim(usize),

    #[error("unsupported (n, k) = ({n}, {k}) for the root whitelist")]
    UnsupportedWhitelist { n: usize, k: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("io: {0}")]
    Io(String),

    #[error("json: {0}")]
    Json(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn rule(rule: CombineRule, detail: impl Into<String>) -> Self {
        Error::RuleViolation {
            rule,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
