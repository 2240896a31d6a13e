use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: Box<Error> },

    #[error("{0}")]
    Syntax(String),

    #[error("duplicate vertex id `{id}`")]
    DuplicateVertex { id: String },

    #[error("unknown vertex `{id}`")]
    UnknownVertex { id: String },

    #[error("duplicate pair {a} {b}; duplicate pair across edge sets forbidden unless declared as bar")]
    DuplicateEdge { a: String, b: String },

    #[error("self-loop on vertex `{id}`")]
    SelfLoop { id: String },

    #[error("vertices `{a}` and `{b}` share a position")]
    CoincidentVertices { a: String, b: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("simplex iteration limit {limit} reached")]
    IterationLimit { limit: usize },

    #[error("solver witness violates its constraints by {residual:e}")]
    Inaccurate { residual: f64 },

    #[error("curve-isometry variations need at least one isometry chain")]
    NoChains,

    #[error("isometry chain repeats vertex `{id}` consecutively")]
    DegenerateChain { id: String },

    #[error("theorem of the alternative violated ({pair}): {detail}")]
    AlternativeViolation { pair: &'static str, detail: String },

    #[error("rows {rows:?} are covered by no stress")]
    CoverGap { rows: Vec<usize> },

    #[error("{units} removable units exceed the exhaustive bound of {limit}")]
    TooManyUnits { units: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrilateral is not strictly convex")]
    NotConvex,

    #[error("unknown family `{0}`")]
    UnknownFamily(String),
}

impl Error {
    /// The underlying error with any line-number wrapper removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Parse { source, .. } => source.root(),
            other => other,
        }
    }
}
