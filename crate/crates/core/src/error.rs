use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector is not in the span of the cycle generators")]
    NotInSpan,
    #[error("quotient precondition violated: a boundary generator is not in the span of the cycles")]
    QuotientPrecondition,

    #[error("simplex {0:?} repeats a vertex")]
    DuplicateVertex(Vec<String>),
    #[error("degree {degree} is out of range for a complex of dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("complex is not pure")]
    NotPure,
    #[error("complex is not a pseudomanifold: {0}")]
    NotPseudomanifold(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("identifying `{0}` and `{1}` would break simpliciality: {2}")]
    IdentificationBreaksSimpliciality(String, String, String),
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("chain has length {got}, expected {expected}")]
    ChainLength { expected: usize, got: usize },

    #[error("dimension {0} exceeds the supported maximum of 3")]
    DimensionTooLarge(usize),
    #[error("vertex `{0}` is already a 0-dimensional stratum")]
    AlreadyPointStratum(String),
    #[error("invalid stratification: {0}")]
    InvalidStratification(String),
    #[error("invalid perversity: {0}")]
    InvalidPerversity(String),

    #[error("presentations disagree in degree {degree}: {detail}")]
    PresentationsDisagree { degree: usize, detail: String },
    #[error("pairing entry ({row},{col}) changed under re-representation in trial {trial}")]
    RepresentativeInstability { trial: usize, row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ladder is not centred on degree {0}: {1}")]
    MisCentredLadder(usize, String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context { context: context.into(), source: Box::new(self) }
    }
}

pub(crate) trait ResultExt<T> {
    fn context(self, context: impl Into<String>) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn context(self, context: impl Into<String>) -> Result<T> {
        self.map_err(|e| e.context(context))
    }
}
