use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vectors are linearly dependent")]
    DependentVectors,

    #[error("row space expansion refused: {rows} rows exceeds the limit of {limit}")]
    RowSpaceTooLarge { rows: usize, limit: usize },

    #[error("vertex label {0} is not declared")]
    UnknownLabel(u32),

    #[error("duplicate vertex {vertex} inside face {face:?}")]
    DuplicateVertex { vertex: u32, face: Vec<u32> },

    #[error("duplicate vertex label {0} in the vertex list")]
    DuplicateLabel(u32),

    #[error("complexes with more than 64 vertices are not supported (got {0})")]
    TooManyVertices(usize),

    #[error("simplicial complex is not pure")]
    NotPure,

    #[error("cochain degree {degree} out of range [-1, {max}]")]
    DegreeOutOfRange { degree: i32, max: i32 },

    #[error("ridge {ridge:?} lies in {count} facets, expected exactly two")]
    Ridge { ridge: Vec<u32>, count: usize },

    #[error("{0:?} is not a facet of the complex")]
    NotAFacet(Vec<u32>),

    #[error("position {position} is outside facet of size {size}")]
    BadPosition { position: usize, size: usize },

    #[error("complex is not a strongly connected closed pseudomanifold")]
    NotClosedPseudomanifold,

    #[error("characteristic matrix columns on facet {facet:?} are linearly dependent")]
    DependentFacet { facet: Vec<u32> },

    #[error("characteristic map is not a pullback from the simplex")]
    NotSimplexPullback,

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("shelling condition fails at position {index} (facet {facet:?})")]
    NotAShelling { index: usize, facet: Vec<u32> },

    #[error("Bier sphere is undefined for the full simplex")]
    FullSimplex,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid instance: {0}")]
    Semantic(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("sampling gave up after {0} rejected draws")]
    SamplingExhausted(u64),

    #[error("property violation: {0}")]
    Property(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error class: 1 input, 2 property, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Property(_) | Error::NotAShelling { .. } => 2,
            Error::Internal(_) => 3,
            _ => 1,
        }
    }
}
