use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TensorError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("index {index:?} out of range for dimension {dim}")]
    IndexOutOfRange { index: Vec<usize>, dim: usize },

    #[error("non-canonical index {0:?} (indices must be nondecreasing and 1-based)")]
    NonCanonicalIndex(Vec<usize>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative entry {value} at {index:?}")]
    NegativeEntry { index: Vec<usize>, value: f64 },

    #[error("zero denominator in Cauchy tensor at index {0:?}")]
    ZeroDenominator(Vec<usize>),

    #[error("tensor is not rank one (relative residual {0:e})")]
    NotRankOne(f64),

    #[error("invalid duplicate family: {0}")]
    InvalidFamily(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("decomposer failed: {0}")]
    Decomposer(String),

    #[error("sample {id}: {source}")]
    Sample {
        id: u64,
        #[source]
        source: Box<TensorError>,
    },

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T, E = TensorError> = std::result::Result<T, E>;
