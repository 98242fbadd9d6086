use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude count {got} does not match format product {expected}")]
    FormatMismatch { expected: usize, got: usize },
    #[error("all amplitudes are zero")]
    ZeroState,
    #[error("party dimension {0} is below 2")]
    BadDimension(usize),
    #[error("cut must be a nonempty proper subset of the parties: {0:?}")]
    BadCut(Vec<usize>),
    #[error("operation needs a bipartite state, got {0} parties")]
    NotBipartite(usize),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("operation needs format {expected:?}, got {got:?}")]
    WrongFormat {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
    #[error("interpolated coefficients are inconsistent (residual {residual:e})")]
    InterpolationInconsistent { residual: f64 },
    #[error("leading coefficient stayed zero after {0} determinant-one retries")]
    AllLeadingZero(usize),
    #[error("format {0:?} is not supported")]
    UnsupportedFormat(Vec<usize>),
    #[error("state is not in the x°-section")]
    NotInSection,
    #[error("no canonical representative for {0}")]
    NoCanonicalRepresentative(String),
    #[error("class labels belong to different families")]
    FamilyMismatch,
    #[error("ensemble has no members")]
    EmptyEnsemble,
    #[error("invalid ensemble weights: {0}")]
    InvalidWeights(String),
}

pub type Result<T> = std::result::Result<T, Error>;
