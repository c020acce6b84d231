use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wrong dimension: expected {expected} coordinates, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("point is not on the unit sphere (|norm - 1| = {deviation:e})")]
    NotUnitNorm { deviation: f64 },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("points belong to different manifolds")]
    ManifoldMismatch,
    #[error("geodesic between the points is not unique (cut locus)")]
    CutLocus,
    #[error("invalid manifold: {0}")]
    InvalidManifold(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("every projection direction has zero MAD")]
    ZeroMad,
    #[error("no candidate pole has nonnegative inner product with the query")]
    NoValidPole,
    #[error("coincident points")]
    CoincidentPoints,
    #[error("invalid sampler: {0}")]
    InvalidSampler(String),
    #[error("rejection sampler stalled: {accepted} accepted out of {proposed} proposals")]
    RejectionStall { accepted: u64, proposed: u64 },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point {index}: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, index: usize) -> Error {
        Error::AtIndex {
            index,
            source: Box::new(self),
        }
    }

    /// The innermost error, with any index context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtIndex { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
