use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tensor with {entries} entries exceeds the size cap of {cap}")]
    Capacity { entries: usize, cap: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite entry at flat index {0}")]
    NonFinite(usize),

    #[error("matrix is not Hermitian (asymmetry residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("no invariant integral: constraint system has trivial null space (smallest singular value ratio {ratio:e})")]
    NoIntegral { ratio: f64 },

    #[error("invariant integral is not unique: null space has dimension {dim}")]
    AmbiguousIntegral { dim: usize },

    #[error("invariant integral vanishes on the unit and cannot be normalized")]
    NormalizationFailure,

    #[error("spec carries no invariant integral")]
    MissingIntegral,

    #[error("Galois map {0} is not invertible within tolerance")]
    SingularGaloisMap(&'static str),

    #[error("pairing is degenerate (rank {rank}, dimensions {n_a}x{n_b})")]
    DegeneratePairing { rank: usize, n_a: usize, n_b: usize },

    #[error("cannot align double with group oracle: {0}")]
    IndexAlignment(String),

    #[error("Gram matrix is not positive definite (minimum eigenvalue {min_eigenvalue:e})")]
    GramNotPositive { min_eigenvalue: f64 },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
