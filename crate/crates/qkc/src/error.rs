//! Crate-wide error type. Every fallible operation returns [`Result`];
//! numeric tolerances that triggered a rejection are carried in the variant
//! so callers can report how far an input was from acceptable.

/// Convenience alias used throughout the crate.
pub type Result<T, E = QkcError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum QkcError {
    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid multiset: {0}")]
    InvalidMultiset(String),

    #[error("state lies outside the symmetric subspace (residual {0:.3e})")]
    NotSymmetric(f64),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed program: {0}")]
    Malformed(String),

    #[error("register width exceeded: {0}")]
    WidthExceeded(String),

    #[error("output register is entangled with the auxiliary register (purity {0:.6})")]
    EntangledOutput(f64),

    #[error("projected mass {0:.3e} is below the encodable threshold")]
    ZeroProjection(f64),

    #[error("block size {block} does not divide input length {len}")]
    BlockMismatch { block: usize, len: usize },
}
