//! Error type shared across the crate.

/// Crate-wide error.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two partitions (or lattice elements) live on ground sets of different
    /// sizes.
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    /// A caller-supplied value violates a precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A configured size limit would be exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A sublattice closure hit its element cap; carries the partial size so
    /// callers can report how far it got.
    #[error("closure exceeded the cap of {cap} elements (partial size {partial})")]
    ClosureCap { cap: usize, partial: usize },

    /// Stored state (e.g. a checkpoint file) is inconsistent with the
    /// requested computation.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// The mathematical precondition of a formula is not met.
    #[error("domain error: {0}")]
    Domain(String),

    /// Underlying I/O failure (checkpointing, listings).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
