use alloc::string::String;

/// Errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("multi-index must have at least one nonzero entry")]
    EmptyMultiIndex,
    #[error("Hölder degree must be below 1, got {0}")]
    BadHolderDegree(String),
    #[error("dimension must be positive")]
    BadDimension,
    #[error("rule must contain at least one positive arity")]
    EmptyRule,
    #[error("diagram has a self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("edge endpoint {0} out of range")]
    VertexOutOfRange(u32),
    #[error("diagram is not connected")]
    Disconnected,
    #[error("diagram needs at least two vertices and one edge")]
    TooSmall,
    #[error("{0} is not in the divergent sector")]
    NotDivergent(String),
    #[error("kernel: {0}")]
    Kernel(String),
    #[error("lattice sum over {0} points exceeds the size limit")]
    SizeLimitExceeded(u128),
    #[error("{0} lies beyond the character's truncation")]
    BeyondTruncation(String),
    #[error("{0} is outside the character's domain")]
    OutsideDomain(String),
}
