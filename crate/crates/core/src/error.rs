use thiserror::Error;

/// Errors shared by every module of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input points must be strictly increasing in both coordinates")]
    NonMonotonicInput,
    #[error("region is not setwise invariant under the map")]
    NotInvariant,
    #[error("blocks are not pairwise disjoint")]
    OverlappingBlocks,
    #[error("operands belong to different tower models: {0}")]
    ModelMismatch(String),
    #[error("the two points are identical")]
    IdenticalPoints,
    #[error("element does not stabilize the block")]
    NotInStabilizer,
    #[error("base element is the identity")]
    IdentityBase,
    #[error("element is not in Q of the block")]
    NotInQ,
    #[error("supports are not disjoint")]
    SupportsNotDisjoint,
    #[error("element has no supporting interval")]
    NoSupportingInterval,
    #[error("no strictly smaller block level exists")]
    DepthExhausted,
    #[error("the working component is abelian; no bump construction applies")]
    AbelianComponent,
    #[error("strict chain not reached after 64 bisections")]
    BisectionExhausted,
    #[error("tower depth must be between 1 and 5")]
    DepthOutOfRange,
    #[error("malformed certificate: {0}")]
    MalformedCert(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
