use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("operation requires an abelian group")]
    NonAbelian,

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("{what} of size {size} exceeds the configured bound {bound}")]
    SizeBound {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("matrix is not a complex Hadamard matrix")]
    NotHadamard,

    #[error("the group is infinite; {0}")]
    InfiniteGroup(String),

    #[error("the group is not locally free")]
    NotLocallyFree,

    #[error("double coset with {cosets} single cosets does not divide |H| = {order}")]
    NonIntegerCluster { cosets: usize, order: usize },

    #[error("characteristic invariant ratio is not constant: {0}")]
    NonConstantRatio(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(what: &'static str, input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        what,
        input: input.to_string(),
        reason: reason.into(),
    }
}
