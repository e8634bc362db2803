use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    InvalidVertex { vertex: usize, order: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("order cap exceeded: {0}")]
    OrderCap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph has no edges")]
    EdgelessGraph,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("power iteration did not converge within {0} iterations")]
    IterationCap(usize),

    #[error("graph is not bipartite with the given parts")]
    NotBipartiteWithGivenParts,

    #[error("graph6: {0}")]
    Graph6(Graph6Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("report merge: {0}")]
    Merge(String),
}

/// Reasons a single graph6 record fails to decode.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty record")]
    Empty,

    #[error("bad header byte {0}")]
    BadHeader(u8),

    #[error("order 0 is not supported")]
    ZeroOrder,

    #[error("record truncated: expected {expected} data bytes, found {found}")]
    TruncatedRecord { expected: usize, found: usize },

    #[error("record has {0} trailing bytes")]
    TrailingData(usize),

    #[error("byte {byte} at offset {offset} is outside the printable range 63..=126")]
    InvalidByte { byte: u8, offset: usize },

    #[error("nonzero padding bits in final byte")]
    NonzeroPadding,

    #[error("sparse6 records are not supported")]
    Sparse6,

    #[error("digraph6 records are not supported")]
    Digraph6,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

// no `#[from]`: that would also expose the record error as the source and
// print it twice in error chains
impl From<Graph6Error> for Error {
    fn from(e: Graph6Error) -> Self {
        Error::Graph6(e)
    }
}
