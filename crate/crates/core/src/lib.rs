//! Spectral Turán-type toolkit: bitset graphs, certified spectral radius,
//! pattern detection, graph6 corpora, exhaustive verification and search.

pub mod canon;
pub mod corpus;
pub mod error;
pub mod families;
pub mod graph;
pub mod patterns;
pub mod search;
pub mod spectral;
pub mod verify;

pub use error::{Error, Graph6Error, Result};
pub use graph::{Graph, VertexSet, MAX_ORDER};
pub use patterns::PatternSpec;
