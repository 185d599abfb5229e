//! Constructive machinery for embedding long subdivisions into bipartite
//! expanders, with exact small-instance certifiers.
//!
//! The pieces, bottom up:
//!
//! - [`bigraph`]: bipartite graphs with bit-vector adjacency, neighbourhoods,
//!   `(n, D)`-expansion checks and the edge-list format.
//! - [`quasirandom`]: seeded `G(N, N, p)` hosts and post-hoc density and
//!   discrepancy certificates.
//! - [`joinedness`]: α-joinedness and extraction of an expanding subgraph.
//! - [`good_embed`]: good embeddings, leaf extension, pruning, tree shapes.
//! - [`subdiv`]: `H^σ` and the edge-by-edge embedding procedure.
//! - [`harness`]: the numeric constant system and colouring trials.

pub mod alpha;
pub mod bigraph;
pub mod bits;
pub mod edgelist;
pub mod error;
pub mod good_embed;
pub mod harness;
pub mod joinedness;
pub mod quasirandom;
pub mod rng;
pub mod search;
pub mod subdiv;

pub use alpha::{Alpha, Rational};
pub use bigraph::{BipartiteGraph, ExpansionMode, InducedSubgraph, PartId, VertexRef, VertexSet};
pub use bits::Bits;
pub use error::{Error, Result};
pub use good_embed::{Embedding, ExtendMode, GoodnessMode, PatternGraph, TreeBlueprint};
pub use joinedness::{ExtractionResult, JoinednessVerdict, YChoice};
pub use search::{Budget, DEFAULT_BUDGET};
pub use subdiv::{BaseGraph, SubdividedGraph, SubdivisionSpec};
