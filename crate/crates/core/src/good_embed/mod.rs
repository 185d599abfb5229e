//! Good embeddings: the deficiency function, goodness certification, leaf
//! extension, pruning, and the tree shapes grown by the subdivision embedder.
//!
//! For an embedding `φ: F → G`, `D ≥ 1` and a set `X` inside one host part,
//!
//! ```text
//! R(X, φ) = |N(X) ∖ φ(F)| - Σ_{x∈X} (D - deg_F(φ⁻¹x)) - |φ(F) ∩ X|
//! ```
//!
//! with `deg_F(φ⁻¹x) = 0` outside the image. `φ` is `(n, D)`-good when
//! `R(X, φ) ≥ 0` for every such `X` with `1 ≤ |X| ≤ n`.

mod blueprint;
mod embedding;
mod extend;
mod goodness;
mod pattern;

pub use blueprint::{branch_height, build_tree_blueprint, path_length, ParityRole, TreeBlueprint};
pub use embedding::{deficiency, parse_tsv, Embedding};
pub use extend::{extend_leaf, leaf_candidates, prune, ExtendMode, Extension};
pub use goodness::{verify_good, DeficiencyWitness, GoodnessMode, GoodnessReport};
pub use pattern::{PatternBound, PatternGraph};
