//! Subdivisions `H^σ` and their embedding into α-joined hosts.

mod base;
mod build;
mod embed;
mod hypotheses;

pub use base::{
    base_graph_to_string, load_base_graph, load_sigma_csv, parse_base_graph, parse_sigma_csv,
    BaseGraph, SubdivisionSpec,
};
pub use build::{build_subdivision, Bipartition, Provenance, SubdividedGraph};
pub use embed::{
    audit_embedding, blueprints_for, embed_subdivision, AuditReport, CrossingFailure, EdgeReport,
    EmbedOptions, EmbedReport, SubdivisionEmbedding,
};
pub use hypotheses::{check_hypotheses, HypothesisReport, Violation};
