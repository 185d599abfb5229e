use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::good_embed::branch_height;

use super::base::SubdivisionSpec;
use super::build::build_subdivision;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonBipartite,
    DegreeExceeded {
        max_degree: usize,
        degree: usize,
    },
    AlphaTooLarge {
        alpha: Alpha,
        bound: Alpha,
    },
    HostTooSmall {
        host: usize,
        pattern_vertices: usize,
        alpha: Alpha,
    },
    /// `σ(e) < 2 log_{D-1}(αN)`.
    SigmaBelowLogBound {
        edge: usize,
        sigma: usize,
        bound: f64,
    },
    /// `σ(e) < 2k+1` (odd) or `σ(e) < 2k+2` (even).
    SigmaBelowTreeBound {
        edge: usize,
        sigma: usize,
        needed: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonBipartite => write!(f, "the subdivision is not bipartite"),
            Violation::DegreeExceeded { max_degree, degree } => {
                write!(f, "maximum degree {max_degree} exceeds D = {degree}")
            }
            Violation::AlphaTooLarge { alpha, bound } => {
                write!(f, "alpha <= 1/(6D+14) fails ({alpha} > {bound})")
            }
            Violation::HostTooSmall {
                host,
                pattern_vertices,
                alpha,
            } => write!(
                f,
                "N >= n/alpha fails ({host} < {pattern_vertices}/({alpha}) = {})",
                Ratio::from_integer(*pattern_vertices as i64) / alpha.value()
            ),
            Violation::SigmaBelowLogBound { edge, sigma, bound } => {
                write!(
                    f,
                    "edge {edge}: length {sigma} < 2 log_(D-1)(alpha N) = {bound:.4}"
                )
            }
            Violation::SigmaBelowTreeBound {
                edge,
                sigma,
                needed,
            } => {
                write!(
                    f,
                    "edge {edge}: length {sigma} < {needed} needed by the tree shapes"
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub pass: bool,
    pub host_size: usize,
    pub pattern_vertices: usize,
    pub ceil_alpha_n: usize,
    /// Degree used for tree growth: `max(3, D)`.
    pub tree_degree: usize,
    pub branch_height: usize,
    pub violations: Vec<Violation>,
    /// Edges meeting `σ ≥ 2 log_{D-1}(αN)` but not the tree-shape bound.
    pub log_bound_only: Vec<usize>,
}

/// Evaluates every hypothesis of the embedding procedure and collects all
/// failures with their measured values.
pub fn check_hypotheses(
    spec: &SubdivisionSpec,
    alpha: Alpha,
    host_size: usize,
    degree: usize,
) -> HypothesisReport {
    let sub = build_subdivision(spec);
    let n = sub.vertex_count;
    let a = alpha.ceil_of(host_size);
    let tree_degree = degree.max(3);
    let k = branch_height(tree_degree, a.max(1)).expect("tree degree is at least 3");
    let mut violations = Vec::new();
    if !sub.is_bipartite() {
        violations.push(Violation::NonBipartite);
    }
    let max_degree = spec.base.max_degree();
    if max_degree > degree {
        violations.push(Violation::DegreeExceeded { max_degree, degree });
    }
    let bound = Alpha::reciprocal(6 * degree as i64 + 14).expect("6D+14 > 1");
    if !alpha.is_at_most(bound.value()) {
        violations.push(Violation::AlphaTooLarge { alpha, bound });
    }
    if alpha.value() * (host_size as i64) < Ratio::from_integer(n as i64) {
        violations.push(Violation::HostTooSmall {
            host: host_size,
            pattern_vertices: n,
            alpha,
        });
    }
    let an = alpha.to_f64() * host_size as f64;
    let log_bound = if an > 1.0 {
        2.0 * an.ln() / ((tree_degree - 1) as f64).ln()
    } else {
        0.0
    };
    let mut log_bound_only = Vec::new();
    for (e, &s) in spec.sigma.iter().enumerate() {
        let log_ok = s as f64 >= log_bound;
        if !log_ok {
            violations.push(Violation::SigmaBelowLogBound {
                edge: e,
                sigma: s,
                bound: log_bound,
            });
        }
        let needed = if s % 2 == 1 { 2 * k + 1 } else { 2 * k + 2 };
        if s < needed {
            violations.push(Violation::SigmaBelowTreeBound {
                edge: e,
                sigma: s,
                needed,
            });
            if log_ok {
                log_bound_only.push(e);
            }
        }
    }
    HypothesisReport {
        pass: violations.is_empty(),
        host_size,
        pattern_vertices: n,
        ceil_alpha_n: a,
        tree_degree,
        branch_height: k,
        violations,
        log_bound_only,
    }
}
