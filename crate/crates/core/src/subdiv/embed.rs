use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alpha::{floor_count, Alpha};
use crate::bigraph::{BipartiteGraph, PartId, VertexRef, VertexSet};
use crate::error::{Error, Result};
use crate::good_embed::{
    build_tree_blueprint, extend_leaf, verify_good, Embedding, ExtendMode, GoodnessMode,
    GoodnessReport, ParityRole, PatternGraph, TreeBlueprint,
};
use crate::joinedness::{extract_expander, initial_null_embedding, kept_subgraph, YChoice};
use crate::search::{Budget, DEFAULT_BUDGET};

use super::base::SubdivisionSpec;
use super::build::{build_subdivision, SubdividedGraph};
use super::hypotheses::{check_hypotheses, HypothesisReport, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedOptions {
    /// Order in which the edges of `H` are processed; input order if absent.
    pub edge_order: Option<Vec<usize>>,
    pub mode: ExtendMode,
    /// Send colour class `A₁` to host part 2 instead of part 1.
    pub mirror: bool,
    pub y_choice: YChoice,
    /// Degree bound `D`; defaults to the maximum degree of `H`.
    pub degree: Option<usize>,
    /// Node cap for each individual subset search.
    pub budget: u64,
    /// When false, only the hypotheses the tree shapes themselves need
    /// (bipartiteness, degree, tree-length bounds) are enforced.
    pub enforce_hypotheses: bool,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            edge_order: None,
            mode: ExtendMode::default(),
            mirror: false,
            y_choice: YChoice::First,
            degree: None,
            budget: DEFAULT_BUDGET,
            enforce_hypotheses: true,
        }
    }
}

/// Two leaf sets with no host edge between them, in host indexing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingFailure {
    pub edge: usize,
    pub leaves1: VertexSet,
    pub leaves2: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub edge: usize,
    pub endpoints: (usize, usize),
    pub sigma: usize,
    pub roles: (ParityRole, ParityRole),
    pub path_lengths: (usize, usize),
    pub branch_height: usize,
    pub extensions: usize,
    /// Rejected candidates summed over all extensions.
    pub retries: usize,
    pub pruned: usize,
    /// Host edge closing the path, in host indexing.
    pub crossing: (VertexRef, VertexRef),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub pass: bool,
    pub image_size: usize,
    pub expected_size: usize,
    pub path_lengths: Vec<usize>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedReport {
    pub hypotheses: HypothesisReport,
    pub mode: ExtendMode,
    pub edge_order: Vec<usize>,
    pub removed: [usize; 2],
    pub initial_goodness: Option<GoodnessReport>,
    pub edges: Vec<EdgeReport>,
    pub audit: AuditReport,
}

#[derive(Clone, Debug)]
pub struct SubdivisionEmbedding {
    pub subdivided: SubdividedGraph,
    /// Host vertex of every vertex of `H^σ`.
    pub host_map: Vec<VertexRef>,
    /// The final embedding of `H^σ` (indexed by its bipartition, mirrored if
    /// requested) into the host.
    pub embedding: Embedding,
    pub report: EmbedReport,
}

/// Checks that `host_map` is a copy of `H^σ` in `host`: injective, every
/// subdivision path present with exactly `σ(e)` host edges.
pub fn audit_embedding(
    host: &BipartiteGraph,
    sub: &SubdividedGraph,
    host_map: &[VertexRef],
) -> AuditReport {
    let mut failures = Vec::new();
    if host_map.len() != sub.vertex_count {
        failures.push(format!(
            "{} images for {} vertices",
            host_map.len(),
            sub.vertex_count
        ));
    }
    let distinct: HashSet<VertexRef> = host_map.iter().copied().collect();
    if distinct.len() != host_map.len() {
        failures.push("images are not distinct".into());
    }
    let mut path_lengths = Vec::with_capacity(sub.paths.len());
    for (e, path) in sub.paths.iter().enumerate() {
        let mut len = 0;
        for w in path.windows(2) {
            let (Some(&a), Some(&b)) = (host_map.get(w[0]), host_map.get(w[1])) else {
                continue;
            };
            if host.contains(a) && host.contains(b) && host.has_edge(a, b) {
                len += 1;
            } else {
                failures.push(format!("edge {e}: {a}-{b} is not a host edge"));
            }
        }
        path_lengths.push(len);
        if len != path.len() - 1 {
            failures.push(format!(
                "edge {e}: {len} host edges, expected {}",
                path.len() - 1
            ));
        }
    }
    AuditReport {
        pass: failures.is_empty(),
        image_size: distinct.len(),
        expected_size: sub.vertex_count,
        path_lengths,
        failures,
    }
}

/// Embeds `H^σ` into an α-joined host, one edge of `H` at a time: grow two
/// trees from the endpoints' images, join two of their leaves by a host edge,
/// and prune everything off the resulting path.
pub fn embed_subdivision(
    host: &BipartiteGraph,
    spec: &SubdivisionSpec,
    alpha: Alpha,
    opts: &EmbedOptions,
) -> Result<SubdivisionEmbedding> {
    if host.size1() != host.size2() {
        return Err(Error::UnequalParts(host.size1(), host.size2()));
    }
    let big_n = host.size1();
    let degree = opts.degree.unwrap_or_else(|| spec.base.max_degree());
    let hyp = check_hypotheses(spec, alpha, big_n, degree);
    let blocking: Vec<Violation> = hyp
        .violations
        .iter()
        .filter(|v| {
            opts.enforce_hypotheses
                || matches!(
                    v,
                    Violation::NonBipartite
                        | Violation::DegreeExceeded { .. }
                        | Violation::SigmaBelowTreeBound { .. }
                )
        })
        .cloned()
        .collect();
    if !blocking.is_empty() {
        return Err(Error::HypothesisViolation(blocking));
    }
    let sub = build_subdivision(spec);
    let dt = hyp.tree_degree;
    let a = hyp.ceil_alpha_n;
    let n_bound = 3 * a;
    let budget = || Budget::new(opts.budget);
    let order: Vec<usize> = match &opts.edge_order {
        Some(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != (0..spec.base.edge_count()).collect::<Vec<_>>() {
                return Err(Error::InvalidParameter(
                    "edge order is not a permutation".into(),
                ));
            }
            o.clone()
        }
        None => (0..spec.base.edge_count()).collect(),
    };

    let host_part = |v: usize| {
        let c = sub.local(v).expect("bipartite").part;
        if opts.mirror {
            c.other()
        } else {
            c
        }
    };
    let ext = extract_expander(host, alpha, opts.y_choice, &mut budget())?;
    let kept = kept_subgraph(host, &ext);
    let nv = spec.base.vertex_count();
    let mut r = [0usize; 2];
    let mut branch: Vec<VertexRef> = Vec::with_capacity(nv);
    for v in 0..nv {
        let p = host_part(v);
        branch.push(VertexRef::new(p, r[p.idx()]));
        r[p.idx()] += 1;
    }
    let mut emb = initial_null_embedding(&kept, &ext, r[0], r[1])?;
    emb.set_pattern_bound(n_bound, dt)?;
    let initial_goodness = match opts.mode {
        ExtendMode::Certified => Some(verify_good(
            &emb,
            6 * a,
            floor_count(alpha.null_goodness_degree()),
            GoodnessMode::Exhaustive,
            &mut budget(),
        )?),
        ExtendMode::Greedy { .. } => None,
    };

    let to_host =
        |emb: &Embedding, pv: VertexRef| kept.to_parent(emb.image_of(pv).expect("mapped"));
    let mut path_pattern: Vec<Vec<VertexRef>> = vec![Vec::new(); spec.base.edge_count()];
    let mut edge_reports = Vec::with_capacity(order.len());
    for &e in &order {
        let (u, v) = spec.base.edges()[e];
        let sigma = spec.sigma[e];
        let (pu, pv) = (branch[u], branch[v]);
        let roles = if sigma % 2 == 1 {
            (ParityRole::Odd, ParityRole::Odd)
        } else if emb.pattern().degree(pv) < emb.pattern().degree(pu) {
            (ParityRole::EvenJ2, ParityRole::EvenJ1)
        } else {
            (ParityRole::EvenJ1, ParityRole::EvenJ2)
        };
        let trees = [
            build_tree_blueprint(sigma, roles.0, dt, a)?,
            build_tree_blueprint(sigma, roles.1, dt, a)?,
        ];
        let roots = [pu, pv];
        let mut nodes: [Vec<VertexRef>; 2] = [Vec::new(), Vec::new()];
        let (mut extensions, mut retries) = (0, 0);
        for t in 0..2 {
            nodes[t].push(roots[t]);
            for i in 1..trees[t].node_count() {
                let parent = nodes[t][trees[t].parent[i].expect("non-root")];
                let x = extend_leaf(&emb, parent, n_bound, dt, opts.mode, &mut budget())?;
                extensions += 1;
                retries += x.tried - 1;
                nodes[t].push(x.leaf);
                emb = x.embedding;
            }
        }
        for part in PartId::BOTH {
            if emb.pattern().present_count(part) > n_bound {
                return Err(Error::InvariantViolation(format!(
                    "part {part} holds more than 3*ceil(alpha*N) pattern vertices"
                )));
            }
        }
        if emb.pattern().max_degree() > dt {
            return Err(Error::InvariantViolation("pattern degree exceeds D".into()));
        }
        let leaves: [Vec<(VertexRef, usize)>; 2] = [0, 1].map(|t| {
            let mut l: Vec<(VertexRef, usize)> = trees[t]
                .leaves
                .iter()
                .map(|&i| (emb.image_of(nodes[t][i]).expect("mapped"), i))
                .collect();
            l.sort_by_key(|(h, _)| h.index);
            l
        });
        let part_of = |t: usize| leaves[t][0].0.part;
        if leaves[0].iter().any(|(h, _)| h.part != part_of(0))
            || leaves[1].iter().any(|(h, _)| h.part != part_of(1))
            || part_of(0) == part_of(1)
        {
            return Err(Error::InvariantViolation(format!(
                "edge {e}: leaf sets do not lie in opposite parts"
            )));
        }
        let crossing = leaves[0].iter().find_map(|&(h1, i1)| {
            leaves[1]
                .iter()
                .find(|(h2, _)| emb.host().has_edge(h1, *h2))
                .map(|&(_, i2)| (i1, i2))
        });
        let Some((l1, l2)) = crossing else {
            let lift = |t: usize| {
                VertexSet::new(
                    part_of(t),
                    leaves[t].iter().map(|&(h, _)| kept.to_parent(h).index),
                )
            };
            return Err(Error::NoCrossingEdge(Box::new(CrossingFailure {
                edge: e,
                leaves1: lift(0),
                leaves2: lift(1),
            })));
        };
        emb.add_pattern_edge(nodes[0][l1], nodes[1][l2])?;
        let keep = [trees[0].path_to(l1), trees[1].path_to(l2)];
        let mut pruned = 0;
        for t in 0..2 {
            let on_path: HashSet<usize> = keep[t].iter().copied().collect();
            for i in (1..trees[t].node_count()).rev() {
                if !on_path.contains(&i) {
                    emb.remove_vertex(nodes[t][i])?;
                    pruned += 1;
                }
            }
        }
        let mut path: Vec<VertexRef> = keep[0].iter().map(|&i| nodes[0][i]).collect();
        path.extend(keep[1].iter().rev().map(|&i| nodes[1][i]));
        if path.len() != sigma + 1 {
            return Err(Error::InvariantViolation(format!(
                "edge {e}: assembled path has {} edges, expected {sigma}",
                path.len() - 1
            )));
        }
        edge_reports.push(EdgeReport {
            edge: e,
            endpoints: (u, v),
            sigma,
            roles,
            path_lengths: (trees[0].path_length, trees[1].path_length),
            branch_height: trees[0].branch_height,
            extensions,
            retries,
            pruned,
            crossing: (to_host(&emb, nodes[0][l1]), to_host(&emb, nodes[1][l2])),
        });
        path_pattern[e] = path;
    }

    let mut host_map = vec![VertexRef::one(0); sub.vertex_count];
    for (v, &pv) in branch.iter().enumerate() {
        host_map[v] = to_host(&emb, pv);
    }
    for (e, path) in sub.paths.iter().enumerate() {
        for (&x, &pv) in path.iter().zip(&path_pattern[e]) {
            host_map[x] = to_host(&emb, pv);
        }
    }
    let audit = audit_embedding(host, &sub, &host_map);

    let hsig = sub.to_bipartite().expect("bipartite");
    let hsig = if opts.mirror { mirrored(&hsig) } else { hsig };
    let pairs = (0..sub.vertex_count).map(|x| {
        let l = sub.local(x).expect("bipartite");
        let l = if opts.mirror {
            VertexRef::new(l.part.other(), l.index)
        } else {
            l
        };
        (l, host_map[x])
    });
    let embedding = Embedding::new(
        Arc::new(host.clone()),
        PatternGraph::from_bipartite(&hsig),
        pairs,
    )?;

    Ok(SubdivisionEmbedding {
        subdivided: sub,
        host_map,
        embedding,
        report: EmbedReport {
            hypotheses: hyp,
            mode: opts.mode,
            edge_order: order,
            removed: [ext.removed1.len(), ext.removed2.len()],
            initial_goodness,
            edges: edge_reports,
            audit,
        },
    })
}

fn mirrored(g: &BipartiteGraph) -> BipartiteGraph {
    BipartiteGraph::from_edges(g.size2(), g.size1(), g.edges().map(|(i, j)| (j, i)))
        .expect("mirror of a simple graph is simple")
}

/// Blueprint pair that the pipeline would build for one edge.
pub fn blueprints_for(
    sigma: usize,
    degree: usize,
    leaf_target: usize,
) -> Result<(TreeBlueprint, TreeBlueprint)> {
    let roles = if sigma % 2 == 1 {
        (ParityRole::Odd, ParityRole::Odd)
    } else {
        (ParityRole::EvenJ1, ParityRole::EvenJ2)
    };
    Ok((
        build_tree_blueprint(sigma, roles.0, degree, leaf_target)?,
        build_tree_blueprint(sigma, roles.1, degree, leaf_target)?,
    ))
}
