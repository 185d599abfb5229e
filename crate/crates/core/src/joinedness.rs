//! α-joinedness and the expander-extraction procedure.
//!
//! A bipartite graph with parts of size `N` is α-joined when every pair
//! `A ⊆ V₁`, `B ⊆ V₂` with `|A| = |B| = ⌈αN⌉` spans an edge. From such a graph,
//! repeatedly deleting sparse sets leaves an induced subgraph `G′` that expands
//! small sets by `(1-4α)/(2α)` and large ones to almost all of the other side.

use std::sync::Arc;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::alpha::{floor_mul, le_scaled, lt_scaled, Alpha, Rational};
use crate::bigraph::{
    BipartiteGraph, ExpansionMode, InducedSubgraph, PartId, VertexRef, VertexSet,
};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::good_embed::Embedding;
use crate::rng::{derive_seed, stream};
use crate::search::{Budget, UnionSearch};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinednessVerdict {
    pub alpha: Alpha,
    pub set_size: usize,
    pub joined: bool,
    #[serde(rename = "witness_A")]
    pub witness_a: Option<VertexSet>,
    #[serde(rename = "witness_B")]
    pub witness_b: Option<VertexSet>,
}

fn equal_parts(g: &BipartiteGraph) -> Result<usize> {
    if g.size1() != g.size2() {
        return Err(Error::UnequalParts(g.size1(), g.size2()));
    }
    Ok(g.size1())
}

/// Lexicographically least `a`-subset `A` of `cands` (inside `part`) whose
/// common non-neighbourhood has at least `a` vertices, with `B` the first `a`
/// of those.
fn empty_pair(
    g: &BipartiteGraph,
    part: PartId,
    cands: &[usize],
    a: usize,
    budget: &mut Budget,
) -> Result<Option<(VertexSet, VertexSet)>> {
    let width = g.size(part.other());
    let cands: Vec<usize> = cands
        .iter()
        .copied()
        .filter(|&x| width - g.degree(VertexRef::new(part, x)) >= a)
        .collect();
    let search = UnionSearch {
        rows: g.rows(part),
        weights: None,
        candidates: &cands,
        require: None,
        width,
    };
    let found = search.first(
        a,
        a,
        budget,
        |n| width - n.union < a,
        |n| width - n.union >= a,
    )?;
    Ok(found.map(|xs| {
        let nb = g.neighborhood_bits(part, xs.iter().copied());
        let b: Vec<usize> = (0..width).filter(|&y| !nb.contains(y)).take(a).collect();
        let (x, y) = (VertexSet::new(part, xs), VertexSet::new(part.other(), b));
        match part {
            PartId::One => (x, y),
            PartId::Two => (y, x),
        }
    }))
}

/// Decides α-joinedness exactly; a larger edgeless pair always contains one
/// of size exactly `⌈αN⌉`, so only that size is searched.
pub fn is_alpha_joined(
    g: &BipartiteGraph,
    alpha: Alpha,
    budget: &mut Budget,
) -> Result<JoinednessVerdict> {
    let n = equal_parts(g)?;
    let a = alpha.ceil_of(n);
    if a == 0 {
        return Err(Error::InvalidParameter(
            "ceil(alpha*N) must be at least 1".into(),
        ));
    }
    let all: Vec<usize> = (0..n).collect();
    let pair = empty_pair(g, PartId::One, &all, a, budget)?;
    Ok(JoinednessVerdict {
        alpha,
        set_size: a,
        joined: pair.is_none(),
        witness_a: pair.as_ref().map(|p| p.0.clone()),
        witness_b: pair.map(|p| p.1),
    })
}

/// How the reserved sets `Y₁`, `Y₂` are picked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YChoice {
    /// The first `2⌈αN⌉` indices of each part.
    #[default]
    First,
    /// A uniformly random `2⌈αN⌉`-subset per part.
    Seeded(u64),
}

impl std::str::FromStr for YChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "first" {
            return Ok(YChoice::First);
        }
        s.parse::<u64>().map(YChoice::Seeded).map_err(|_| {
            Error::InvalidParameter(format!("y choice must be `first` or a seed, got {s:?}"))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalStep {
    pub part: PartId,
    pub removed: VertexSet,
    /// `|N(X) ∖ (Y₁ ∪ Y₂)|` in the residual graph at removal time.
    pub neighborhood: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub alpha: Alpha,
    #[serde(rename = "N")]
    pub n: usize,
    pub ceil_alpha_n: usize,
    pub y1: VertexSet,
    pub y2: VertexSet,
    pub kept1: VertexSet,
    pub kept2: VertexSet,
    pub removed1: VertexSet,
    pub removed2: VertexSet,
    #[serde(rename = "Y1prime")]
    pub y1prime: VertexSet,
    #[serde(rename = "Y2prime")]
    pub y2prime: VertexSet,
    pub removal_log: Vec<RemovalStep>,
}

impl ExtractionResult {
    pub fn kept(&self, part: PartId) -> &VertexSet {
        match part {
            PartId::One => &self.kept1,
            PartId::Two => &self.kept2,
        }
    }

    pub fn removed(&self, part: PartId) -> &VertexSet {
        match part {
            PartId::One => &self.removed1,
            PartId::Two => &self.removed2,
        }
    }

    pub fn y_prime(&self, part: PartId) -> &VertexSet {
        match part {
            PartId::One => &self.y1prime,
            PartId::Two => &self.y2prime,
        }
    }
}

/// State at the moment a removal would exceed `⌈αN⌉` in one part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverflowState {
    pub part: PartId,
    pub ceil_alpha_n: usize,
    pub removed_before: VertexSet,
    pub offending: VertexSet,
    pub removal_log: Vec<RemovalStep>,
    /// An edgeless `⌈αN⌉ × ⌈αN⌉` pair drawn from the removed vertices, when
    /// one exists: direct proof that the input is not α-joined.
    pub refutation: Option<(VertexSet, VertexSet)>,
}

fn choose_y(n: usize, size: usize, choice: YChoice, part: PartId) -> Bits {
    match choice {
        YChoice::First => Bits::from_indices(n, 0..size),
        YChoice::Seeded(seed) => {
            let mut rng = stream(derive_seed(seed, part.idx() as u64));
            Bits::from_indices(n, sample(&mut rng, n, size))
        }
    }
}

/// Iteratively deletes sets `X` with `|X| ≤ ⌈αN⌉` and
/// `|N(X) ∖ (Y₁ ∪ Y₂)| ≤ (1-4α)/(2α)·|X|` in the residual graph. Sets are
/// tried by increasing size, part 1 before part 2, lexicographically.
pub fn extract_expander(
    g: &BipartiteGraph,
    alpha: Alpha,
    y: YChoice,
    budget: &mut Budget,
) -> Result<ExtractionResult> {
    let n = equal_parts(g)?;
    if !alpha.is_below(Rational::new(1, 5)) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be below 1/5, got {alpha}"
        )));
    }
    let a = alpha.ceil_of(n);
    if 2 * a > n {
        return Err(Error::InvalidParameter(format!(
            "2*ceil(alpha*N) = {} exceeds N = {n}",
            2 * a
        )));
    }
    let ratio = alpha.removal_ratio();
    let ys = [
        choose_y(n, 2 * a, y, PartId::One),
        choose_y(n, 2 * a, y, PartId::Two),
    ];
    let mut alive = [Bits::full(n), Bits::full(n)];
    let mut removed: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut log = Vec::new();

    'outer: for _ in 0..=2 * n {
        let rows: [Vec<Bits>; 2] = [0, 1].map(|p| {
            let q = 1 - p;
            let mut mask = alive[q].clone();
            mask.difference_with(&ys[q]);
            g.rows(PartId::from_idx(p))
                .iter()
                .map(|r| {
                    let mut b = r.clone();
                    b.intersect_with(&mask);
                    b
                })
                .collect()
        });
        for s in 1..=a {
            for part in PartId::BOTH {
                let p = part.idx();
                let cands: Vec<usize> = alive[p]
                    .iter()
                    .filter(|&x| le_scaled(rows[p][x].count(), ratio, s))
                    .collect();
                let search = UnionSearch {
                    rows: &rows[p],
                    weights: None,
                    candidates: &cands,
                    require: None,
                    width: n,
                };
                let found = search.first(
                    s,
                    s,
                    budget,
                    |node| !le_scaled(node.union, ratio, s),
                    |node| le_scaled(node.union, ratio, node.size),
                )?;
                let Some(x) = found else { continue };
                let nb = {
                    let mut u = Bits::new(n);
                    for &v in &x {
                        u.union_with(&rows[p][v]);
                    }
                    u.count()
                };
                if removed[p].len() + x.len() > a {
                    let union: Vec<usize> = removed[p].iter().chain(&x).copied().collect();
                    let refutation = empty_pair(g, part, &union, a, budget)?;
                    return Err(Error::RemovalOverflow(Box::new(OverflowState {
                        part,
                        ceil_alpha_n: a,
                        removed_before: VertexSet::new(part, removed[p].iter().copied()),
                        offending: VertexSet::new(part, x),
                        removal_log: log,
                        refutation,
                    })));
                }
                for &v in &x {
                    alive[p].remove(v);
                }
                removed[p].extend(&x);
                log.push(RemovalStep {
                    part,
                    removed: VertexSet::new(part, x),
                    neighborhood: nb,
                });
                continue 'outer;
            }
        }
        let set = |part: PartId, b: &Bits| VertexSet::from_bits(part, b);
        let mut yp = [ys[0].clone(), ys[1].clone()];
        yp[0].intersect_with(&alive[0]);
        yp[1].intersect_with(&alive[1]);
        return Ok(ExtractionResult {
            alpha,
            n,
            ceil_alpha_n: a,
            y1: set(PartId::One, &ys[0]),
            y2: set(PartId::Two, &ys[1]),
            kept1: set(PartId::One, &alive[0]),
            kept2: set(PartId::Two, &alive[1]),
            removed1: VertexSet::new(PartId::One, removed[0].iter().copied()),
            removed2: VertexSet::new(PartId::Two, removed[1].iter().copied()),
            y1prime: set(PartId::One, &yp[0]),
            y2prime: set(PartId::Two, &yp[1]),
            removal_log: log,
        });
    }
    Err(Error::InvariantViolation(
        "removal loop did not terminate within 2N rounds".into(),
    ))
}

/// The subgraph induced on the kept vertices.
pub fn kept_subgraph(g: &BipartiteGraph, r: &ExtractionResult) -> InducedSubgraph {
    g.induced(&r.kept1.to_bits(g.size1()), &r.kept2.to_bits(g.size2()))
}

/// Outcome of re-checking an extraction by enumeration. Witness sets are in
/// the original graph's indexing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionVerdict {
    pub pass: bool,
    pub sizes_ok: bool,
    /// A set of size `≤ ⌈αN⌉` with `|N′(X)| ≤ (1-4α)/(2α)|X|`.
    pub small_set_failure: Option<VertexSet>,
    /// A set of size `> ⌈αN⌉` with `|N′(X)| ≤ (1-2α)N`.
    pub large_set_failure: Option<VertexSet>,
    /// A set of size `≤ 6αN` with `|N′(X)| < (1-2α)/(6α)|X|`.
    pub expansion_failure: Option<VertexSet>,
}

/// Re-verifies the three guarantees on `G′` by exhaustive search.
///
/// Any violating set larger than `⌈αN⌉` contains a violating set of size
/// exactly `⌈αN⌉ + 1` (neighbourhoods shrink with the set), so the large-set
/// property is checked at that single size.
pub fn verify_extraction(
    g: &BipartiteGraph,
    r: &ExtractionResult,
    budget: &mut Budget,
) -> Result<ExtractionVerdict> {
    let n = r.n;
    let a = r.ceil_alpha_n;
    let alpha = r.alpha;
    let sub = kept_subgraph(g, r);
    let gp = &sub.graph;
    let lower = Rational::from_integer(1) - alpha.value();
    let sizes_ok = PartId::BOTH
        .iter()
        .all(|&p| r.removed(p).len() <= a && !lt_scaled(r.kept(p).len(), lower, n));
    let lift = |x: VertexSet| {
        VertexSet::new(
            x.part,
            x.members
                .iter()
                .map(|&i| sub.to_parent(VertexRef::new(x.part, i)).index),
        )
    };

    let ratio = alpha.removal_ratio();
    let big = floor_mul(Rational::from_integer(1) - alpha.value() * 2, n);
    let mut small_set_failure = None;
    let mut large_set_failure = None;
    'parts: for part in PartId::BOTH {
        let size = gp.size(part);
        let all: Vec<usize> = (0..size).collect();
        let search = UnionSearch {
            rows: gp.rows(part),
            weights: None,
            candidates: &all,
            require: None,
            width: gp.size(part.other()),
        };
        for s in 1..=a.min(size) {
            if let Some(x) = search.first(
                s,
                s,
                budget,
                |node| !le_scaled(node.union, ratio, s),
                |node| le_scaled(node.union, ratio, node.size),
            )? {
                small_set_failure = Some(lift(VertexSet::new(part, x)));
                break 'parts;
            }
        }
    }
    for part in PartId::BOTH {
        let size = gp.size(part);
        if a + 1 > size {
            continue;
        }
        let all: Vec<usize> = (0..size).collect();
        let search = UnionSearch {
            rows: gp.rows(part),
            weights: None,
            candidates: &all,
            require: None,
            width: gp.size(part.other()),
        };
        if let Some(x) = search.first(
            a + 1,
            a + 1,
            budget,
            |node| node.union > big,
            |node| node.union <= big,
        )? {
            large_set_failure = Some(lift(VertexSet::new(part, x)));
            break;
        }
    }
    let expansion_failure = gp
        .is_expanding(
            floor_mul(alpha.value() * 6, n),
            alpha.expansion_factor(),
            ExpansionMode::Exhaustive,
            budget,
        )?
        .map(lift);
    Ok(ExtractionVerdict {
        pass: sizes_ok
            && small_set_failure.is_none()
            && large_set_failure.is_none()
            && expansion_failure.is_none(),
        sizes_ok,
        small_set_failure,
        large_set_failure,
        expansion_failure,
    })
}

/// Places `r1 + r2` isolated pattern vertices on the lowest indices of
/// `Y′₁`, `Y′₂`, as an embedding into `G′`.
pub fn initial_null_embedding(
    sub: &InducedSubgraph,
    r: &ExtractionResult,
    r1: usize,
    r2: usize,
) -> Result<Embedding> {
    let mut emb = Embedding::empty(Arc::new(sub.graph.clone()));
    for (part, count) in [(PartId::One, r1), (PartId::Two, r2)] {
        let yp = r.y_prime(part);
        if count > yp.len() {
            return Err(Error::InsufficientYSpace {
                part,
                requested: count,
                available: yp.len(),
            });
        }
        for &h in yp.members.iter().take(count) {
            let local = sub.from_parent(VertexRef::new(part, h)).ok_or_else(|| {
                Error::InvariantViolation(format!("Y' vertex {part}:{h} was removed"))
            })?;
            emb.add_isolated(local)?;
        }
    }
    Ok(emb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::floor_count;
    use crate::good_embed::{verify_good, GoodnessMode};

    fn holed(n: usize, hole: usize) -> BipartiteGraph {
        let mut g = BipartiteGraph::complete(n, n);
        for i in 0..hole {
            for j in 0..hole {
                g.remove_edge(VertexRef::one(i), VertexRef::two(j)).unwrap();
            }
        }
        g
    }

    #[test]
    fn joinedness_examples() {
        let a4 = Alpha::reciprocal(4).unwrap();
        let v = is_alpha_joined(
            &BipartiteGraph::complete(12, 12),
            a4,
            &mut Budget::default(),
        )
        .unwrap();
        assert!(v.joined);
        let v = is_alpha_joined(&holed(12, 3), a4, &mut Budget::default()).unwrap();
        assert!(!v.joined);
        assert_eq!(v.witness_a, Some(VertexSet::new(PartId::One, [0, 1, 2])));
        assert_eq!(v.witness_b, Some(VertexSet::new(PartId::Two, [0, 1, 2])));
        let v = is_alpha_joined(
            &BipartiteGraph::new(8, 8),
            Alpha::reciprocal(8).unwrap(),
            &mut Budget::default(),
        )
        .unwrap();
        assert_eq!(v.witness_a, Some(VertexSet::new(PartId::One, [0])));
        assert_eq!(v.witness_b, Some(VertexSet::new(PartId::Two, [0])));
    }

    #[test]
    fn complete_host_needs_no_removal() {
        let g = BipartiteGraph::complete(18, 18);
        let alpha = Alpha::reciprocal(6).unwrap();
        let r = extract_expander(&g, alpha, YChoice::First, &mut Budget::default()).unwrap();
        assert!(r.removal_log.is_empty());
        assert_eq!(r.kept1.len(), 18);
        assert!(
            verify_extraction(&g, &r, &mut Budget::default())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn isolated_vertex_is_removed() {
        let mut g = BipartiteGraph::complete(18, 18);
        for j in 0..18 {
            g.remove_edge(VertexRef::one(5), VertexRef::two(j)).unwrap();
        }
        let alpha = Alpha::reciprocal(6).unwrap();
        let r = extract_expander(&g, alpha, YChoice::First, &mut Budget::default()).unwrap();
        assert_eq!(r.removed1, VertexSet::new(PartId::One, [5]));
        assert_eq!(r.removal_log[0].neighborhood, 0);
        assert!(r.kept1.len() >= 15 && r.kept2.len() >= 15);
        assert!(
            verify_extraction(&g, &r, &mut Budget::default())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn edgeless_overflows_with_refutation() {
        let g = BipartiteGraph::new(18, 18);
        let alpha = Alpha::reciprocal(6).unwrap();
        let err = extract_expander(&g, alpha, YChoice::First, &mut Budget::default()).unwrap_err();
        let Error::RemovalOverflow(state) = err else {
            panic!("{err}")
        };
        let (a, b) = state.refutation.expect("edgeless pair");
        assert_eq!((a.len(), b.len()), (3, 3));
        assert_eq!(g.edge_count_between(&a, &b), 0);
    }

    #[test]
    fn null_embedding_lands_in_y_prime() {
        let g = BipartiteGraph::complete(18, 18);
        let alpha = Alpha::reciprocal(6).unwrap();
        let r = extract_expander(&g, alpha, YChoice::First, &mut Budget::default()).unwrap();
        let sub = kept_subgraph(&g, &r);
        let e = initial_null_embedding(&sub, &r, 3, 3).unwrap();
        for (_, h) in e.pairs() {
            assert!(r.y_prime(h.part).contains(sub.to_parent(h).index));
        }
        let d = floor_count(alpha.null_goodness_degree());
        assert_eq!(d, 0);
        let rep = verify_good(&e, 18, d, GoodnessMode::Exhaustive, &mut Budget::default()).unwrap();
        assert!(rep.good);
        assert!(matches!(
            initial_null_embedding(&sub, &r, 7, 0),
            Err(Error::InsufficientYSpace { .. })
        ));
        let empty = initial_null_embedding(&sub, &r, 0, 0).unwrap();
        assert_eq!(empty.image_size(), 0);
    }
}
