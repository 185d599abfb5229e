//! Bipartite graphs with bit-vector adjacency and exact set queries.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alpha::Rational;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::search::{Budget, UnionSearch};

/// One side of the bipartition. Serialized as `1` or `2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum PartId {
    One,
    Two,
}

impl PartId {
    pub const BOTH: [PartId; 2] = [PartId::One, PartId::Two];

    pub fn other(self) -> PartId {
        match self {
            PartId::One => PartId::Two,
            PartId::Two => PartId::One,
        }
    }

    #[inline]
    pub fn idx(self) -> usize {
        match self {
            PartId::One => 0,
            PartId::Two => 1,
        }
    }

    pub fn from_idx(i: usize) -> PartId {
        if i == 0 {
            PartId::One
        } else {
            PartId::Two
        }
    }
}

impl From<PartId> for u8 {
    fn from(p: PartId) -> u8 {
        p.idx() as u8 + 1
    }
}

impl TryFrom<u8> for PartId {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(PartId::One),
            2 => Ok(PartId::Two),
            _ => Err(format!("part must be 1 or 2, got {v}")),
        }
    }
}

impl fmt::Display for PartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.idx() + 1)
    }
}

/// A vertex named by its part and 0-based index within that part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexRef {
    pub part: PartId,
    pub index: usize,
}

impl VertexRef {
    pub fn new(part: PartId, index: usize) -> Self {
        VertexRef { part, index }
    }

    pub fn one(index: usize) -> Self {
        VertexRef::new(PartId::One, index)
    }

    pub fn two(index: usize) -> Self {
        VertexRef::new(PartId::Two, index)
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.part, self.index)
    }
}

/// A set of vertices inside a single part, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    pub part: PartId,
    pub members: Vec<usize>,
}

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(part: PartId, members: I) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { part, members }
    }

    pub fn empty(part: PartId) -> Self {
        VertexSet {
            part,
            members: Vec::new(),
        }
    }

    pub fn from_bits(part: PartId, bits: &Bits) -> Self {
        VertexSet {
            part,
            members: bits.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn to_bits(&self, width: usize) -> Bits {
        Bits::from_indices(width, self.members.iter().copied())
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.part, other.part);
        VertexSet::new(
            self.part,
            self.members.iter().chain(&other.members).copied(),
        )
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.part, other.part);
        VertexSet::new(
            self.part,
            self.members.iter().copied().filter(|&m| other.contains(m)),
        )
    }
}

/// A bipartite graph with parts `V₁`, `V₂` and cross-part edges only.
///
/// `adj[p][i]` is the neighbourhood of vertex `i` of part `p`, as a bit vector
/// over the other part.
#[derive(Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    sizes: [usize; 2],
    adj: [Vec<Bits>; 2],
    edges: usize,
}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BipartiteGraph")
            .field("size1", &self.sizes[0])
            .field("size2", &self.sizes[1])
            .field("edges", &self.edges)
            .finish()
    }
}

/// Result of an `(n₁,n₂;D₁,D₂)`-bipartite check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundViolation {
    PartTooLarge {
        part: PartId,
        size: usize,
        bound: usize,
    },
    DegreeTooLarge {
        vertex: VertexRef,
        degree: usize,
        bound: usize,
    },
}

/// How `is_expanding` explores subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionMode {
    /// Full enumeration; the witness is minimum-size then lexicographically least.
    Exhaustive,
    /// Uniformly random subsets; a found witness is genuine but not minimal.
    Sampled { trials: usize, seed: u64 },
}

impl BipartiteGraph {
    /// Edgeless graph with the given part sizes.
    pub fn new(size1: usize, size2: usize) -> Self {
        BipartiteGraph {
            sizes: [size1, size2],
            adj: [
                (0..size1).map(|_| Bits::new(size2)).collect(),
                (0..size2).map(|_| Bits::new(size1)).collect(),
            ],
            edges: 0,
        }
    }

    /// `K_{size1,size2}`
    pub fn complete(size1: usize, size2: usize) -> Self {
        BipartiteGraph {
            sizes: [size1, size2],
            adj: [
                (0..size1).map(|_| Bits::full(size2)).collect(),
                (0..size2).map(|_| Bits::full(size1)).collect(),
            ],
            edges: size1 * size2,
        }
    }

    /// Builds a graph from the neighbour rows of part 1.
    pub fn from_part1_rows(size1: usize, size2: usize, rows: Vec<Bits>) -> Self {
        assert_eq!(rows.len(), size1);
        let mut cols: Vec<Bits> = (0..size2).map(|_| Bits::new(size1)).collect();
        let mut edges = 0;
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), size2);
            for j in row.iter() {
                cols[j].insert(i);
                edges += 1;
            }
        }
        BipartiteGraph {
            sizes: [size1, size2],
            adj: [rows, cols],
            edges,
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(
        size1: usize,
        size2: usize,
        edges: I,
    ) -> Result<Self> {
        let mut g = BipartiteGraph::new(size1, size2);
        for (i, j) in edges {
            g.add_edge(VertexRef::one(i), VertexRef::two(j))?;
        }
        Ok(g)
    }

    #[inline]
    pub fn size(&self, part: PartId) -> usize {
        self.sizes[part.idx()]
    }

    pub fn size1(&self) -> usize {
        self.sizes[0]
    }

    pub fn size2(&self) -> usize {
        self.sizes[1]
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn contains(&self, v: VertexRef) -> bool {
        v.index < self.size(v.part)
    }

    fn check_vertex(&self, v: VertexRef) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    /// Adds the edge `uv`. The endpoints may be given in either order but must
    /// lie in different parts.
    pub fn add_edge(&mut self, u: VertexRef, v: VertexRef) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u.part == v.part {
            return Err(Error::SamePart { u, v });
        }
        let (a, b) = if u.part == PartId::One {
            (u, v)
        } else {
            (v, u)
        };
        if !self.adj[0][a.index].insert(b.index) {
            return Err(Error::DuplicateEdge { u: a, v: b });
        }
        self.adj[1][b.index].insert(a.index);
        self.edges += 1;
        Ok(())
    }

    /// Removes the edge `uv` if present; returns whether it was present.
    pub fn remove_edge(&mut self, u: VertexRef, v: VertexRef) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u.part == v.part {
            return Err(Error::SamePart { u, v });
        }
        let (a, b) = if u.part == PartId::One {
            (u, v)
        } else {
            (v, u)
        };
        let had = self.adj[0][a.index].remove(b.index);
        if had {
            self.adj[1][b.index].remove(a.index);
            self.edges -= 1;
        }
        Ok(had)
    }

    pub fn has_edge(&self, u: VertexRef, v: VertexRef) -> bool {
        u.part != v.part
            && self.contains(u)
            && self.contains(v)
            && self.adj[u.part.idx()][u.index].contains(v.index)
    }

    /// Neighbour row of `v`, over the other part.
    #[inline]
    pub fn row(&self, v: VertexRef) -> &Bits {
        &self.adj[v.part.idx()][v.index]
    }

    /// All neighbour rows of a part.
    #[inline]
    pub fn rows(&self, part: PartId) -> &[Bits] {
        &self.adj[part.idx()]
    }

    pub fn degree(&self, v: VertexRef) -> usize {
        self.row(v).count()
    }

    pub fn max_degree(&self, part: PartId) -> usize {
        self.rows(part).iter().map(Bits::count).max().unwrap_or(0)
    }

    pub fn min_degree(&self, part: PartId) -> usize {
        self.rows(part).iter().map(Bits::count).min().unwrap_or(0)
    }

    /// Edges `(i, j)` with `i ∈ V₁`, `j ∈ V₂`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[0]
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |j| (i, j)))
    }

    pub fn validate_set(&self, x: &VertexSet) -> Result<()> {
        let n = self.size(x.part);
        if x.members.iter().any(|&m| m >= n) {
            return Err(Error::InvalidSet(x.clone()));
        }
        Ok(())
    }

    /// `N(X)` as a bit vector over the other part.
    pub fn neighborhood_bits(
        &self,
        part: PartId,
        members: impl IntoIterator<Item = usize>,
    ) -> Bits {
        let mut acc = Bits::new(self.size(part.other()));
        for m in members {
            acc.union_with(&self.adj[part.idx()][m]);
        }
        acc
    }

    /// `N_G(X) = ⋃_{x∈X} N_G(x)`, living in the opposite part.
    pub fn neighborhood(&self, x: &VertexSet) -> VertexSet {
        let bits = self.neighborhood_bits(x.part, x.members.iter().copied());
        VertexSet::from_bits(x.part.other(), &bits)
    }

    /// `e_G(A, B)` for `A` in one part and `B` in the other.
    pub fn edge_count_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        if a.part == b.part {
            return 0;
        }
        let mask = b.to_bits(self.size(b.part));
        a.members
            .iter()
            .map(|&m| self.adj[a.part.idx()][m].count_and(&mask))
            .sum()
    }

    /// Whether the graph is `(n₁,n₂;D₁,D₂)`-bipartite; on failure, the first
    /// violation found (sizes first, then degrees in vertex order).
    pub fn is_nd_bipartite(
        &self,
        n1: usize,
        n2: usize,
        d1: usize,
        d2: usize,
    ) -> std::result::Result<(), BoundViolation> {
        let ns = [n1, n2];
        let ds = [d1, d2];
        for part in PartId::BOTH {
            if self.size(part) > ns[part.idx()] {
                return Err(BoundViolation::PartTooLarge {
                    part,
                    size: self.size(part),
                    bound: ns[part.idx()],
                });
            }
        }
        for part in PartId::BOTH {
            for (i, row) in self.rows(part).iter().enumerate() {
                let d = row.count();
                if d > ds[part.idx()] {
                    return Err(BoundViolation::DegreeTooLarge {
                        vertex: VertexRef::new(part, i),
                        degree: d,
                        bound: ds[part.idx()],
                    });
                }
            }
        }
        Ok(())
    }

    /// `(n, D)`-expansion: every nonempty `X` inside one part with `|X| ≤ n`
    /// has `|N(X)| ≥ D·|X|`. Returns `Ok(None)` when expanding, otherwise a
    /// violating set.
    pub fn is_expanding(
        &self,
        n: usize,
        factor: Rational,
        mode: ExpansionMode,
        budget: &mut Budget,
    ) -> Result<Option<VertexSet>> {
        match mode {
            ExpansionMode::Exhaustive => self.expansion_witness(n, factor, budget),
            ExpansionMode::Sampled { trials, seed } => {
                Ok(self.expansion_witness_sampled(n, factor, trials, seed))
            }
        }
    }

    fn expansion_witness(
        &self,
        n: usize,
        factor: Rational,
        budget: &mut Budget,
    ) -> Result<Option<VertexSet>> {
        let cands: [Vec<usize>; 2] = [(0..self.sizes[0]).collect(), (0..self.sizes[1]).collect()];
        let max_n = n.min(self.sizes[0].max(self.sizes[1]));
        for s in 1..=max_n {
            for part in PartId::BOTH {
                if s > self.size(part) {
                    continue;
                }
                let search = UnionSearch {
                    rows: self.rows(part),
                    weights: None,
                    candidates: &cands[part.idx()],
                    require: None,
                    width: self.size(part.other()),
                };
                // |N(X)| only grows along a branch, so once it reaches D·s no
                // completion to size s can violate.
                let found = search.first(
                    s,
                    s,
                    budget,
                    |node| !crate::alpha::lt_scaled(node.union, factor, s),
                    |node| crate::alpha::lt_scaled(node.union, factor, node.size),
                )?;
                if let Some(x) = found {
                    return Ok(Some(VertexSet::new(part, x)));
                }
            }
        }
        Ok(None)
    }

    fn expansion_witness_sampled(
        &self,
        n: usize,
        factor: Rational,
        trials: usize,
        seed: u64,
    ) -> Option<VertexSet> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for t in 0..trials {
            let part = PartId::from_idx(t % 2);
            let size = self.size(part);
            let cap = n.min(size);
            if cap == 0 {
                continue;
            }
            let k = rng.random_range(1..=cap);
            let members = sample(&mut rng, size, k).into_vec();
            let nb = self
                .neighborhood_bits(part, members.iter().copied())
                .count();
            if crate::alpha::lt_scaled(nb, factor, k) {
                return Some(VertexSet::new(part, members));
            }
        }
        None
    }

    /// Subgraph induced on the given vertex masks, with index maps.
    pub fn induced(&self, keep1: &Bits, keep2: &Bits) -> InducedSubgraph {
        let to_parent = [keep1.to_vec(), keep2.to_vec()];
        let mut from_parent = [vec![None; self.sizes[0]], vec![None; self.sizes[1]]];
        for p in 0..2 {
            for (new, &old) in to_parent[p].iter().enumerate() {
                from_parent[p][old] = Some(new);
            }
        }
        let mut g = BipartiteGraph::new(to_parent[0].len(), to_parent[1].len());
        for (ni, &oi) in to_parent[0].iter().enumerate() {
            for oj in self.adj[0][oi].iter() {
                if let Some(nj) = from_parent[1][oj] {
                    g.adj[0][ni].insert(nj);
                    g.adj[1][nj].insert(ni);
                    g.edges += 1;
                }
            }
        }
        InducedSubgraph {
            graph: g,
            to_parent,
            from_parent,
        }
    }
}

/// An induced subgraph together with the vertex correspondence to its parent.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: BipartiteGraph,
    to_parent: [Vec<usize>; 2],
    from_parent: [Vec<Option<usize>>; 2],
}

impl InducedSubgraph {
    pub fn to_parent(&self, v: VertexRef) -> VertexRef {
        VertexRef::new(v.part, self.to_parent[v.part.idx()][v.index])
    }

    pub fn from_parent(&self, v: VertexRef) -> Option<VertexRef> {
        self.from_parent[v.part.idx()]
            .get(v.index)
            .copied()
            .flatten()
            .map(|i| VertexRef::new(v.part, i))
    }
}
