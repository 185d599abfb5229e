use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bigraph::{BipartiteGraph, PartId, VertexRef};

use super::base::SubdivisionSpec;

/// Where a vertex of `H^σ` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// A vertex of `H`.
    Branch { vertex: usize },
    /// The `position`-th internal vertex (from the first endpoint) of an edge.
    Internal { edge: usize, position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bipartition {
    Bipartite {
        class: Vec<PartId>,
        /// Index of each vertex within its class.
        index: Vec<usize>,
        /// Branch vertices per class.
        r: [usize; 2],
    },
    NonBipartite,
}

/// `H^σ`: vertices `0..|V(H)|` are the branch vertices, internal vertices
/// follow edge by edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdividedGraph {
    pub vertex_count: usize,
    pub provenance: Vec<Provenance>,
    pub edges: Vec<(usize, usize)>,
    /// For every edge of `H`, its path from first to second endpoint.
    pub paths: Vec<Vec<usize>>,
    pub bipartition: Bipartition,
}

impl SubdividedGraph {
    pub fn is_bipartite(&self) -> bool {
        matches!(self.bipartition, Bipartition::Bipartite { .. })
    }

    /// Position of `v` in the bipartition, if any.
    pub fn local(&self, v: usize) -> Option<VertexRef> {
        match &self.bipartition {
            Bipartition::Bipartite { class, index, .. } => Some(VertexRef::new(class[v], index[v])),
            Bipartition::NonBipartite => None,
        }
    }

    pub fn r(&self) -> Option<[usize; 2]> {
        match &self.bipartition {
            Bipartition::Bipartite { r, .. } => Some(*r),
            Bipartition::NonBipartite => None,
        }
    }

    /// `H^σ` as a bipartite graph indexed by [`SubdividedGraph::local`].
    pub fn to_bipartite(&self) -> Option<BipartiteGraph> {
        let Bipartition::Bipartite { class, index, .. } = &self.bipartition else {
            return None;
        };
        let n1 = class.iter().filter(|&&c| c == PartId::One).count();
        let mut g = BipartiteGraph::new(n1, self.vertex_count - n1);
        for &(u, v) in &self.edges {
            g.add_edge(
                VertexRef::new(class[u], index[u]),
                VertexRef::new(class[v], index[v]),
            )
            .expect("subdivision edges are simple and cross the bipartition");
        }
        Some(g)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }
}

pub fn build_subdivision(spec: &SubdivisionSpec) -> SubdividedGraph {
    let h = &spec.base;
    let nv = h.vertex_count();
    let mut provenance: Vec<Provenance> =
        (0..nv).map(|v| Provenance::Branch { vertex: v }).collect();
    let mut edges = Vec::new();
    let mut paths = Vec::with_capacity(h.edge_count());
    for (e, (&(u, v), &s)) in h.edges().iter().zip(&spec.sigma).enumerate() {
        let mut path = vec![u];
        for position in 1..s {
            path.push(provenance.len());
            provenance.push(Provenance::Internal { edge: e, position });
        }
        path.push(v);
        edges.extend(path.windows(2).map(|w| (w[0], w[1])));
        paths.push(path);
    }
    let n = provenance.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut color: Vec<Option<PartId>> = vec![None; n];
    let mut ok = true;
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(PartId::One);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let cx = color[x].unwrap();
            for &y in &adj[x] {
                match color[y] {
                    None => {
                        color[y] = Some(cx.other());
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => ok = false,
                    _ => {}
                }
            }
        }
    }
    let bipartition = if ok {
        let class: Vec<PartId> = color.into_iter().map(Option::unwrap).collect();
        let mut counts = [0usize; 2];
        let index = class
            .iter()
            .map(|c| {
                counts[c.idx()] += 1;
                counts[c.idx()] - 1
            })
            .collect();
        let mut r = [0usize; 2];
        for c in &class[..nv] {
            r[c.idx()] += 1;
        }
        Bipartition::Bipartite { class, index, r }
    } else {
        Bipartition::NonBipartite
    };
    SubdividedGraph {
        vertex_count: n,
        provenance,
        edges,
        paths,
        bipartition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdiv::BaseGraph;

    #[test]
    fn single_edge_path() {
        let s = build_subdivision(&SubdivisionSpec::uniform(BaseGraph::single_edge(), 3).unwrap());
        assert_eq!(s.vertex_count, 4);
        assert_eq!(s.paths[0], vec![0, 2, 3, 1]);
        assert_eq!(s.r(), Some([1, 1]));
    }

    #[test]
    fn triangle_parity() {
        let even = build_subdivision(&SubdivisionSpec::uniform(BaseGraph::cycle(3), 2).unwrap());
        assert_eq!(even.vertex_count, 6);
        assert_eq!(even.r(), Some([3, 0]));
        assert_eq!(even.to_bipartite().unwrap().edge_count(), 6);
        let odd = build_subdivision(&SubdivisionSpec::uniform(BaseGraph::cycle(3), 1).unwrap());
        assert!(!odd.is_bipartite());
    }
}
