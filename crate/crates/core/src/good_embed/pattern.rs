use serde::{Deserialize, Serialize};

use crate::bigraph::{BipartiteGraph, PartId, VertexRef};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Node {
    present: bool,
    nbrs: Vec<usize>,
}

/// The embedded graph `F`: a bipartite graph that grows by pendant vertices
/// and shrinks by deletions. Deleted vertices keep their slot (marked absent)
/// so indices stay stable across versions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternGraph {
    nodes: [Vec<Node>; 2],
    present: [usize; 2],
    bound: Option<PatternBound>,
}

/// A registered `(n, D)`-bipartite bound, re-checked after every edit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternBound {
    pub n: usize,
    pub degree: usize,
}

impl PatternGraph {
    pub fn new() -> Self {
        PatternGraph::default()
    }

    /// Edgeless pattern with `r1` + `r2` vertices.
    pub fn null(r1: usize, r2: usize) -> Self {
        let mut p = PatternGraph::new();
        for _ in 0..r1 {
            p.add_vertex(PartId::One);
        }
        for _ in 0..r2 {
            p.add_vertex(PartId::Two);
        }
        p
    }

    pub fn from_bipartite(g: &BipartiteGraph) -> Self {
        let mut p = PatternGraph::null(g.size1(), g.size2());
        for (i, j) in g.edges() {
            p.connect(VertexRef::one(i), VertexRef::two(j));
        }
        p
    }

    /// Register an `(n, D)` bound; fails if the pattern already violates it.
    pub fn set_bound(&mut self, n: usize, degree: usize) -> Result<()> {
        self.bound = Some(PatternBound { n, degree });
        self.check_bound()
    }

    pub fn bound(&self) -> Option<PatternBound> {
        self.bound
    }

    pub fn check_bound(&self) -> Result<()> {
        let Some(b) = self.bound else { return Ok(()) };
        for part in PartId::BOTH {
            if self.present[part.idx()] > b.n {
                return Err(Error::PatternBoundExceeded {
                    part,
                    count: self.present[part.idx()],
                    bound: b.n,
                });
            }
        }
        for v in self.vertices() {
            let d = self.degree(v);
            if d > b.degree {
                return Err(Error::DegreeTooHigh {
                    v,
                    degree: d,
                    limit: b.degree,
                });
            }
        }
        Ok(())
    }

    /// Slots ever allocated in `part`, including deleted ones.
    pub fn slots(&self, part: PartId) -> usize {
        self.nodes[part.idx()].len()
    }

    pub fn present_count(&self, part: PartId) -> usize {
        self.present[part.idx()]
    }

    pub fn vertex_count(&self) -> usize {
        self.present[0] + self.present[1]
    }

    pub fn is_present(&self, v: VertexRef) -> bool {
        self.nodes[v.part.idx()]
            .get(v.index)
            .is_some_and(|n| n.present)
    }

    fn check_present(&self, v: VertexRef) -> Result<()> {
        if self.is_present(v) {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    pub fn degree(&self, v: VertexRef) -> usize {
        self.nodes[v.part.idx()]
            .get(v.index)
            .map_or(0, |n| n.nbrs.len())
    }

    pub fn neighbors(&self, v: VertexRef) -> impl Iterator<Item = VertexRef> + '_ {
        let other = v.part.other();
        self.nodes[v.part.idx()][v.index]
            .nbrs
            .iter()
            .map(move |&i| VertexRef::new(other, i))
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Present vertices, part 1 first, ascending index.
    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        PartId::BOTH.into_iter().flat_map(move |part| {
            self.nodes[part.idx()]
                .iter()
                .enumerate()
                .filter(|(_, n)| n.present)
                .map(move |(i, _)| VertexRef::new(part, i))
        })
    }

    /// Edges `(u, v)` with `u` in part 1, ascending.
    pub fn edges(&self) -> Vec<(VertexRef, VertexRef)> {
        let mut out = Vec::new();
        for (i, n) in self.nodes[0].iter().enumerate() {
            if n.present {
                let mut nb = n.nbrs.clone();
                nb.sort_unstable();
                out.extend(
                    nb.into_iter()
                        .map(|j| (VertexRef::one(i), VertexRef::two(j))),
                );
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.nodes[0]
            .iter()
            .filter(|n| n.present)
            .map(|n| n.nbrs.len())
            .sum()
    }

    pub fn add_vertex(&mut self, part: PartId) -> VertexRef {
        let list = &mut self.nodes[part.idx()];
        list.push(Node {
            present: true,
            nbrs: Vec::new(),
        });
        self.present[part.idx()] += 1;
        VertexRef::new(part, list.len() - 1)
    }

    fn connect(&mut self, u: VertexRef, v: VertexRef) {
        self.nodes[u.part.idx()][u.index].nbrs.push(v.index);
        self.nodes[v.part.idx()][v.index].nbrs.push(u.index);
    }

    pub fn has_edge(&self, u: VertexRef, v: VertexRef) -> bool {
        u.part != v.part
            && self.is_present(u)
            && self.nodes[u.part.idx()][u.index].nbrs.contains(&v.index)
    }

    pub fn add_edge(&mut self, u: VertexRef, v: VertexRef) -> Result<()> {
        self.check_present(u)?;
        self.check_present(v)?;
        if u.part == v.part {
            return Err(Error::SamePart { u, v });
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge { u, v });
        }
        self.connect(u, v);
        if let Err(e) = self.check_bound() {
            self.disconnect(u, v);
            return Err(e);
        }
        Ok(())
    }

    fn disconnect(&mut self, u: VertexRef, v: VertexRef) {
        self.nodes[u.part.idx()][u.index]
            .nbrs
            .retain(|&x| x != v.index);
        self.nodes[v.part.idx()][v.index]
            .nbrs
            .retain(|&x| x != u.index);
    }

    /// Adds a pendant vertex attached to `w`; returns it.
    pub fn add_leaf(&mut self, w: VertexRef) -> Result<VertexRef> {
        self.check_present(w)?;
        let leaf = self.add_vertex(w.part.other());
        self.connect(w, leaf);
        if let Err(e) = self.check_bound() {
            self.remove_vertex(leaf)?;
            return Err(e);
        }
        Ok(leaf)
    }

    /// Deletes `v` and its incident edges.
    pub fn remove_vertex(&mut self, v: VertexRef) -> Result<()> {
        self.check_present(v)?;
        let nbrs = std::mem::take(&mut self.nodes[v.part.idx()][v.index].nbrs);
        let other = v.part.other();
        for u in nbrs {
            self.nodes[other.idx()][u].nbrs.retain(|&x| x != v.index);
        }
        self.nodes[v.part.idx()][v.index].present = false;
        self.present[v.part.idx()] -= 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaves_and_removal() {
        let mut p = PatternGraph::null(1, 0);
        let root = VertexRef::one(0);
        let a = p.add_leaf(root).unwrap();
        let b = p.add_leaf(root).unwrap();
        assert_eq!((a.part, b.part), (PartId::Two, PartId::Two));
        assert_eq!(p.degree(root), 2);
        assert_eq!(p.edge_count(), 2);
        p.remove_vertex(a).unwrap();
        assert_eq!(p.degree(root), 1);
        assert!(!p.is_present(a));
        assert_eq!(p.vertex_count(), 2);
        assert!(p.remove_vertex(a).is_err());
        assert_eq!(p.edges(), vec![(root, b)]);
    }

    #[test]
    fn bound_is_enforced_on_edits() {
        let mut p = PatternGraph::null(1, 1);
        p.set_bound(1, 1).unwrap();
        assert!(matches!(
            p.add_leaf(VertexRef::one(0)),
            Err(Error::PatternBoundExceeded { .. })
        ));
        assert_eq!(p.vertex_count(), 2);
        p.add_edge(VertexRef::one(0), VertexRef::two(0)).unwrap();
        assert!(matches!(
            p.add_edge(VertexRef::one(0), VertexRef::two(0)),
            Err(Error::DuplicateEdge { .. })
        ));
    }
}
