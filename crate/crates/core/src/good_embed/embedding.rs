use std::fmt::Write as _;
use std::io::BufRead;
use std::sync::Arc;

use crate::bigraph::{BipartiteGraph, PartId, VertexRef, VertexSet};
use crate::bits::Bits;
use crate::error::{Error, Result};

use super::pattern::PatternGraph;

/// An injective, part-respecting, edge-preserving map from a pattern into a
/// host. Pattern part `i` always lands in host part `i`.
///
/// Alongside the maps it caches, for every host vertex, how many of its
/// neighbours lie outside the image.
#[derive(Clone, Debug)]
pub struct Embedding {
    host: Arc<BipartiteGraph>,
    pattern: PatternGraph,
    forward: [Vec<Option<usize>>; 2],
    inverse: [Vec<Option<usize>>; 2],
    image: [Bits; 2],
    fresh: [Vec<u32>; 2],
}

impl PartialEq for Embedding {
    fn eq(&self, other: &Self) -> bool {
        self.host == other.host && self.pattern == other.pattern && self.pairs() == other.pairs()
    }
}

impl Embedding {
    /// The empty embedding.
    pub fn empty(host: Arc<BipartiteGraph>) -> Self {
        let fresh = [
            host.rows(PartId::One)
                .iter()
                .map(|r| r.count() as u32)
                .collect(),
            host.rows(PartId::Two)
                .iter()
                .map(|r| r.count() as u32)
                .collect(),
        ];
        let inverse = [vec![None; host.size1()], vec![None; host.size2()]];
        let image = [Bits::new(host.size1()), Bits::new(host.size2())];
        Embedding {
            host,
            pattern: PatternGraph::new(),
            forward: [Vec::new(), Vec::new()],
            inverse,
            image,
            fresh,
        }
    }

    /// Builds and validates an embedding of `pattern` given `(pattern, host)`
    /// vertex pairs. Every present pattern vertex must be mapped.
    pub fn new<I>(host: Arc<BipartiteGraph>, pattern: PatternGraph, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexRef, VertexRef)>,
    {
        let mut e = Embedding::empty(host);
        e.forward = [
            vec![None; pattern.slots(PartId::One)],
            vec![None; pattern.slots(PartId::Two)],
        ];
        e.pattern = pattern;
        for (pv, hv) in pairs {
            if !e.pattern.is_present(pv) {
                return Err(Error::InvalidVertex(pv));
            }
            e.map_vertex(pv, hv)?;
        }
        e.check_invariants()?;
        Ok(e)
    }

    fn map_vertex(&mut self, pv: VertexRef, hv: VertexRef) -> Result<()> {
        if pv.part != hv.part || !self.host.contains(hv) {
            return Err(Error::InvalidVertex(hv));
        }
        if self.forward[pv.part.idx()][pv.index].is_some() {
            return Err(Error::InvariantViolation(format!("{pv} is mapped twice")));
        }
        if self.inverse[hv.part.idx()][hv.index].is_some() {
            return Err(Error::InvariantViolation(format!(
                "host vertex {hv} is already in the image"
            )));
        }
        self.forward[pv.part.idx()][pv.index] = Some(hv.index);
        self.inverse[hv.part.idx()][hv.index] = Some(pv.index);
        self.image[hv.part.idx()].insert(hv.index);
        let other = hv.part.other().idx();
        for y in self.host.row(hv).iter() {
            self.fresh[other][y] -= 1;
        }
        Ok(())
    }

    fn unmap_vertex(&mut self, pv: VertexRef) -> Option<usize> {
        let h = self.forward[pv.part.idx()].get_mut(pv.index)?.take()?;
        self.inverse[pv.part.idx()][h] = None;
        self.image[pv.part.idx()].remove(h);
        let other = pv.part.other().idx();
        for y in self.host.rows(pv.part)[h].iter() {
            self.fresh[other][y] += 1;
        }
        Some(h)
    }

    /// Adds an isolated pattern vertex mapped to host vertex `hv`.
    pub fn add_isolated(&mut self, hv: VertexRef) -> Result<VertexRef> {
        if !self.host.contains(hv) {
            return Err(Error::InvalidVertex(hv));
        }
        if self.inverse[hv.part.idx()][hv.index].is_some() {
            return Err(Error::InvariantViolation(format!(
                "host vertex {hv} is already in the image"
            )));
        }
        let pv = self.pattern.add_vertex(hv.part);
        if let Err(e) = self.pattern.check_bound() {
            self.pattern.remove_vertex(pv)?;
            return Err(e);
        }
        self.forward[hv.part.idx()].push(None);
        self.map_vertex(pv, hv)?;
        Ok(pv)
    }

    /// Attaches a new pattern leaf to `w`, mapped to host vertex `a` in the
    /// opposite part. `a` must be an unused neighbour of `φ(w)`.
    pub fn attach_leaf(&mut self, w: VertexRef, a: usize) -> Result<VertexRef> {
        let hw = self.image_of(w).ok_or(Error::InvalidVertex(w))?;
        let ha = VertexRef::new(w.part.other(), a);
        if !self.host.contains(ha) {
            return Err(Error::InvalidVertex(ha));
        }
        if !self.host.has_edge(hw, ha) || self.image[ha.part.idx()].contains(a) {
            return Err(Error::InvariantViolation(format!(
                "{ha} is not an unused neighbour of {hw}"
            )));
        }
        let leaf = self.pattern.add_leaf(w)?;
        self.forward[leaf.part.idx()].push(None);
        self.map_vertex(leaf, ha)?;
        Ok(leaf)
    }

    /// Deletes pattern vertex `v`, which must have degree at most one.
    pub fn remove_vertex(&mut self, v: VertexRef) -> Result<()> {
        if !self.pattern.is_present(v) {
            return Err(Error::InvalidVertex(v));
        }
        let d = self.pattern.degree(v);
        if d > 1 {
            return Err(Error::DegreeTooHigh {
                v,
                degree: d,
                limit: 1,
            });
        }
        self.pattern.remove_vertex(v)?;
        self.unmap_vertex(v);
        Ok(())
    }

    /// Adds the pattern edge `uv`; its image must be a host edge.
    pub fn add_pattern_edge(&mut self, u: VertexRef, v: VertexRef) -> Result<()> {
        let hu = self.image_of(u).ok_or(Error::InvalidVertex(u))?;
        let hv = self.image_of(v).ok_or(Error::InvalidVertex(v))?;
        if !self.host.has_edge(hu, hv) {
            return Err(Error::InvariantViolation(format!(
                "pattern edge {u}-{v} maps to non-edge {hu}-{hv}"
            )));
        }
        self.pattern.add_edge(u, v)
    }

    pub fn host(&self) -> &BipartiteGraph {
        &self.host
    }

    pub fn host_arc(&self) -> &Arc<BipartiteGraph> {
        &self.host
    }

    pub fn pattern(&self) -> &PatternGraph {
        &self.pattern
    }

    /// Registers an `(n, D)` bound on the pattern.
    pub fn set_pattern_bound(&mut self, n: usize, degree: usize) -> Result<()> {
        self.pattern.set_bound(n, degree)
    }

    pub fn image_of(&self, pv: VertexRef) -> Option<VertexRef> {
        self.forward[pv.part.idx()]
            .get(pv.index)
            .copied()
            .flatten()
            .map(|h| VertexRef::new(pv.part, h))
    }

    pub fn preimage(&self, hv: VertexRef) -> Option<VertexRef> {
        self.inverse[hv.part.idx()]
            .get(hv.index)
            .copied()
            .flatten()
            .map(|p| VertexRef::new(hv.part, p))
    }

    /// Image of the pattern inside host part `part`.
    pub fn image(&self, part: PartId) -> &Bits {
        &self.image[part.idx()]
    }

    pub fn image_size(&self) -> usize {
        self.image[0].count() + self.image[1].count()
    }

    /// `|N(v) ∖ image|` for a host vertex.
    pub fn fresh(&self, hv: VertexRef) -> usize {
        self.fresh[hv.part.idx()][hv.index] as usize
    }

    /// `deg_F(φ⁻¹(v))`, zero outside the image.
    pub fn pattern_degree_at(&self, hv: VertexRef) -> usize {
        self.preimage(hv).map_or(0, |p| self.pattern.degree(p))
    }

    /// Per-vertex demand `D - deg_F(φ⁻¹(v)) + [v ∈ image]`, so that
    /// `R(X) = |N(X) ∖ image| - Σ need(x)`.
    pub fn need(&self, hv: VertexRef, degree: usize) -> i64 {
        let occupied = self.image[hv.part.idx()].contains(hv.index);
        degree as i64 - self.pattern_degree_at(hv) as i64 + i64::from(occupied)
    }

    /// Rows `N(x) ∖ image` for every vertex of `part`.
    pub fn fresh_rows(&self, part: PartId) -> Vec<Bits> {
        let img = &self.image[part.other().idx()];
        self.host
            .rows(part)
            .iter()
            .map(|r| {
                let mut b = r.clone();
                b.difference_with(img);
                b
            })
            .collect()
    }

    /// Sorted `(pattern vertex, host vertex)` pairs.
    pub fn pairs(&self) -> Vec<(VertexRef, VertexRef)> {
        let mut out = Vec::new();
        for part in PartId::BOTH {
            for (i, h) in self.forward[part.idx()].iter().enumerate() {
                if let Some(h) = h {
                    out.push((VertexRef::new(part, i), VertexRef::new(part, *h)));
                }
            }
        }
        out
    }

    /// Re-derives every structural invariant from scratch.
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvariantViolation(m));
        for v in self.pattern.vertices() {
            let Some(h) = self.image_of(v) else {
                return bad(format!("pattern vertex {v} is unmapped"));
            };
            if self.preimage(h) != Some(v) {
                return bad(format!("maps disagree at {v} -> {h}"));
            }
        }
        for part in PartId::BOTH {
            let mut seen = 0;
            for (i, p) in self.inverse[part.idx()].iter().enumerate() {
                if let Some(p) = p {
                    seen += 1;
                    let pv = VertexRef::new(part, *p);
                    if !self.pattern.is_present(pv)
                        || self.image_of(pv) != Some(VertexRef::new(part, i))
                    {
                        return bad(format!("stale inverse entry at {part}:{i}"));
                    }
                }
            }
            if seen != self.pattern.present_count(part) || seen != self.image[part.idx()].count() {
                return bad(format!("image size mismatch in part {part}"));
            }
        }
        for (u, v) in self.pattern.edges() {
            let (hu, hv) = (self.image_of(u).unwrap(), self.image_of(v).unwrap());
            if !self.host.has_edge(hu, hv) {
                return bad(format!("pattern edge {u}-{v} maps to non-edge {hu}-{hv}"));
            }
        }
        for part in PartId::BOTH {
            let img = &self.image[part.other().idx()];
            for (i, row) in self.host.rows(part).iter().enumerate() {
                if row.count_and_not(img) != self.fresh[part.idx()][i] as usize {
                    return bad(format!("fresh count stale at {part}:{i}"));
                }
            }
        }
        Ok(())
    }

    /// TSV lines `pattern_part pattern_index host_part host_index`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (p, h) in self.pairs() {
            let _ = writeln!(s, "{}\t{}\t{}\t{}", p.part, p.index, h.part, h.index);
        }
        s
    }
}

/// Parses the TSV map format back into pairs.
pub fn parse_tsv<R: BufRead>(reader: R) -> Result<Vec<(VertexRef, VertexRef)>> {
    let mut out = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let err = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        if f.len() != 4 {
            return Err(err("expected four tab-separated fields"));
        }
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| err("bad integer"));
        let part = |s: &str| match s.trim() {
            "1" => Ok(PartId::One),
            "2" => Ok(PartId::Two),
            _ => Err(err("part must be 1 or 2")),
        };
        out.push((
            VertexRef::new(part(f[0])?, num(f[1])?),
            VertexRef::new(part(f[2])?, num(f[3])?),
        ));
    }
    Ok(out)
}

/// `R(X, φ) = |N(X) ∖ image| - Σ_{x∈X}(D - deg_F(φ⁻¹x)) - |image ∩ X|`.
pub fn deficiency(emb: &Embedding, x: &VertexSet, degree: usize) -> Result<i64> {
    emb.host().validate_set(x)?;
    let nb = emb
        .host()
        .neighborhood_bits(x.part, x.members.iter().copied());
    let fresh = nb.count_and_not(emb.image(x.part.other())) as i64;
    let need: i64 = x
        .members
        .iter()
        .map(|&m| emb.need(VertexRef::new(x.part, m), degree))
        .sum();
    Ok(fresh - need)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deficiency_examples() {
        let host = Arc::new(BipartiteGraph::complete(3, 3));
        let mut e = Embedding::empty(host.clone());
        let x = VertexSet::new(PartId::One, [0]);
        assert_eq!(deficiency(&e, &x, 2).unwrap(), 3 - 2);
        assert_eq!(
            deficiency(&e, &VertexSet::empty(PartId::One), 2).unwrap(),
            0
        );
        e.add_isolated(VertexRef::one(0)).unwrap();
        assert_eq!(deficiency(&e, &x, 2).unwrap(), 0);
        e.check_invariants().unwrap();
    }

    #[test]
    fn attach_and_remove_restore_map() {
        let host = Arc::new(BipartiteGraph::complete(3, 3));
        let mut e = Embedding::empty(host);
        let w = e.add_isolated(VertexRef::one(1)).unwrap();
        let before = e.clone();
        let leaf = e.attach_leaf(w, 2).unwrap();
        assert_eq!(e.fresh(VertexRef::one(0)), 2);
        e.check_invariants().unwrap();
        e.remove_vertex(leaf).unwrap();
        assert_eq!(e.pairs(), before.pairs());
        e.check_invariants().unwrap();
    }

    #[test]
    fn tsv_round_trip() {
        let host = Arc::new(BipartiteGraph::complete(2, 2));
        let mut e = Embedding::empty(host);
        let w = e.add_isolated(VertexRef::one(1)).unwrap();
        e.attach_leaf(w, 0).unwrap();
        let tsv = e.to_tsv();
        assert_eq!(tsv, "1\t0\t1\t1\n2\t0\t2\t0\n");
        assert_eq!(parse_tsv(tsv.as_bytes()).unwrap(), e.pairs());
    }
}
