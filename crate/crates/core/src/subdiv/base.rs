use std::collections::BTreeSet;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple undirected graph `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BaseRepr")]
pub struct BaseGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct BaseRepr {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<BaseRepr> for BaseGraph {
    type Error = Error;

    fn try_from(r: BaseRepr) -> Result<Self> {
        BaseGraph::new(r.vertices, r.edges)
    }
}

impl BaseGraph {
    /// Rejects loops, repeated edges and out-of-range endpoints. Edge order
    /// is kept; each pair is stored as given.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidParameter(format!(
                    "edge {u}-{v} has an endpoint outside 0..{vertices}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidParameter(format!("repeated edge {u}-{v}")));
            }
        }
        Ok(BaseGraph { vertices, edges })
    }

    pub fn single_edge() -> Self {
        BaseGraph::new(2, vec![(0, 1)]).unwrap()
    }

    /// Path with `edges` edges.
    pub fn path(edges: usize) -> Self {
        BaseGraph::new(edges + 1, (0..edges).map(|i| (i, i + 1)).collect()).unwrap()
    }

    /// `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        BaseGraph::new(leaves + 1, (1..=leaves).map(|i| (0, i)).collect()).unwrap()
    }

    pub fn cycle(len: usize) -> Self {
        assert!(len >= 3);
        BaseGraph::new(len, (0..len).map(|i| (i, (i + 1) % len)).collect()).unwrap()
    }

    pub fn complete(k: usize) -> Self {
        let edges = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        BaseGraph::new(k, edges).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

/// Reads `p edge <vertices> <edges>` followed by `e <u> <v>` lines.
pub fn parse_base_graph<R: BufRead>(reader: R) -> Result<BaseGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let err = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["c", ..] => {}
            ["p", "edge", v, e] => {
                if header.is_some() {
                    return Err(err("second header"));
                }
                let v = v.parse().map_err(|_| err("bad vertex count"))?;
                let e = e.parse().map_err(|_| err("bad edge count"))?;
                header = Some((v, e));
            }
            ["e", u, v] => {
                if header.is_none() {
                    return Err(err("edge before header"));
                }
                let u = u.parse().map_err(|_| err("bad endpoint"))?;
                let v = v.parse().map_err(|_| err("bad endpoint"))?;
                edges.push((u, v));
            }
            _ => return Err(err("expected `p edge <v> <e>`, `e <u> <v>` or a comment")),
        }
    }
    let (v, e) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if e != edges.len() {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {e} edges, found {}", edges.len()),
        });
    }
    BaseGraph::new(v, edges)
}

pub fn load_base_graph(path: impl AsRef<Path>) -> Result<BaseGraph> {
    let f = std::fs::File::open(path)?;
    parse_base_graph(std::io::BufReader::new(f))
}

pub fn base_graph_to_string(h: &BaseGraph) -> String {
    let mut s = format!("p edge {} {}\n", h.vertex_count(), h.edge_count());
    for &(u, v) in h.edges() {
        s.push_str(&format!("e {u} {v}\n"));
    }
    s
}

/// `H` together with a path length per edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr")]
pub struct SubdivisionSpec {
    pub base: BaseGraph,
    pub sigma: Vec<usize>,
}

#[derive(Deserialize)]
struct SpecRepr {
    base: BaseGraph,
    sigma: Vec<usize>,
}

impl TryFrom<SpecRepr> for SubdivisionSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        SubdivisionSpec::new(r.base, r.sigma)
    }
}

impl SubdivisionSpec {
    pub fn new(base: BaseGraph, sigma: Vec<usize>) -> Result<Self> {
        if sigma.len() != base.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "{} lengths for {} edges",
                sigma.len(),
                base.edge_count()
            )));
        }
        if let Some(i) = sigma.iter().position(|&s| s == 0) {
            return Err(Error::InvalidParameter(format!("edge {i} has length 0")));
        }
        Ok(SubdivisionSpec { base, sigma })
    }

    pub fn uniform(base: BaseGraph, sigma: usize) -> Result<Self> {
        let m = base.edge_count();
        SubdivisionSpec::new(base, vec![sigma; m])
    }

    /// `|V(H^σ)| = |V(H)| + Σ (σ(e) - 1)`.
    pub fn subdivided_vertex_count(&self) -> usize {
        self.base.vertex_count() + self.sigma.iter().map(|s| s - 1).sum::<usize>()
    }
}

/// Reads `edge,length` rows (an optional `e,len` header is skipped). Every
/// edge of `base` must appear exactly once.
pub fn parse_sigma_csv<R: BufRead>(reader: R, base: &BaseGraph) -> Result<Vec<usize>> {
    let mut sigma: Vec<Option<usize>> = vec![None; base.edge_count()];
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let err = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let Some((e, len)) = t.split_once(',') else {
            return Err(err("expected `edge,length`"));
        };
        let (e, len) = (e.trim(), len.trim());
        if lineno == 1 && e.parse::<usize>().is_err() {
            continue;
        }
        let e: usize = e.parse().map_err(|_| err("bad edge index"))?;
        let len: usize = len.parse().map_err(|_| err("bad length"))?;
        let slot = sigma
            .get_mut(e)
            .ok_or_else(|| err("edge index out of range"))?;
        if slot.replace(len).is_some() {
            return Err(err("edge listed twice"));
        }
    }
    sigma
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| Error::InvalidParameter(format!("no length given for edge {i}")))
        })
        .collect()
}

pub fn load_sigma_csv(path: impl AsRef<Path>, base: &BaseGraph) -> Result<Vec<usize>> {
    let f = std::fs::File::open(path)?;
    parse_sigma_csv(std::io::BufReader::new(f), base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_graph_validation() {
        assert!(BaseGraph::new(2, vec![(0, 0)]).is_err());
        assert!(BaseGraph::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(BaseGraph::new(2, vec![(0, 2)]).is_err());
        assert_eq!(BaseGraph::star(3).max_degree(), 3);
        assert_eq!(BaseGraph::cycle(4).edge_count(), 4);
    }

    #[test]
    fn file_formats() {
        let h =
            parse_base_graph("c triangle\np edge 3 3\ne 0 1\ne 1 2\ne 2 0\n".as_bytes()).unwrap();
        assert_eq!(h, BaseGraph::cycle(3));
        assert_eq!(
            parse_base_graph(base_graph_to_string(&h).as_bytes()).unwrap(),
            h
        );
        let s = parse_sigma_csv("e,len\n2,5\n0,3\n1,4\n".as_bytes(), &h).unwrap();
        assert_eq!(s, vec![3, 4, 5]);
        assert!(parse_sigma_csv("0,3\n".as_bytes(), &h).is_err());
        assert!(matches!(
            parse_base_graph("p edge 2 1\ne 0\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn vertex_count_formula() {
        let spec = SubdivisionSpec::new(BaseGraph::path(2), vec![3, 5]).unwrap();
        assert_eq!(spec.subdivided_vertex_count(), 3 + 2 + 4);
        assert!(SubdivisionSpec::new(BaseGraph::path(2), vec![3, 0]).is_err());
    }
}
