#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use bisubdiv::{BipartiteGraph, Embedding, PartId, VertexRef};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_host(rng: &mut ChaCha8Rng, n1: usize, n2: usize, p: f64) -> BipartiteGraph {
    let mut edges = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    BipartiteGraph::from_edges(n1, n2, edges).unwrap()
}

/// A random forest embedded into `host`: isolated vertices and leaves
/// attached along host edges, at most `per_part` pattern vertices per part
/// and pattern degree at most `max_deg`.
pub fn random_embedding(
    rng: &mut ChaCha8Rng,
    host: Arc<BipartiteGraph>,
    per_part: usize,
    max_deg: usize,
    steps: usize,
) -> Embedding {
    let mut e = Embedding::empty(host.clone());
    for _ in 0..steps {
        let present: Vec<VertexRef> = e.pattern().vertices().collect();
        let grow = !present.is_empty() && rng.random_bool(0.6);
        if grow {
            let w = *present.choose(rng).unwrap();
            if e.pattern().degree(w) >= max_deg
                || e.pattern().present_count(w.part.other()) >= per_part
            {
                continue;
            }
            let hw = e.image_of(w).unwrap();
            let free: Vec<usize> = host
                .row(hw)
                .iter()
                .filter(|&y| !e.image(w.part.other()).contains(y))
                .collect();
            if let Some(&a) = free.choose(rng) {
                e.attach_leaf(w, a).unwrap();
            }
        } else {
            let part = if rng.random_bool(0.5) {
                PartId::One
            } else {
                PartId::Two
            };
            if e.pattern().present_count(part) >= per_part {
                continue;
            }
            let free: Vec<usize> = (0..host.size(part))
                .filter(|&x| !e.image(part).contains(x))
                .collect();
            if let Some(&h) = free.choose(rng) {
                e.add_isolated(VertexRef::new(part, h)).unwrap();
            }
        }
    }
    e
}

/// Deficiency recomputed from nothing but the host adjacency, the list of
/// (pattern, host) pairs and the pattern edge list.
pub struct Oracle {
    host: Arc<BipartiteGraph>,
    image: [Vec<bool>; 2],
    pat_degree: [Vec<i64>; 2],
}

impl Oracle {
    pub fn new(e: &Embedding) -> Self {
        let host = e.host_arc().clone();
        let mut image = [vec![false; host.size1()], vec![false; host.size2()]];
        let mut pat_degree = [vec![0i64; host.size1()], vec![0i64; host.size2()]];
        let mut to_host: HashMap<VertexRef, VertexRef> = HashMap::new();
        for (pv, hv) in e.pairs() {
            image[hv.part.idx()][hv.index] = true;
            to_host.insert(pv, hv);
        }
        for (u, v) in e.pattern().edges() {
            for w in [u, v] {
                let h = to_host[&w];
                pat_degree[h.part.idx()][h.index] += 1;
            }
        }
        Oracle {
            host,
            image,
            pat_degree,
        }
    }

    /// `R(X)` for the set of part-`part` vertices whose bits are set in `mask`.
    pub fn r(&self, part: PartId, mask: u64, d: usize) -> i64 {
        let other = part.other();
        let mut fresh = 0i64;
        for y in 0..self.host.size(other) {
            if self.image[other.idx()][y] {
                continue;
            }
            let hit = (0..self.host.size(part)).any(|x| {
                mask >> x & 1 == 1
                    && self
                        .host
                        .has_edge(VertexRef::new(part, x), VertexRef::new(other, y))
            });
            fresh += i64::from(hit);
        }
        let mut need = 0i64;
        for x in 0..self.host.size(part) {
            if mask >> x & 1 == 1 {
                need += d as i64 - self.pat_degree[part.idx()][x]
                    + i64::from(self.image[part.idx()][x]);
            }
        }
        fresh - need
    }

    /// Minimum of `R` over nonempty single-part sets of size at most `n`.
    pub fn min_r(&self, n: usize, d: usize) -> i64 {
        let mut best = i64::MAX;
        for part in PartId::BOTH {
            let size = self.host.size(part);
            for mask in 1u64..(1 << size) {
                if mask.count_ones() as usize <= n {
                    best = best.min(self.r(part, mask, d));
                }
            }
        }
        best
    }
}

pub fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}
