use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::bigraph::{BipartiteGraph, PartId, VertexSet};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, pair_hash, stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColoringStrategy {
    /// Independent uniform colours.
    UniformRandom { seed: u64 },
    /// Colour 1 on a random `⌈αN⌉ × ⌈αN⌉` pair, colour 0 elsewhere.
    BicliqueBlank { seed: u64 },
    /// Colours `0, 1, …, r-1, 0, …` along the canonical edge order.
    RoundRobin,
}

impl ColoringStrategy {
    /// The same strategy with its seed replaced by a child seed.
    pub fn reseeded(self, stream_id: u64) -> Self {
        match self {
            ColoringStrategy::UniformRandom { seed } => ColoringStrategy::UniformRandom {
                seed: derive_seed(seed, stream_id),
            },
            ColoringStrategy::BicliqueBlank { seed } => ColoringStrategy::BicliqueBlank {
                seed: derive_seed(seed, stream_id),
            },
            ColoringStrategy::RoundRobin => ColoringStrategy::RoundRobin,
        }
    }
}

/// One colour per edge, in the canonical (lexicographic) edge order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub r: usize,
    pub colors: Vec<u32>,
    /// The planted pair of the biclique strategy.
    pub hole: Option<(VertexSet, VertexSet)>,
}

impl Coloring {
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.r];
        for &x in &self.colors {
            c[x as usize] += 1;
        }
        c
    }

    /// Edges of colour `c` as a spanning subgraph of `g`.
    pub fn class(&self, g: &BipartiteGraph, c: u32) -> BipartiteGraph {
        BipartiteGraph::from_edges(
            g.size1(),
            g.size2(),
            g.edges()
                .zip(&self.colors)
                .filter(|(_, &k)| k == c)
                .map(|(e, _)| e),
        )
        .expect("subgraph of a simple graph")
    }
}

pub fn color_edges(
    g: &BipartiteGraph,
    r: usize,
    strategy: ColoringStrategy,
    alpha: Alpha,
) -> Result<Coloring> {
    if r == 0 {
        return Err(Error::InvalidParameter(
            "at least one colour is needed".into(),
        ));
    }
    let mut hole = None;
    let colors = match strategy {
        ColoringStrategy::UniformRandom { seed } => g
            .edges()
            .map(|(i, j)| (pair_hash(seed, i as u64, j as u64) % r as u64) as u32)
            .collect(),
        ColoringStrategy::RoundRobin => (0..g.edge_count()).map(|k| (k % r) as u32).collect(),
        ColoringStrategy::BicliqueBlank { seed } => {
            let pick = |part: PartId| {
                let size = g.size(part);
                let k = alpha.ceil_of(size).min(size);
                let mut rng = stream(derive_seed(seed, part.idx() as u64));
                VertexSet::new(part, sample(&mut rng, size, k))
            };
            let (a, b) = (pick(PartId::One), pick(PartId::Two));
            let inside = |i: usize, j: usize| a.contains(i) && b.contains(j);
            let colors = g
                .edges()
                .map(|(i, j)| u32::from(r > 1 && inside(i, j)))
                .collect();
            hole = Some((a, b));
            colors
        }
    };
    Ok(Coloring { r, colors, hole })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_colour_and_round_robin() {
        let g = BipartiteGraph::complete(2, 3);
        let a = Alpha::reciprocal(4).unwrap();
        let c = color_edges(&g, 1, ColoringStrategy::UniformRandom { seed: 3 }, a).unwrap();
        assert!(c.colors.iter().all(|&x| x == 0));
        let c = color_edges(&g, 3, ColoringStrategy::RoundRobin, a).unwrap();
        assert_eq!(c.colors, vec![0, 1, 2, 0, 1, 2]);
        assert_eq!(c.counts(), vec![2, 2, 2]);
    }

    #[test]
    fn uniform_is_reproducible() {
        let g = BipartiteGraph::complete(20, 20);
        let a = Alpha::reciprocal(4).unwrap();
        let s = ColoringStrategy::UniformRandom { seed: 9 };
        assert_eq!(
            color_edges(&g, 3, s, a).unwrap(),
            color_edges(&g, 3, s, a).unwrap()
        );
    }

    #[test]
    fn hole_is_colour_one() {
        let g = BipartiteGraph::complete(12, 12);
        let a = Alpha::reciprocal(4).unwrap();
        let c = color_edges(&g, 2, ColoringStrategy::BicliqueBlank { seed: 1 }, a).unwrap();
        assert_eq!(c.counts(), vec![144 - 9, 9]);
        let (x, y) = c.hole.clone().unwrap();
        assert_eq!(c.class(&g, 0).edge_count_between(&x, &y), 0);
    }
}
