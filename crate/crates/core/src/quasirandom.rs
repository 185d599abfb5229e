//! Binomial random bipartite hosts and post-hoc certificates for the two
//! quasirandomness properties: global edge density and discrepancy over all
//! large pairs `U ⊆ V₁`, `W ⊆ V₂`.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigraph::{BipartiteGraph, PartId, VertexSet};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::rng;
use crate::search::{binomial, Budget};

/// Parameters of a quasirandomness certificate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiParams {
    /// Part size `N`.
    pub n_part: usize,
    pub p: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Discrepancy size threshold `c₃n`, as a vertex count.
    pub c3n: usize,
}

impl QuasiParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.p > 0.0 && self.p <= 1.0) {
            return bad(format!("p must lie in (0, 1], got {}", self.p));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return bad(format!(
                "epsilon must lie in (0, 1/2], got {}",
                self.epsilon
            ));
        }
        if !(self.delta > 0.0 && self.delta <= 1.5) {
            return bad(format!("delta must lie in (0, 3/2], got {}", self.delta));
        }
        if self.c3n < 1 || self.c3n > self.n_part {
            return bad(format!(
                "threshold must satisfy 1 <= c3n <= N, got {} with N = {}",
                self.c3n, self.n_part
            ));
        }
        Ok(())
    }
}

fn sample_row(n: usize, p: f64, seed: u64, i: usize) -> Bits {
    let mut row = Bits::new(n);
    for j in 0..n {
        if rng::pair_unit(seed, i as u64, j as u64) < p {
            row.insert(j);
        }
    }
    row
}

/// Samples `G(N, N, p)`. Pair `(i, j)` is an edge iff the counter-based
/// uniform for `(seed, i, j)` is below `p`; rows are generated in parallel.
pub fn sample_host(n: usize, p: f64, seed: u64) -> BipartiteGraph {
    let rows: Vec<Bits> = (0..n)
        .into_par_iter()
        .map(|i| sample_row(n, p, seed, i))
        .collect();
    BipartiteGraph::from_part1_rows(n, n, rows)
}

/// Same distribution and output as [`sample_host`], one row at a time.
pub fn sample_host_sequential(n: usize, p: f64, seed: u64) -> BipartiteGraph {
    let rows: Vec<Bits> = (0..n).map(|i| sample_row(n, p, seed, i)).collect();
    BipartiteGraph::from_part1_rows(n, n, rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub pass: bool,
    pub edges: usize,
    pub lower: f64,
    pub upper: f64,
}

/// `(1 − n^{ε−1/2})·pN² ≤ e(G) ≤ (1 + n^{ε−1/2})·pN²`.
pub fn check_density(g: &BipartiteGraph, q: &QuasiParams, n: usize) -> Result<DensityReport> {
    if g.size1() != q.n_part || g.size2() != q.n_part {
        return Err(Error::InvalidParameter(format!(
            "host parts are {}+{}, parameters say N = {}",
            g.size1(),
            g.size2(),
            q.n_part
        )));
    }
    let mean = q.p * (q.n_part as f64).powi(2);
    let slack = (n as f64).powf(q.epsilon - 0.5);
    let lower = (1.0 - slack) * mean;
    let upper = (1.0 + slack) * mean;
    let e = g.edge_count() as f64;
    Ok(DensityReport {
        pass: lower <= e && e <= upper,
        edges: g.edge_count(),
        lower,
        upper,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiscrepancyMode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

impl DiscrepancyMode {
    pub const DEFAULT_TRIALS: usize = 10_000;

    pub fn sampled(seed: u64) -> Self {
        DiscrepancyMode::Sampled {
            trials: Self::DEFAULT_TRIALS,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub pass: bool,
    /// Number of `(U, W)` pairs covered (saturating).
    pub checked_pairs: u64,
    pub max_deviation: f64,
    #[serde(rename = "worst_U")]
    pub worst_u: VertexSet,
    #[serde(rename = "worst_W")]
    pub worst_w: VertexSet,
    pub mode: DiscrepancyMode,
}

/// `|e(U,W) − p·u·w| / (p·u·w)`
pub fn relative_deviation(e: usize, p: f64, u: usize, w: usize) -> f64 {
    let expect = p * u as f64 * w as f64;
    (e as f64 - expect).abs() / expect
}

pub fn check_discrepancy(
    g: &BipartiteGraph,
    q: &QuasiParams,
    mode: DiscrepancyMode,
    budget: &mut Budget,
) -> Result<DiscrepancyReport> {
    q.validate()?;
    if g.size1() != q.n_part || g.size2() != q.n_part {
        return Err(Error::InvalidParameter(format!(
            "host parts are {}+{}, parameters say N = {}",
            g.size1(),
            g.size2(),
            q.n_part
        )));
    }
    let (dev, u, w, checked) = match mode {
        DiscrepancyMode::Exhaustive => exhaustive(g, q, budget)?,
        DiscrepancyMode::Sampled { trials, seed } => sampled(g, q, trials, seed),
    };
    Ok(DiscrepancyReport {
        pass: dev <= q.delta,
        checked_pairs: checked,
        max_deviation: dev,
        worst_u: VertexSet::new(PartId::One, u),
        worst_w: VertexSet::new(PartId::Two, w),
        mode,
    })
}

type Worst = (f64, Vec<usize>, Vec<usize>, u64);

/// For a fixed `U`, `e(U, W)` over `|W| = w` is extremal when `W` collects the
/// `w` largest (or smallest) values of `|N(x) ∩ U|`, so one sort per `U`
/// covers every `W`.
fn exhaustive(g: &BipartiteGraph, q: &QuasiParams, budget: &mut Budget) -> Result<Worst> {
    let n = q.n_part;
    if n > 63 {
        return Err(Error::EnumerationBudgetExceeded {
            budget: budget.limit(),
        });
    }
    let sides: u64 = (q.c3n..=n)
        .map(|k| binomial(n as u64, k as u64))
        .fold(0, u64::saturating_add);
    let checked = sides.saturating_mul(sides);
    let rows2 = g.rows(PartId::Two);
    let mut best: Option<(f64, u64, Vec<usize>)> = None;
    for mask in 0u64..(1u64 << n) {
        let u = mask.count_ones() as usize;
        if u < q.c3n {
            continue;
        }
        budget.tick()?;
        let mut deg: Vec<(usize, usize)> = (0..n)
            .map(|x| ((rows2[x].word(0) & mask).count_ones() as usize, x))
            .collect();
        // descending count, ascending index
        deg.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut hi = 0usize;
        let mut prefix_hi = vec![0usize; n + 1];
        for (k, &(d, _)) in deg.iter().enumerate() {
            hi += d;
            prefix_hi[k + 1] = hi;
        }
        let total = hi;
        for w in q.c3n..=n {
            let e_max = prefix_hi[w];
            let e_min = total - prefix_hi[n - w];
            for (e, top) in [(e_max, true), (e_min, false)] {
                let d = relative_deviation(e, q.p, u, w);
                if best.as_ref().is_none_or(|(b, _, _)| d > *b) {
                    let ws: Vec<usize> = if top {
                        deg[..w].iter().map(|&(_, x)| x).collect()
                    } else {
                        deg[n - w..].iter().map(|&(_, x)| x).collect()
                    };
                    best = Some((d, mask, ws));
                }
            }
        }
    }
    let (dev, mask, ws) = best.unwrap_or((0.0, 0, Vec::new()));
    let us = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
    Ok((dev, us, ws, checked))
}

fn sampled(g: &BipartiteGraph, q: &QuasiParams, trials: usize, seed: u64) -> Worst {
    let n = q.n_part;
    let mut r = rng::stream(seed);
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    for _ in 0..trials {
        let u = r.random_range(q.c3n..=n);
        let w = r.random_range(q.c3n..=n);
        let us = sample(&mut r, n, u).into_vec();
        let ws = sample(&mut r, n, w).into_vec();
        let uset = VertexSet::new(PartId::One, us);
        let wset = VertexSet::new(PartId::Two, ws);
        let e = g.edge_count_between(&uset, &wset);
        let d = relative_deviation(e, q.p, u, w);
        if best.as_ref().is_none_or(|(b, _, _)| d > *b) {
            best = Some((d, uset.members, wset.members));
        }
    }
    let (dev, us, ws) = best.unwrap_or((0.0, Vec::new(), Vec::new()));
    (dev, us, ws, trials as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, p: f64, c3n: usize) -> QuasiParams {
        QuasiParams {
            n_part: n,
            p,
            epsilon: 0.25,
            delta: 0.5,
            c3n,
        }
    }

    #[test]
    fn extreme_probabilities() {
        assert_eq!(sample_host(10, 0.0, 3).edge_count(), 0);
        assert_eq!(sample_host(10, 1.0, 3), BipartiteGraph::complete(10, 10));
    }

    #[test]
    fn sampling_is_seeded_and_schedule_independent() {
        let a = sample_host(40, 0.3, 99);
        assert_eq!(a, sample_host(40, 0.3, 99));
        assert_eq!(a, sample_host_sequential(40, 0.3, 99));
        assert_ne!(a, sample_host(40, 0.3, 100));
    }

    #[test]
    fn edge_count_near_binomial_mean() {
        // mean N²p = 2048, sd sqrt(N²p(1-p)) = 32
        let g = sample_host(64, 0.5, 2024);
        let e = g.edge_count();
        assert!((1920..=2176).contains(&e), "{e}");
    }

    #[test]
    fn density_window() {
        let k = BipartiteGraph::complete(8, 8);
        assert!(check_density(&k, &params(8, 1.0, 4), 8).unwrap().pass);
        let empty = BipartiteGraph::new(8, 8);
        assert!(!check_density(&empty, &params(8, 0.5, 4), 8).unwrap().pass);

        let g = sample_host(64, 0.5, 7);
        let r = check_density(&g, &params(64, 0.5, 8), 64).unwrap();
        // 2048·(1 ± 64^{-1/4})
        assert!((r.lower - 1_323.922_656_06).abs() < 1e-6, "{}", r.lower);
        assert!((r.upper - 2_772.077_343_94).abs() < 1e-6, "{}", r.upper);
        let e = g.edge_count() as f64;
        assert_eq!(r.pass, r.lower <= e && e <= r.upper);
    }

    #[test]
    fn density_monotone_in_epsilon() {
        let g = sample_host(32, 0.4, 5);
        let mut prev = false;
        for k in 1..=10 {
            let mut q = params(32, 0.4, 4);
            q.epsilon = k as f64 * 0.05;
            let pass = check_density(&g, &q, 32).unwrap().pass;
            assert!(
                pass || !prev,
                "pass flipped to fail at epsilon {}",
                q.epsilon
            );
            prev = pass;
        }
    }

    #[test]
    fn discrepancy_trivial_cases() {
        let k = BipartiteGraph::complete(8, 8);
        let r = check_discrepancy(
            &k,
            &params(8, 1.0, 3),
            DiscrepancyMode::Exhaustive,
            &mut Budget::default(),
        )
        .unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert!(r.pass);

        let empty = BipartiteGraph::new(8, 8);
        let mut q = params(8, 0.5, 3);
        q.delta = 1.5;
        let r = check_discrepancy(
            &empty,
            &q,
            DiscrepancyMode::Exhaustive,
            &mut Budget::default(),
        )
        .unwrap();
        assert_eq!(r.max_deviation, 1.0);
        assert!(r.pass, "1 <= 3/2");
        q.delta = 0.9;
        let r = check_discrepancy(
            &empty,
            &q,
            DiscrepancyMode::sampled(1),
            &mut Budget::default(),
        )
        .unwrap();
        assert!(!r.pass);
        assert_eq!(r.checked_pairs, 10_000);
    }

    #[test]
    fn invalid_params_rejected() {
        let k = BipartiteGraph::complete(4, 4);
        let mut q = params(4, 1.0, 5);
        assert!(
            check_discrepancy(&k, &q, DiscrepancyMode::Exhaustive, &mut Budget::default()).is_err()
        );
        q.c3n = 2;
        q.p = 0.0;
        assert!(
            check_discrepancy(&k, &q, DiscrepancyMode::Exhaustive, &mut Budget::default()).is_err()
        );
    }
}
