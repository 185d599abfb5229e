//! Budgeted branch-and-bound enumeration of vertex subsets.
//!
//! Every certifier in the crate reduces to the same shape of search: walk the
//! subsets of a candidate list in lexicographic order, keep the union of one
//! bit row per chosen vertex plus a running integer weight, and stop at the
//! first subset satisfying a predicate. Pruning callbacks must be sound: they
//! may only cut a branch when no extension of the current prefix (within the
//! size window) can be accepted. Under that contract the first accepted subset
//! is exactly the lexicographically least one.

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Default cap on visited search nodes.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Counts visited subsets and fails once the cap is exceeded.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::EnumerationBudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// Snapshot of a partial subset handed to the predicates.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    /// `|⋃ rows[x]|` over the chosen vertices.
    pub union: usize,
    /// Sum of the chosen vertices' weights.
    pub weight: i64,
    /// Number of chosen vertices.
    pub size: usize,
    /// Whether some chosen vertex lies in the `require` mask.
    pub hit: bool,
}

pub struct UnionSearch<'a> {
    /// One row per vertex index (indexed by vertex, not by candidate slot).
    pub rows: &'a [Bits],
    /// Per-vertex weight; zero when absent.
    pub weights: Option<&'a [i64]>,
    /// Candidate vertices in increasing order.
    pub candidates: &'a [usize],
    /// When set, only subsets meeting this mask are accepted.
    pub require: Option<&'a Bits>,
    /// Row width.
    pub width: usize,
}

impl<'a> UnionSearch<'a> {
    /// Lexicographically first subset with `min_size <= |X| <= max_size`
    /// accepted by `accept`. Subsets are visited in pre-order, so for
    /// `min_size == max_size` the result is the least subset of that size.
    pub fn first<P, A>(
        &self,
        min_size: usize,
        max_size: usize,
        budget: &mut Budget,
        prune: P,
        accept: A,
    ) -> Result<Option<Vec<usize>>>
    where
        P: Fn(&Node) -> bool,
        A: Fn(&Node) -> bool,
    {
        let max_size = max_size.min(self.candidates.len());
        if min_size > max_size {
            return Ok(None);
        }
        let mut unions: Vec<Bits> = (0..=max_size).map(|_| Bits::new(self.width)).collect();
        let mut weights = vec![0i64; max_size + 1];
        let mut hits = vec![false; max_size + 1];
        let mut chosen = Vec::with_capacity(max_size);
        let mut ctx = Ctx {
            search: self,
            min_size,
            max_size,
            unions: &mut unions,
            weights: &mut weights,
            hits: &mut hits,
            chosen: &mut chosen,
            budget,
            prune: &prune,
            accept: &accept,
        };
        if ctx.dfs(0, 0)? {
            Ok(Some(chosen))
        } else {
            Ok(None)
        }
    }
}

struct Ctx<'s, 'a, P, A> {
    search: &'s UnionSearch<'a>,
    min_size: usize,
    max_size: usize,
    unions: &'s mut Vec<Bits>,
    weights: &'s mut Vec<i64>,
    hits: &'s mut Vec<bool>,
    chosen: &'s mut Vec<usize>,
    budget: &'s mut Budget,
    prune: &'s P,
    accept: &'s A,
}

impl<P, A> Ctx<'_, '_, P, A>
where
    P: Fn(&Node) -> bool,
    A: Fn(&Node) -> bool,
{
    fn dfs(&mut self, start: usize, depth: usize) -> Result<bool> {
        let cands = self.search.candidates;
        let need = self.min_size.saturating_sub(depth + 1);
        let mut slot = start;
        while slot < cands.len() && cands.len() - slot > need {
            let v = cands[slot];
            self.budget.tick()?;
            {
                let (lo, hi) = self.unions.split_at_mut(depth + 1);
                hi[0].clone_from(&lo[depth]);
                hi[0].union_with(&self.search.rows[v]);
            }
            let w = self.search.weights.map_or(0, |ws| ws[v]);
            self.weights[depth + 1] = self.weights[depth] + w;
            let hit = self.hits[depth] || self.search.require.is_some_and(|m| m.contains(v));
            self.hits[depth + 1] = hit;
            self.chosen.push(v);
            let node = Node {
                union: self.unions[depth + 1].count(),
                weight: self.weights[depth + 1],
                size: depth + 1,
                hit,
            };
            if node.size >= self.min_size
                && (self.search.require.is_none() || hit)
                && (self.accept)(&node)
            {
                return Ok(true);
            }
            if node.size < self.max_size && !(self.prune)(&node) && self.dfs(slot + 1, depth + 1)? {
                return Ok(true);
            }
            self.chosen.pop();
            slot += 1;
        }
        Ok(false)
    }
}

/// `C(n, k)` saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Iterator over the `k`-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            cur: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - k + i {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn first_matches_plain_enumeration() {
        // rows: vertex i covers {i, i+1}
        let rows: Vec<Bits> = (0..6).map(|i| Bits::from_indices(7, [i, i + 1])).collect();
        let cands: Vec<usize> = (0..6).collect();
        let s = UnionSearch {
            rows: &rows,
            weights: None,
            candidates: &cands,
            require: None,
            width: 7,
        };
        // first 3-set whose union has exactly 4 elements
        let got = s
            .first(3, 3, &mut Budget::default(), |_| false, |n| n.union == 4)
            .unwrap();
        let want = Combinations::new(6, 3).find(|c| {
            let mut u = Bits::new(7);
            for &v in c {
                u.union_with(&rows[v]);
            }
            u.count() == 4
        });
        assert_eq!(got, want);
        assert_eq!(got, Some(vec![0, 1, 2]));
    }

    #[test]
    fn budget_is_enforced() {
        let rows: Vec<Bits> = (0..20).map(|_| Bits::new(1)).collect();
        let cands: Vec<usize> = (0..20).collect();
        let s = UnionSearch {
            rows: &rows,
            weights: None,
            candidates: &cands,
            require: None,
            width: 1,
        };
        let err = s
            .first(1, 5, &mut Budget::new(100), |_| false, |_| false)
            .unwrap_err();
        assert!(matches!(
            err,
            Error::EnumerationBudgetExceeded { budget: 100 }
        ));
    }
}
