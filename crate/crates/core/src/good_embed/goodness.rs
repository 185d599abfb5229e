use serde::{Deserialize, Serialize};

use crate::bigraph::{PartId, VertexRef, VertexSet};
use crate::bits::Bits;
use crate::error::Result;
use crate::search::{Budget, UnionSearch};

use super::embedding::Embedding;

/// How far `verify_good` looks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "max_size", rename_all = "snake_case")]
pub enum GoodnessMode {
    Exhaustive,
    /// Only sets up to the given size.
    Capped(usize),
}

/// A set on which the goodness inequality fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficiencyWitness {
    pub x: VertexSet,
    pub r_value: i64,
    pub n_bound: usize,
    pub d_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodnessReport {
    pub good: bool,
    pub witness: Option<DeficiencyWitness>,
    /// Largest set size examined.
    pub checked_up_to: usize,
    /// True when a cap stopped the search short of `n`.
    pub partial: bool,
}

/// Search state for one part: rows `N(x) ∖ image` and demands.
pub(crate) struct PartSearch {
    pub part: PartId,
    pub rows: Vec<Bits>,
    pub need: Vec<i64>,
    pub max_need: i64,
    pub width: usize,
}

impl PartSearch {
    pub fn new(emb: &Embedding, part: PartId, degree: usize) -> Self {
        let rows = emb.fresh_rows(part);
        let need: Vec<i64> = (0..rows.len())
            .map(|i| emb.need(VertexRef::new(part, i), degree))
            .collect();
        let max_need = need.iter().copied().max().unwrap_or(0).max(0);
        PartSearch {
            part,
            rows,
            need,
            max_need,
            width: emb.host().size(part.other()),
        }
    }

    /// Lexicographically first violating set of size in `lo..=hi` among
    /// `cands`. `slack` is subtracted from `R` (used by the local check).
    pub fn first_violation(
        &self,
        cands: &[usize],
        require: Option<&Bits>,
        lo: usize,
        hi: usize,
        slack: i64,
        budget: &mut Budget,
    ) -> Result<Option<Vec<usize>>> {
        let search = UnionSearch {
            rows: &self.rows,
            weights: Some(&self.need),
            candidates: cands,
            require,
            width: self.width,
        };
        let max_need = self.max_need;
        search.first(
            lo,
            hi,
            budget,
            |node| {
                let r = node.union as i64 - node.weight - slack;
                r - max_need * (hi - node.size) as i64 >= 0
            },
            |node| node.union as i64 - node.weight - slack < 0,
        )
    }

    pub fn value(&self, members: &[usize]) -> i64 {
        let mut u = Bits::new(self.width);
        for &m in members {
            u.union_with(&self.rows[m]);
        }
        u.count() as i64 - members.iter().map(|&m| self.need[m]).sum::<i64>()
    }
}

/// Checks `R(X) ≥ 0` for every `X` inside one part with `1 ≤ |X| ≤ n`. On
/// failure the witness is of minimum size, part 1 before part 2, then
/// lexicographically least.
pub fn verify_good(
    emb: &Embedding,
    n: usize,
    degree: usize,
    mode: GoodnessMode,
    budget: &mut Budget,
) -> Result<GoodnessReport> {
    let (limit, partial) = match mode {
        GoodnessMode::Exhaustive => (n, false),
        GoodnessMode::Capped(c) => (n.min(c), c < n),
    };
    let searches: Vec<PartSearch> = PartId::BOTH
        .iter()
        .map(|&p| PartSearch::new(emb, p, degree))
        .collect();
    let cands: Vec<Vec<usize>> = searches
        .iter()
        .map(|s| (0..s.rows.len()).collect())
        .collect();

    let mut smallest: Option<usize> = None;
    for (s, c) in searches.iter().zip(&cands) {
        let hi = limit.min(c.len());
        if let Some(x) = s.first_violation(c, None, 1, hi, 0, budget)? {
            smallest = Some(smallest.map_or(x.len(), |m: usize| m.min(x.len())));
        }
    }
    let Some(smallest) = smallest else {
        return Ok(GoodnessReport {
            good: true,
            witness: None,
            checked_up_to: limit,
            partial,
        });
    };
    for size in 1..=smallest {
        for (s, c) in searches.iter().zip(&cands) {
            if size > c.len() {
                continue;
            }
            if let Some(x) = s.first_violation(c, None, size, size, 0, budget)? {
                let r_value = s.value(&x);
                return Ok(GoodnessReport {
                    good: false,
                    witness: Some(DeficiencyWitness {
                        x: VertexSet::new(s.part, x),
                        r_value,
                        n_bound: n,
                        d_bound: degree,
                    }),
                    checked_up_to: limit,
                    partial,
                });
            }
        }
    }
    unreachable!("a violation of size {smallest} was found in the fast pass")
}
