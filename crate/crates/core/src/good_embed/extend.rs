use serde::{Deserialize, Serialize};

use crate::bigraph::{PartId, VertexRef};
use crate::error::{Error, Result};
use crate::search::Budget;

use super::embedding::Embedding;
use super::goodness::{verify_good, GoodnessMode, PartSearch};

/// How a candidate image for a new leaf is vetted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtendMode {
    /// Full `(2n, D)`-goodness check of the extended embedding.
    Certified,
    /// Only sets of size `≤ s_max` whose deficiency the new leaf can change.
    Greedy { s_max: usize },
}

impl Default for ExtendMode {
    fn default() -> Self {
        ExtendMode::Greedy { s_max: 2 }
    }
}

/// A successful leaf extension.
#[derive(Clone, Debug)]
pub struct Extension {
    pub embedding: Embedding,
    pub leaf: VertexRef,
    pub image: VertexRef,
    /// Candidates examined, including the accepted one.
    pub tried: usize,
}

/// Candidate images for a leaf at `w`: unused neighbours of `φ(w)` by
/// descending fresh degree, then ascending index.
pub fn leaf_candidates(emb: &Embedding, w: VertexRef) -> Result<Vec<usize>> {
    let hw = emb.image_of(w).ok_or(Error::InvalidVertex(w))?;
    let other = w.part.other();
    let mut ys: Vec<usize> = emb
        .host()
        .row(hw)
        .iter()
        .filter(|&y| !emb.image(other).contains(y))
        .collect();
    ys.sort_by_key(|&y| (std::cmp::Reverse(emb.fresh(VertexRef::new(other, y))), y));
    Ok(ys)
}

/// Adds a pendant vertex at `w` while keeping the embedding good.
///
/// `n` and `degree` are the pattern's `(n, D)`-bipartite parameters; goodness
/// is judged at `(2n, D)`.
pub fn extend_leaf(
    emb: &Embedding,
    w: VertexRef,
    n: usize,
    degree: usize,
    mode: ExtendMode,
    budget: &mut Budget,
) -> Result<Extension> {
    if !emb.pattern().is_present(w) {
        return Err(Error::InvalidVertex(w));
    }
    let dw = emb.pattern().degree(w);
    if dw + 1 > degree {
        return Err(Error::DegreeTooHigh {
            v: w,
            degree: dw,
            limit: degree.saturating_sub(1),
        });
    }
    let leaf_part = w.part.other();
    let count = emb.pattern().present_count(leaf_part) + 1;
    if count > n {
        return Err(Error::PatternBoundExceeded {
            part: leaf_part,
            count,
            bound: n,
        });
    }
    let cands = leaf_candidates(emb, w)?;
    if cands.is_empty() {
        return Err(Error::NoCandidate { w });
    }
    let hw = emb.image_of(w).expect("checked above");

    let local = match mode {
        ExtendMode::Greedy { s_max } => Some(LocalCheck::new(emb, hw, degree, s_max.min(2 * n))),
        ExtendMode::Certified => None,
    };
    for (k, &a) in cands.iter().enumerate() {
        let ok = match &local {
            Some(lc) => lc.accepts(emb, a, budget)?,
            None => true,
        };
        if !ok {
            continue;
        }
        let mut next = emb.clone();
        let leaf = next.attach_leaf(w, a)?;
        if local.is_none() {
            let rep = verify_good(&next, 2 * n, degree, GoodnessMode::Exhaustive, budget)?;
            if !rep.good {
                continue;
            }
        }
        return Ok(Extension {
            embedding: next,
            leaf,
            image: VertexRef::new(leaf_part, a),
            tried: k + 1,
        });
    }
    Err(Error::NoGoodCandidate {
        w,
        tried: cands.len(),
    })
}

/// Sets `X` in the part of `φ(w)` that the new leaf `a` can hurt: those
/// meeting `N(a)` but avoiding `φ(w)`. Mapping `a` removes it from their
/// fresh neighbourhoods and leaves every other set's deficiency unchanged or
/// larger.
struct LocalCheck {
    search: PartSearch,
    cands: Vec<usize>,
    s_max: usize,
}

impl LocalCheck {
    fn new(emb: &Embedding, hw: VertexRef, degree: usize, s_max: usize) -> Self {
        let search = PartSearch::new(emb, hw.part, degree);
        let cands = (0..emb.host().size(hw.part))
            .filter(|&x| x != hw.index)
            .collect();
        LocalCheck {
            search,
            cands,
            s_max,
        }
    }

    fn accepts(&self, emb: &Embedding, a: usize, budget: &mut Budget) -> Result<bool> {
        let part: PartId = self.search.part;
        let nbrs = emb.host().row(VertexRef::new(part.other(), a));
        let hi = self.s_max.min(self.cands.len());
        let bad = self
            .search
            .first_violation(&self.cands, Some(nbrs), 1, hi, 1, budget)?;
        Ok(bad.is_none())
    }
}

/// Deletes the listed pattern vertices in order; each must have degree at
/// most one when reached.
pub fn prune(emb: &Embedding, order: &[VertexRef]) -> Result<Embedding> {
    let mut next = emb.clone();
    for &v in order {
        next.remove_vertex(v)?;
    }
    Ok(next)
}
