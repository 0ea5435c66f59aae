//! Maximal free subsets: `B ⊆ Y` with `B⁻¹B ∩ X = ∅`, maximal in `Y`.

use super::{Ambient, GroupError, PointSet};

fn clashes<G: Ambient>(g: &G, a: &G::Elem, b: &G::Elem, x: &PointSet<G::Elem>) -> Result<bool, GroupError> {
    let ab = g.compose(&g.invert(a)?, b)?;
    if x.contains(&ab) {
        return Ok(true);
    }
    Ok(x.contains(&g.invert(&ab)?))
}

/// Greedy in the canonical order of `y`: an element is kept when it does not
/// clash with anything kept so far.
pub fn maximal_free_set<G: Ambient>(
    g: &G,
    y: &PointSet<G::Elem>,
    x: &PointSet<G::Elem>,
) -> Result<PointSet<G::Elem>, GroupError> {
    y.check_same_ambient(x)?;
    if x.contains(&g.identity()) {
        return Err(GroupError::ContainsIdentity);
    }
    let mut kept: Vec<G::Elem> = Vec::new();
    for cand in y.iter() {
        let mut ok = true;
        for b in &kept {
            if clashes(g, b, cand, x)? {
                ok = false;
                break;
            }
        }
        if ok {
            kept.push(cand.clone());
        }
    }
    Ok(PointSet::new(g, kept, y.region().clone()))
}

/// `b⁻¹c ∉ X` for all distinct `b, c ∈ B`.
pub fn is_free<G: Ambient>(g: &G, b: &PointSet<G::Elem>, x: &PointSet<G::Elem>) -> Result<bool, GroupError> {
    for (i, p) in b.iter().enumerate() {
        for q in b.iter().skip(i + 1) {
            if clashes(g, p, q, x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Free, and `Y ⊆ B ∪ B·X`.
pub fn is_maximal_free<G: Ambient>(
    g: &G,
    y: &PointSet<G::Elem>,
    b: &PointSet<G::Elem>,
    x: &PointSet<G::Elem>,
) -> Result<bool, GroupError> {
    if !b.iter().all(|e| y.contains(e)) || !is_free(g, b, x)? {
        return Ok(false);
    }
    for cand in y.iter().filter(|c| !b.contains(c)) {
        let mut reached = false;
        for e in b.iter() {
            if x.contains(&g.compose(&g.invert(e)?, cand)?) {
                reached = true;
                break;
            }
        }
        if !reached {
            return Ok(false);
        }
    }
    Ok(true)
}
