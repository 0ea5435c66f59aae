//! Product sets and covering certificates.

use std::fmt;
use std::hash::Hash;

use serde_json::{json, Value};

use super::{Ambient, GroupError, PointSet};
use crate::arith::Rational;

/// Size and truncation data of a point set, recorded in certificates so a
/// certificate can be matched against the sets it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSummary {
    pub ambient: String,
    pub size: usize,
    pub region: Rational,
}

impl SetSummary {
    pub fn of<E: Clone + Eq + Hash + fmt::Display>(set: &PointSet<E>) -> Self {
        Self { ambient: set.ambient().to_string(), size: set.len(), region: set.region().clone() }
    }
}

/// A finite translate set `F` with `y ∈ X·f` for some `f ∈ F`, for every
/// target `y` of gauge at most `covered_region`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringCertificate<E> {
    pub translates: Vec<E>,
    pub covered_region: Rational,
    pub base: SetSummary,
    pub target: SetSummary,
    pub targets_checked: usize,
    pub validated: bool,
}

impl<E: Clone + Eq + Hash + fmt::Display> CoveringCertificate<E> {
    pub fn len(&self) -> usize {
        self.translates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.translates.is_empty()
    }

    /// Exhaustive re-check against the sets the certificate claims to be
    /// about.
    pub fn validate<G: Ambient<Elem = E>>(
        &self,
        g: &G,
        base: &PointSet<E>,
        target: &PointSet<E>,
    ) -> Result<(), GroupError> {
        if SetSummary::of(base) != self.base || SetSummary::of(target) != self.target {
            return Err(GroupError::AmbientMismatch {
                left: format!("{:?}/{:?}", self.base, self.target),
                right: format!("{:?}/{:?}", SetSummary::of(base), SetSummary::of(target)),
            });
        }
        let inverses = self.translates.iter().map(|f| g.invert(f)).collect::<Result<Vec<_>, _>>()?;
        for y in target.iter().filter(|y| g.within(y, &self.covered_region)) {
            let mut covered = false;
            for finv in &inverses {
                if base.contains(&g.compose(y, finv)?) {
                    covered = true;
                    break;
                }
            }
            if !covered {
                return Err(GroupError::NotCovered { element: y.to_string() });
            }
        }
        Ok(())
    }

    /// Largest translate gauge, as a float.
    pub fn max_translate_gauge<G: Ambient<Elem = E>>(&self, g: &G) -> f64 {
        self.translates.iter().map(|f| g.gauge(f)).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "translates": self.translates.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "region": self.covered_region.to_string(),
            "validated": self.validated,
            "counts": {
                "translates": self.translates.len(),
                "targets_checked": self.targets_checked,
                "base_size": self.base.size,
                "target_size": self.target.size,
            },
            "base": { "ambient": self.base.ambient, "region": self.base.region.to_string() },
            "target": { "ambient": self.target.ambient, "region": self.target.region.to_string() },
        })
    }
}

/// All products `x·y`. The region of the result is the sum of the factor
/// regions, which bounds every product's gauge for the subadditive gauges
/// used here.
pub fn product_set<G: Ambient>(
    g: &G,
    x: &PointSet<G::Elem>,
    y: &PointSet<G::Elem>,
) -> Result<PointSet<G::Elem>, GroupError> {
    x.check_same_ambient(y)?;
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in x.iter() {
        for b in y.iter() {
            out.push(g.compose(a, b)?);
        }
    }
    Ok(PointSet::new(g, out, x.region() + y.region()))
}

/// Greedy covering of `y ∩ {gauge ≤ region}` by right translates `x·f`.
///
/// Targets are scanned in canonical order. For each target not yet covered
/// the translate `x₀⁻¹·y` is added, with `x₀` the first element of `x` (in
/// canonical order) for which that translate stays within the enumeration
/// bound `region + x.region`.
pub fn covering_certificate<G: Ambient>(
    g: &G,
    x: &PointSet<G::Elem>,
    y: &PointSet<G::Elem>,
    region: &Rational,
) -> Result<CoveringCertificate<G::Elem>, GroupError> {
    x.check_same_ambient(y)?;
    let targets: Vec<&G::Elem> = y.iter().filter(|t| g.within(t, region)).collect();
    let cap = region + x.region();
    let mut covered = vec![false; targets.len()];
    let mut translates = Vec::new();

    for i in 0..targets.len() {
        if covered[i] {
            continue;
        }
        let t = targets[i];
        let mut chosen = None;
        for x0 in x.iter() {
            let f = g.compose(&g.invert(x0)?, t)?;
            if g.within(&f, &cap) {
                chosen = Some(f);
                break;
            }
        }
        let f = chosen.ok_or_else(|| GroupError::Uncoverable { element: t.to_string() })?;
        let finv = g.invert(&f)?;
        for (j, s) in targets.iter().enumerate().skip(i) {
            if !covered[j] && x.contains(&g.compose(s, &finv)?) {
                covered[j] = true;
            }
        }
        debug_assert!(covered[i]);
        translates.push(f);
    }

    let mut cert = CoveringCertificate {
        translates,
        covered_region: region.clone(),
        base: SetSummary::of(x),
        target: SetSummary::of(y),
        targets_checked: targets.len(),
        validated: false,
    };
    cert.validate(g, x, y)?;
    cert.validated = true;
    Ok(cert)
}

/// Certifies that `x·x`, restricted to gauge at most `interior`, is covered
/// by finitely many translates of `x`. Symmetry of `x` is checked first.
pub fn verify_approximate_subgroup<G: Ambient>(
    g: &G,
    x: &PointSet<G::Elem>,
    interior: &Rational,
) -> Result<CoveringCertificate<G::Elem>, GroupError> {
    if let Some(witness) = x.symmetry_witness(g)? {
        return Err(GroupError::NotSymmetric { witness });
    }
    let xx = product_set(g, x, x)?;
    covering_certificate(g, x, &xx, interior)
}

/// Both directions of a commensurability check on a common region.
#[derive(Clone, Debug, PartialEq)]
pub struct Commensurability<E> {
    /// `X` covered by translates of `Y`.
    pub x_by_y: CoveringCertificate<E>,
    /// `Y` covered by translates of `X`.
    pub y_by_x: CoveringCertificate<E>,
}

impl<E: Clone + Eq + Hash + fmt::Display> Commensurability<E> {
    pub fn to_json(&self) -> Value {
        json!({ "x_by_y": self.x_by_y.to_json(), "y_by_x": self.y_by_x.to_json() })
    }
}

pub fn commensurable<G: Ambient>(
    g: &G,
    x: &PointSet<G::Elem>,
    y: &PointSet<G::Elem>,
    region: &Rational,
) -> Result<Commensurability<G::Elem>, GroupError> {
    Ok(Commensurability {
        x_by_y: covering_certificate(g, y, x, region)?,
        y_by_x: covering_certificate(g, x, y, region)?,
    })
}

/// `X·X⁻¹ ∩ Y·Y⁻¹`, with region the smaller of the two difference-set
/// regions.
pub fn intersect_classes<G: Ambient>(
    g: &G,
    x: &PointSet<G::Elem>,
    y: &PointSet<G::Elem>,
) -> Result<PointSet<G::Elem>, GroupError> {
    x.check_same_ambient(y)?;
    let xx = product_set(g, x, &x.inverse(g)?)?;
    let yy = product_set(g, y, &y.inverse(g)?)?;
    let region = xx.region().min(yy.region()).clone();
    Ok(xx.filter(|e| yy.contains(e)).with_region(region))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::group::Integers;

    fn interval(lo: i64, hi: i64, step: i64) -> PointSet<i64> {
        let r = lo.abs().max(hi.abs());
        PointSet::new(&Integers, (lo..=hi).filter(|n| n % step == 0), rat(r, 1))
    }

    #[test]
    fn product_with_identity_is_identity_map() {
        let e = PointSet::new(&Integers, [0], rat(0, 1));
        let y = interval(-3, 7, 1);
        assert_eq!(product_set(&Integers, &e, &y).unwrap().elements(), y.elements());
    }

    #[test]
    fn interval_sumset() {
        let x = interval(-2, 2, 1);
        let s = product_set(&Integers, &x, &x).unwrap();
        let mut got = s.elements().to_vec();
        got.sort();
        assert_eq!(got, (-4..=4).collect::<Vec<_>>());
        assert_eq!(s.region(), &rat(4, 1));
    }

    #[test]
    fn self_cover_is_identity() {
        let x = interval(-5, 5, 1);
        let c = covering_certificate(&Integers, &x, &x, &rat(5, 1)).unwrap();
        assert_eq!(c.translates, vec![0]);
        assert!(c.validated);
    }

    #[test]
    fn interval_needs_three_translates() {
        let x = interval(-10, 10, 1);
        let y = interval(-20, 20, 1);
        let c = covering_certificate(&Integers, &x, &y, &rat(20, 1)).unwrap();
        assert_eq!(c.len(), 3);
        // exhaustive membership: every y is x + f for some f
        for t in -20..=20i64 {
            assert!(c.translates.iter().any(|f| (t - f).abs() <= 10));
        }
        let v = verify_approximate_subgroup(&Integers, &x, &rat(20, 1)).unwrap();
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn subgroup_truncation_is_one_approximate() {
        let x = interval(-20, 20, 2);
        let c = verify_approximate_subgroup(&Integers, &x, &rat(20, 1)).unwrap();
        assert_eq!(c.translates, vec![0]);
    }

    #[test]
    fn not_symmetric_reports_witness() {
        let x = PointSet::new(&Integers, [0, 1, 2, -1], rat(2, 1));
        match verify_approximate_subgroup(&Integers, &x, &rat(2, 1)) {
            Err(GroupError::NotSymmetric { witness }) => assert!(witness.contains('2')),
            other => panic!("expected NotSymmetric, got {other:?}"),
        }
    }

    #[test]
    fn integers_and_evens() {
        let z = interval(-10, 10, 1);
        let two_z = interval(-10, 10, 2);
        let c = commensurable(&Integers, &z, &two_z, &rat(10, 1)).unwrap();
        assert_eq!(c.x_by_y.len(), 2);
        assert_eq!(c.y_by_x.len(), 1);
        let swapped = commensurable(&Integers, &two_z, &z, &rat(10, 1)).unwrap();
        assert_eq!(swapped.x_by_y, c.y_by_x);
        assert_eq!(swapped.y_by_x, c.x_by_y);
        let same = commensurable(&Integers, &z, &z, &rat(10, 1)).unwrap();
        assert_eq!((same.x_by_y.translates, same.y_by_x.translates), (vec![0], vec![0]));
    }

    #[test]
    fn uncoverable_when_base_is_empty() {
        let empty = PointSet::new(&Integers, Vec::<i64>::new(), rat(1, 1));
        let y = interval(-1, 1, 1);
        assert!(matches!(covering_certificate(&Integers, &empty, &y, &rat(1, 1)), Err(GroupError::Uncoverable { .. })));
    }

    #[test]
    fn tampered_certificate_fails_validation() {
        let x = interval(-10, 10, 1);
        let y = interval(-20, 20, 1);
        let mut c = covering_certificate(&Integers, &x, &y, &rat(20, 1)).unwrap();
        c.translates.pop();
        assert!(matches!(c.validate(&Integers, &x, &y), Err(GroupError::NotCovered { .. })));
    }

    #[test]
    fn intersections() {
        let x = interval(-10, 10, 1);
        let y = interval(-10, 10, 2);
        let both = intersect_classes(&Integers, &x, &y).unwrap();
        let mut got = both.elements().to_vec();
        got.sort();
        assert_eq!(got, (-20..=20).filter(|n| n % 2 == 0).collect::<Vec<_>>());
        let xx = product_set(&Integers, &x, &x.inverse(&Integers).unwrap()).unwrap();
        assert_eq!(intersect_classes(&Integers, &x, &x).unwrap(), xx);
    }

    #[test]
    fn ambient_mismatch_is_rejected() {
        use crate::arith::PScaled;
        use crate::group::{ZpAdic, ZpReal};
        let real = ZpReal::new(2).unwrap();
        let adic = ZpAdic::new(2).unwrap();
        let one = PScaled::from_int(1, 2).unwrap();
        let x = PointSet::new(&real, [one.clone()], rat(1, 1));
        let y = PointSet::new(&adic, [one], rat(1, 1));
        assert!(matches!(product_set(&real, &x, &y), Err(GroupError::AmbientMismatch { .. })));
        assert!(matches!(intersect_classes(&real, &x, &y), Err(GroupError::AmbientMismatch { .. })));
    }

    #[test]
    fn text_round_trip() {
        let x = interval(-3, 3, 1);
        assert_eq!(PointSet::<i64>::parse_text(&Integers, &x.to_text()).unwrap(), x);
    }
}
