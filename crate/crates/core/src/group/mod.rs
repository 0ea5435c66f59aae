//! Finite-truncation combinatorics of approximate subgroups.
//!
//! An [`Ambient`] describes the group all points live in. A [`PointSet`] is a
//! finite, duplicate-free truncation of a (usually infinite) subset, tagged
//! with the gauge bound it was truncated at. All memberships are decided by
//! exact equality; only reporting uses floats.

mod ambients;
mod covering;
mod delone;
mod freeset;

pub use ambients::{Integers, RationalLine, RealQuadratic, Sl2Group, ZpAdic, ZpReal};
pub use covering::{
    commensurable, covering_certificate, intersect_classes, product_set, verify_approximate_subgroup, Commensurability,
    CoveringCertificate, SetSummary,
};
pub use delone::{delone_check, DeloneReport};
pub use freeset::{is_free, is_maximal_free, maximal_free_set};

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::arith::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("point sets live in different ambient groups: {left} vs {right}")]
    AmbientMismatch { left: String, right: String },
    #[error("uncoverable: no translate available for {element}; the truncation is too small")]
    Uncoverable { element: String },
    #[error("not symmetric: {witness}")]
    NotSymmetric { witness: String },
    #[error("certificate does not cover {element}")]
    NotCovered { element: String },
    #[error("the constraint set contains the identity")]
    ContainsIdentity,
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("point set is empty")]
    Empty,
    #[error("group operation failed: {0}")]
    Operation(String),
    #[error("cannot parse element {0:?}")]
    Parse(String),
}

/// A group together with a size gauge.
///
/// `cmp_gauge` and `within` are exact; `gauge` is a float rendering of the
/// same quantity for reports. The gauge vanishes at the identity and is
/// invariant under inversion.
pub trait Ambient {
    type Elem: Clone + Eq + Hash + fmt::Debug + fmt::Display;

    fn label(&self) -> String;
    fn compose(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, GroupError>;
    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem, GroupError>;
    fn identity(&self) -> Self::Elem;
    fn gauge(&self, a: &Self::Elem) -> f64;
    fn cmp_gauge(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;
    /// `gauge(a) ≤ bound`, decided exactly.
    fn within(&self, a: &Self::Elem, bound: &Rational) -> bool;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, GroupError>;
}

/// Ambient groups that sit inside the real line, for Delone checks.
pub trait LineAmbient: Ambient {
    fn position(&self, a: &Self::Elem) -> f64;
    /// Exact order of positions.
    fn cmp_position(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;
}

/// Sorts by gauge, ties broken by serialized form.
pub fn canonical_sort<G: Ambient>(g: &G, elems: &mut Vec<G::Elem>) {
    let mut keyed: Vec<(String, G::Elem)> = elems.drain(..).map(|e| (e.to_string(), e)).collect();
    keyed.sort_by(|(sa, a), (sb, b)| g.cmp_gauge(a, b).then_with(|| sa.cmp(sb)));
    elems.extend(keyed.into_iter().map(|(_, e)| e));
}

/// Finite truncation of a subset of an ambient group.
///
/// `region` is the gauge bound the set was generated at: every element has
/// gauge at most `region`.
#[derive(Clone, Debug)]
pub struct PointSet<E> {
    ambient: String,
    elements: Vec<E>,
    index: HashSet<E>,
    region: Rational,
}

impl<E: Clone + Eq + Hash + fmt::Display> PointSet<E> {
    /// Deduplicates and sorts canonically.
    pub fn new<G: Ambient<Elem = E>>(g: &G, elems: impl IntoIterator<Item = E>, region: Rational) -> Self {
        let mut index = HashSet::new();
        let mut elements: Vec<E> = elems.into_iter().filter(|e| index.insert(e.clone())).collect();
        canonical_sort(g, &mut elements);
        Self { ambient: g.label(), elements, index, region }
    }

    pub fn ambient(&self) -> &str {
        &self.ambient
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, E> {
        self.elements.iter()
    }

    pub fn region(&self) -> &Rational {
        &self.region
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains(e)
    }

    /// Elements of gauge at most `bound`, keeping order.
    pub fn restrict<G: Ambient<Elem = E>>(&self, g: &G, bound: &Rational) -> Self {
        let elements: Vec<E> = self.elements.iter().filter(|e| g.within(e, bound)).cloned().collect();
        Self {
            ambient: self.ambient.clone(),
            index: elements.iter().cloned().collect(),
            elements,
            region: bound.min(&self.region).clone(),
        }
    }

    /// Keeps elements satisfying `keep`, preserving order and region.
    pub fn filter(&self, keep: impl Fn(&E) -> bool) -> Self {
        let elements: Vec<E> = self.elements.iter().filter(|e| keep(e)).cloned().collect();
        Self {
            ambient: self.ambient.clone(),
            index: elements.iter().cloned().collect(),
            elements,
            region: self.region.clone(),
        }
    }

    pub fn with_region(mut self, region: Rational) -> Self {
        self.region = region;
        self
    }

    /// Elementwise inverse.
    pub fn inverse<G: Ambient<Elem = E>>(&self, g: &G) -> Result<Self, GroupError> {
        let inv = self.elements.iter().map(|e| g.invert(e)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(g, inv, self.region.clone()))
    }

    /// The first element whose inverse is missing, or `Some(identity)` if
    /// the identity itself is missing; `None` for a symmetric set.
    pub fn symmetry_witness<G: Ambient<Elem = E>>(&self, g: &G) -> Result<Option<String>, GroupError> {
        let id = g.identity();
        if !self.contains(&id) {
            return Ok(Some(format!("identity {id} is missing")));
        }
        for e in &self.elements {
            let inv = g.invert(e)?;
            if !self.contains(&inv) {
                return Ok(Some(format!("{e} is present but its inverse {inv} is not")));
            }
        }
        Ok(None)
    }

    pub(crate) fn check_same_ambient(&self, other: &Self) -> Result<(), GroupError> {
        if self.ambient != other.ambient {
            return Err(GroupError::AmbientMismatch { left: self.ambient.clone(), right: other.ambient.clone() });
        }
        Ok(())
    }

    /// One element per line, preceded by `#` header lines for the ambient
    /// and region.
    pub fn to_text(&self) -> String {
        let mut out = format!("# ambient: {}\n# region: {}\n", self.ambient, self.region);
        for e in &self.elements {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Inverse of [`PointSet::to_text`]. Without a region header the region
    /// defaults to the largest gauge present.
    pub fn parse_text<G: Ambient<Elem = E>>(g: &G, text: &str) -> Result<Self, GroupError> {
        let mut region = None;
        let mut elems = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(r) = comment.trim().strip_prefix("region:") {
                    region = Some(parse_rational(r).map_err(|e| GroupError::Parse(e.to_string()))?);
                }
                continue;
            }
            elems.push(g.parse_elem(line)?);
        }
        let region = match region {
            Some(r) => r,
            None => max_gauge_bound(g, &elems),
        };
        Ok(Self::new(g, elems, region))
    }
}

impl<E: PartialEq> PartialEq for PointSet<E> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.elements == other.elements && self.region == other.region
    }
}

/// Smallest integer bound covering every gauge in `elems`.
pub(crate) fn max_gauge_bound<G: Ambient>(g: &G, elems: &[G::Elem]) -> Rational {
    let top = elems.iter().map(|e| g.gauge(e)).fold(0.0f64, f64::max);
    let mut r = Rational::from_integer(num_bigint::BigInt::from(top.ceil() as i64));
    let one = Rational::from_integer(1.into());
    while !elems.iter().all(|e| g.within(e, &r)) {
        r = &r + &one;
    }
    r
}
