//! Cut-and-project schemes and the model sets they generate.
//!
//! A scheme embeds an arithmetic lattice diagonally into a physical and an
//! internal group. The model set for a window is the set of lattice points
//! whose internal image lies in the window, truncated by a physical gauge
//! bound. Membership is decided exactly; enumeration may use floats to bound
//! loops but every candidate passes through the exact filter.

mod export;
mod schemes;
mod window;

pub use export::{svg_ticks, write_csv};
pub use schemes::{ApproxRingScheme, PAdicWindowScheme, PisotMatrixScheme, QuadraticScheme};
pub use window::Window;

use std::fmt;

use num_traits::{One, Signed};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{rat, ArithError, QuadScalar, Rational};
use crate::group::{
    commensurable, product_set, verify_approximate_subgroup, Ambient, Commensurability, CoveringCertificate,
    GroupError, LineAmbient, PointSet,
};

#[derive(Debug, Error)]
pub enum CutProjectError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("range must be positive, got {0}")]
    InvalidRange(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

type Elem<S> = <<S as CutProjectScheme>::G as Ambient>::Elem;

/// A lattice `Γ` with its physical and internal embeddings and a window.
pub trait CutProjectScheme: Clone {
    type G: Ambient;
    type Internal: Clone + fmt::Display;

    fn name(&self) -> String;
    fn ambient(&self) -> Self::G;
    fn window(&self) -> &Window;
    fn with_window(&self, window: Window) -> Result<Self, CutProjectError>;
    /// Internal image of a lattice point.
    fn internal(&self, x: &Elem<Self>) -> Self::Internal;
    fn internal_in(&self, w: &Window, v: &Self::Internal) -> bool;
    /// A superset of the lattice points with physical gauge at most
    /// `range` and internal image in the window.
    fn candidates(&self, range: &Rational) -> Vec<Elem<Self>>;
    /// Float coordinates of the physical image, for plotting.
    fn physical_coords(&self, x: &Elem<Self>) -> Vec<f64>;
    /// Scheme parameters other than the window.
    fn to_json(&self) -> Value;

    /// The physical gauge bound actually applied for `range`.
    fn physical_bound(&self, range: &Rational) -> Rational {
        range.clone()
    }
}

/// Physical projection of `Γ ∩ (G × W)` on a gauge-bounded range, with the
/// data needed to regenerate it.
#[derive(Clone, Debug)]
pub struct ModelSet<S: CutProjectScheme> {
    points: PointSet<Elem<S>>,
    scheme: S,
    range: Rational,
}

impl<S: CutProjectScheme> ModelSet<S> {
    pub fn points(&self) -> &PointSet<Elem<S>> {
        &self.points
    }

    pub fn scheme(&self) -> &S {
        &self.scheme
    }

    pub fn range(&self) -> &Rational {
        &self.range
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &Elem<S>) -> bool {
        self.points.contains(x)
    }

    pub fn regenerate(&self) -> Result<Self, CutProjectError> {
        generate_model_set(&self.scheme, &self.range)
    }

    /// First element whose internal image has left the window.
    pub fn window_violation(&self) -> Option<&Elem<S>> {
        let w = self.scheme.window();
        self.points.iter().find(|x| !self.scheme.internal_in(w, &self.scheme.internal(x)))
    }

    pub fn provenance_json(&self) -> Value {
        json!({
            "scheme": self.scheme.to_json(),
            "window": self.scheme.window().to_json(),
            "range": self.range.to_string(),
            "physical_bound": self.scheme.physical_bound(&self.range).to_string(),
            "ambient": self.points.ambient(),
            "points": self.points.len(),
        })
    }

    /// Rows `(physical, internal, float coordinates)` in canonical order.
    pub fn rows(&self) -> Vec<(String, String, Vec<f64>)> {
        self.rows_for(self.points.elements())
    }

    fn rows_for(&self, elems: &[Elem<S>]) -> Vec<(String, String, Vec<f64>)> {
        elems
            .iter()
            .map(|x| (x.to_string(), self.scheme.internal(x).to_string(), self.scheme.physical_coords(x)))
            .collect()
    }
}

impl<S: CutProjectScheme> ModelSet<S>
where
    S::G: LineAmbient,
{
    /// Rows sorted by exact position on the line.
    pub fn rows_ascending(&self) -> Vec<(String, String, Vec<f64>)> {
        let g = self.scheme.ambient();
        let mut elems = self.points.elements().to_vec();
        elems.sort_by(|a, b| g.cmp_position(a, b));
        self.rows_for(&elems)
    }
}

pub fn generate_model_set<S: CutProjectScheme>(scheme: &S, range: &Rational) -> Result<ModelSet<S>, CutProjectError> {
    if !range.is_positive() {
        return Err(CutProjectError::InvalidRange(range.to_string()));
    }
    let g = scheme.ambient();
    let bound = scheme.physical_bound(range);
    let w = scheme.window();
    let elems = scheme
        .candidates(range)
        .into_iter()
        .filter(|x| g.within(x, &bound) && scheme.internal_in(w, &scheme.internal(x)));
    Ok(ModelSet { points: PointSet::new(&g, elems, bound.clone()), scheme: scheme.clone(), range: range.clone() })
}

/// `{a/pᵏ : k ≤ n, |a| ≤ pᵏ}` restricted to p-adic norm at most `range`.
pub fn approximate_ring_zp(p: u64, n: i64, range: &Rational) -> Result<ModelSet<ApproxRingScheme>, CutProjectError> {
    let scheme = ApproxRingScheme::new(p, n, Window::interval(Rational::one()))?;
    generate_model_set(&scheme, range)
}

/// `{g ∈ SL₂(O_K) : height(g − I) ≤ height, ‖g* − I‖ ≤ ε}` for `K = ℚ(√d)`.
pub fn pisot_matrix_set(d: i64, eps: &Rational, height: u64) -> Result<ModelSet<PisotMatrixScheme>, CutProjectError> {
    let scheme = PisotMatrixScheme::new(d, eps.clone())?;
    generate_model_set(&scheme, &Rational::from_integer(height.into()))
}

/// Shorthand for the golden-ratio scheme with window `[−radius, radius]`.
pub fn fibonacci_model_set(radius: &Rational, range: &Rational) -> Result<ModelSet<QuadraticScheme>, CutProjectError> {
    generate_model_set(&QuadraticScheme::fibonacci(radius.clone()), range)
}

/// Outcome of a Meyer-set check.
///
/// Finite truncations are always covered by finitely many translates, so
/// commensurability alone cannot fail here. The check therefore also measures
/// how far each interior point of either set is from its nearest anchor in
/// the other: for a genuine Meyer subset that distance stays bounded as the
/// region grows, for a one-sided subset it grows with the region. The bound
/// applied is a quarter of the region.
#[derive(Clone, Debug)]
pub struct MeyerReport<E> {
    pub subset_witness: Option<E>,
    pub commensurability: Option<Commensurability<E>>,
    pub reach: Rational,
    /// Interior point farthest from the other set, with the shortest
    /// translate `x⁻¹·y` reaching it.
    pub widest_anchor: Option<(E, E)>,
    pub is_meyer: bool,
}

impl<E: Clone + Eq + std::hash::Hash + fmt::Display> MeyerReport<E> {
    pub fn to_json(&self) -> Value {
        json!({
            "is_meyer": self.is_meyer,
            "subset_witness": self.subset_witness.as_ref().map(ToString::to_string),
            "reach": self.reach.to_string(),
            "widest_anchor": self.widest_anchor.as_ref().map(|(y, f)| json!({
                "target": y.to_string(),
                "translate": f.to_string(),
            })),
            "commensurability": self.commensurability.as_ref().map(Commensurability::to_json),
        })
    }
}

/// A target with the translate reaching it.
type Anchor<E> = (E, E);

/// `max_y min_x x⁻¹·y` over `y ∈ to` with gauge at most `interior`,
/// compared by gauge.
fn widest_anchor<G: Ambient>(
    g: &G,
    from: &PointSet<G::Elem>,
    to: &PointSet<G::Elem>,
    interior: &Rational,
) -> Result<Option<Anchor<G::Elem>>, GroupError> {
    let mut widest: Option<(G::Elem, G::Elem)> = None;
    for y in to.iter().filter(|y| g.within(y, interior)) {
        let mut nearest: Option<G::Elem> = None;
        for x in from.iter() {
            let f = g.compose(&g.invert(x)?, y)?;
            if nearest.as_ref().is_none_or(|n| g.cmp_gauge(&f, n).is_lt()) {
                nearest = Some(f);
            }
        }
        let Some(f) = nearest else { continue };
        if widest.as_ref().is_none_or(|(_, w)| g.cmp_gauge(&f, w).is_gt()) {
            widest = Some((y.clone(), f));
        }
    }
    Ok(widest)
}

pub fn meyer_check<S: CutProjectScheme>(
    m: &PointSet<Elem<S>>,
    s: &ModelSet<S>,
    region: &Rational,
) -> Result<MeyerReport<Elem<S>>, CutProjectError> {
    let g = s.scheme.ambient();
    let reach = region * rat(1, 4);
    if let Some(x) = m.iter().find(|x| !s.contains(x)) {
        return Ok(MeyerReport {
            subset_witness: Some(x.clone()),
            commensurability: None,
            reach,
            widest_anchor: None,
            is_meyer: false,
        });
    }
    let c = commensurable(&g, m, &s.points, region)?;
    let interior = region * rat(1, 2);
    let a = widest_anchor(&g, m, &s.points, &interior)?;
    let b = widest_anchor(&g, &s.points, m, &interior)?;
    let widest = match (a, b) {
        (Some(a), Some(b)) => Some(if g.cmp_gauge(&a.1, &b.1).is_ge() { a } else { b }),
        (a, b) => a.or(b),
    };
    let is_meyer = widest.as_ref().is_some_and(|(_, f)| g.within(f, &reach));
    Ok(MeyerReport { subset_witness: None, commensurability: Some(c), reach, widest_anchor: widest, is_meyer })
}

/// Containment of `X·X⁻¹` in the pullback of `W·W⁻¹`, with the
/// approximate-subgroup certificate for `X·X⁻¹`.
#[derive(Clone, Debug)]
pub struct PullbackReport<E> {
    pub x_size: usize,
    pub difference_size: usize,
    pub difference_window: Window,
    pub containment_witness: Option<E>,
    pub certificate: CoveringCertificate<E>,
}

impl<E: Clone + Eq + std::hash::Hash + fmt::Display> PullbackReport<E> {
    pub fn contained(&self) -> bool {
        self.containment_witness.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x_size": self.x_size,
            "difference_size": self.difference_size,
            "difference_window": self.difference_window.to_json(),
            "contained": self.contained(),
            "containment_witness": self.containment_witness.as_ref().map(ToString::to_string),
            "certificate": self.certificate.to_json(),
        })
    }
}

/// With `X = f⁻¹(W)` on `region`, checks `X·X⁻¹ ⊆ f⁻¹(W·W⁻¹)` exactly and
/// certifies `X·X⁻¹` as an approximate subgroup on its own region.
pub fn pullback_containment_check<S: CutProjectScheme>(
    scheme: &S,
    w: &Window,
    region: &Rational,
) -> Result<PullbackReport<Elem<S>>, CutProjectError> {
    let scheme = scheme.with_window(w.clone())?;
    let x = generate_model_set(&scheme, region)?;
    let g = scheme.ambient();
    let xs = x.points();
    let diff = product_set(&g, xs, &xs.inverse(&g)?)?;
    let ww = w.difference();
    let containment_witness = diff.iter().find(|z| !scheme.internal_in(&ww, &scheme.internal(z))).cloned();
    let interior = diff.region() * rat(1, 2);
    let certificate = verify_approximate_subgroup(&g, &diff, &interior)?;
    Ok(PullbackReport {
        x_size: xs.len(),
        difference_size: diff.len(),
        difference_window: ww,
        containment_witness,
        certificate,
    })
}

/// Unipotent elements whose nonzero off-diagonal entry exceeds 1 but is not
/// a Pisot number. Empty whenever the window radius is below 1.
pub fn pisot_entry_violations(set: &ModelSet<PisotMatrixScheme>) -> Vec<QuadScalar> {
    let one = Rational::one();
    set.points()
        .iter()
        .filter(|g| g.is_unipotent_triangular() && !g.is_identity())
        .map(|g| if g.e12().is_zero() { g.e21().clone() } else { g.e12().clone() })
        .filter(|a| a.cmp_rational(&one) == std::cmp::Ordering::Greater && !a.is_pisot())
        .collect()
}

#[cfg(test)]
mod tests;
