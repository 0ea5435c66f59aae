//! Uniform discreteness and relative density on the line.

use std::collections::HashSet;

use serde_json::{json, Value};

use super::{canonical_sort, GroupError, LineAmbient, PointSet};
use crate::arith::Rational;

/// Probes per minimal gap when estimating the covering radius.
const PROBES_PER_GAP: f64 = 64.0;

#[derive(Clone, Debug)]
pub struct DeloneReport<E> {
    pub points: usize,
    /// Smallest distance between distinct points, and the exact difference
    /// realizing it.
    pub min_gap: f64,
    pub min_gap_element: E,
    pub min_gap_pair: (E, E),
    /// Largest distance from a probe in `[−interior, interior]` to the set.
    pub covering_radius: f64,
    pub probe_spacing: f64,
    /// Distinct consecutive gaps between points inside the interior.
    pub gap_alphabet: Vec<E>,
    pub interior: Rational,
}

impl<E: ToString> DeloneReport<E> {
    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points,
            "min_gap": self.min_gap,
            "min_gap_exact": self.min_gap_element.to_string(),
            "min_gap_pair": [self.min_gap_pair.0.to_string(), self.min_gap_pair.1.to_string()],
            "covering_radius": self.covering_radius,
            "probe_spacing": self.probe_spacing,
            "gap_alphabet": self.gap_alphabet.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "interior": self.interior.to_string(),
        })
    }
}

pub fn delone_check<G: LineAmbient>(
    g: &G,
    x: &PointSet<G::Elem>,
    interior: &Rational,
) -> Result<DeloneReport<G::Elem>, GroupError> {
    if x.len() < 2 {
        return Err(GroupError::TooFewPoints(x.len()));
    }
    let mut pts = x.elements().to_vec();
    pts.sort_by(|a, b| g.cmp_position(a, b));

    let mut gaps = Vec::with_capacity(pts.len() - 1);
    for w in pts.windows(2) {
        gaps.push(g.compose(&w[1], &g.invert(&w[0])?)?);
    }
    let (best, _) = gaps.iter().enumerate().min_by(|(_, a), (_, b)| g.cmp_gauge(a, b)).expect("at least one gap");
    let min_gap_element = gaps[best].clone();
    let min_gap = g.gauge(&min_gap_element);

    let mut seen = HashSet::new();
    let mut alphabet = Vec::new();
    for (i, gap) in gaps.iter().enumerate() {
        if g.within(&pts[i], interior) && g.within(&pts[i + 1], interior) && seen.insert(gap.clone()) {
            alphabet.push(gap.clone());
        }
    }
    canonical_sort(g, &mut alphabet);

    let positions: Vec<f64> = pts.iter().map(|p| g.position(p)).collect();
    let half = num_traits::ToPrimitive::to_f64(interior).unwrap_or(0.0);
    let probe_spacing = min_gap / PROBES_PER_GAP;
    let steps = ((2.0 * half) / probe_spacing).floor() as usize;
    let mut covering_radius: f64 = 0.0;
    for k in 0..=steps {
        let t = -half + k as f64 * probe_spacing;
        let i = positions.partition_point(|&p| p < t);
        let mut d = f64::INFINITY;
        if i < positions.len() {
            d = d.min(positions[i] - t);
        }
        if i > 0 {
            d = d.min(t - positions[i - 1]);
        }
        covering_radius = covering_radius.max(d);
    }

    Ok(DeloneReport {
        points: pts.len(),
        min_gap,
        min_gap_pair: (pts[best].clone(), pts[best + 1].clone()),
        min_gap_element,
        covering_radius,
        probe_spacing,
        gap_alphabet: alphabet,
        interior: interior.clone(),
    })
}
