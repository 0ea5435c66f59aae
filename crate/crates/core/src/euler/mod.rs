//! The central extension of `SL₂(ℤ[1/p])` by `ℤ[1/p]` twisted by the
//! bounded Euler cocycle, and the quasimorphism `δ(λ, a) = −a`.
//!
//! The cocycle comes from lifting the action of `SL₂(ℝ)` on the unit circle
//! to the real line with the section `s(g)(0) ∈ [0, 2π)`; with this section
//! `β` takes values in `{0, 1}`. `β` is computed in floating point and only
//! accepted when the rounding residual is below `ROUNDING_TOL`.

mod lift;

pub use lift::{
    circle_action, cocycle_identity_check, cocycle_terms, euler_cocycle, euler_cocycle_with_residual, lift_eval,
    rotation_pi, CocycleTerms, RealMat2, ROUNDING_TOL,
};

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{ArithError, Mat2, PScaled, Rational, Scalar};
use crate::group::{Ambient, GroupError, PointSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EulerError {
    #[error("determinant {0} is not 1")]
    NotUnimodular(f64),
    #[error("image vector vanishes at angle {theta}")]
    Singular { theta: f64 },
    #[error("lift subdivision failed at angle {theta}: matrix too ill-conditioned")]
    Subdivision { theta: f64 },
    #[error("unresolved rounding: residual {residual:e}")]
    UnresolvedRounding { residual: f64 },
    #[error("elements over different primes")]
    MixedPrimes,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `(λ, a)` with `λ ∈ SL₂(ℤ[1/p])` and `a ∈ ℤ[1/p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtElem {
    lambda: Mat2<PScaled>,
    a: PScaled,
}

impl ExtElem {
    pub fn new(lambda: Mat2<PScaled>, a: PScaled) -> Result<Self, EulerError> {
        if !lambda.det().is_one_scalar() {
            return Err(ArithError::NotUnimodular(lambda.det().to_string()).into());
        }
        if lambda.entries().iter().any(|e| e.p() != a.p()) {
            return Err(EulerError::MixedPrimes);
        }
        Ok(Self { lambda, a })
    }

    pub fn lambda(&self) -> &Mat2<PScaled> {
        &self.lambda
    }

    pub fn a(&self) -> &PScaled {
        &self.a
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    fn real(&self) -> RealMat2 {
        RealMat2::new(self.lambda.to_f64()).expect("exact determinant is 1")
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.lambda, self.a)
    }
}

impl FromStr for ExtElem {
    type Err = EulerError;

    /// `(matrix; a)` in exact syntax, e.g. `([[1/2^0,1/2^0],[0/2^0,1/2^0]]; 3/2^1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || EulerError::Arith(ArithError::Parse(s.to_string()));
        let body = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(err)?;
        let (m, a) = body.rsplit_once(';').ok_or_else(err)?;
        Self::new(m.trim().parse()?, a.trim().parse()?)
    }
}

/// `β` on the float images of two exact matrices.
pub fn beta_exact(l1: &Mat2<PScaled>, l2: &Mat2<PScaled>) -> Result<i64, EulerError> {
    euler_cocycle(&RealMat2::new(l1.to_f64())?, &RealMat2::new(l2.to_f64())?)
}

/// `(λ₁, a₁)(λ₂, a₂) = (λ₁λ₂, a₁ + a₂ + β(λ₁, λ₂))`.
pub fn twisted_product(u: &ExtElem, v: &ExtElem) -> Result<ExtElem, EulerError> {
    if u.p() != v.p() {
        return Err(EulerError::MixedPrimes);
    }
    let beta = euler_cocycle(&u.real(), &v.real())?;
    let a = &(&u.a + &v.a) + &PScaled::from_int(beta, u.p())?;
    Ok(ExtElem { lambda: u.lambda.mul(&v.lambda), a })
}

/// `(λ, a)⁻¹ = (λ⁻¹, −a − β(λ, λ⁻¹))`.
pub fn twisted_inverse(u: &ExtElem) -> Result<ExtElem, EulerError> {
    let inv = u.lambda.inv()?;
    let beta = beta_exact(&u.lambda, &inv)?;
    let a = &(-&u.a) - &PScaled::from_int(beta, u.p())?;
    Ok(ExtElem { lambda: inv, a })
}

/// `δ(λ, a) = −a`.
pub fn delta_qm(u: &ExtElem) -> PScaled {
    -&u.a
}

/// The extension as an ambient group. The gauge is the entry height of
/// `λ − I`; the central coordinate does not contribute.
#[derive(Clone, Copy, Debug)]
pub struct TwistedExtension {
    p: u64,
}

impl TwistedExtension {
    pub fn new(p: u64) -> Result<Self, EulerError> {
        PScaled::from_int(0, p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn scalar(&self, num: i64, k: u32) -> PScaled {
        PScaled::from_parts(num.into(), k, self.p).expect("validated p")
    }

    fn elem(&self, m: [[(i64, u32); 2]; 2], a: i64) -> ExtElem {
        let s = |(n, k): (i64, u32)| self.scalar(n, k);
        let lambda = Mat2::new(s(m[0][0]), s(m[0][1]), s(m[1][0]), s(m[1][1]));
        ExtElem::new(lambda, self.scalar(a, 0)).expect("generator has determinant 1")
    }

    pub fn central(&self, a: i64) -> ExtElem {
        self.elem([[(1, 0), (0, 0)], [(0, 0), (1, 0)]], a)
    }

    /// `([[1,1],[0,1]], 0)`, `([[1,0],[1,1]], 0)`, `([[p,0],[0,1/p]], 0)`,
    /// their inverses in the extension, and `(I, ±1)`.
    pub fn default_generators(&self) -> Result<Vec<ExtElem>, EulerError> {
        let p = self.p as i64;
        let base = [
            self.elem([[(1, 0), (1, 0)], [(0, 0), (1, 0)]], 0),
            self.elem([[(1, 0), (0, 0)], [(1, 0), (1, 0)]], 0),
            self.elem([[(p, 0), (0, 0)], [(0, 0), (1, 1)]], 0),
        ];
        let mut gens = Vec::with_capacity(8);
        for g in base {
            let inv = twisted_inverse(&g)?;
            gens.push(g);
            gens.push(inv);
        }
        gens.push(self.central(1));
        gens.push(self.central(-1));
        Ok(gens)
    }

    /// Elements of word length at most `radius` over `generators`, in
    /// breadth-first discovery order. The point-set region is the smallest
    /// integer bounding every gauge.
    pub fn ball(&self, generators: &[ExtElem], radius: usize) -> Result<PointSet<ExtElem>, EulerError> {
        let id = self.identity();
        let mut seen: HashSet<ExtElem> = HashSet::from([id.clone()]);
        let mut all = vec![id.clone()];
        let mut frontier = vec![id];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &frontier {
                for g in generators {
                    let x = twisted_product(w, g)?;
                    if seen.insert(x.clone()) {
                        next.push(x);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        let region = crate::group::max_gauge_bound(self, &all);
        Ok(PointSet::new(self, all, region))
    }
}

fn height_minus_identity(u: &ExtElem) -> BigInt {
    u.lambda.minus_identity().height()
}

impl Ambient for TwistedExtension {
    type Elem = ExtElem;

    fn label(&self) -> String {
        format!("SL2(Z[1/{p}]) x_beta Z[1/{p}]", p = self.p)
    }
    fn compose(&self, a: &ExtElem, b: &ExtElem) -> Result<ExtElem, GroupError> {
        twisted_product(a, b).map_err(|e| GroupError::Operation(e.to_string()))
    }
    fn invert(&self, a: &ExtElem) -> Result<ExtElem, GroupError> {
        twisted_inverse(a).map_err(|e| GroupError::Operation(e.to_string()))
    }
    fn identity(&self) -> ExtElem {
        self.central(0)
    }
    fn gauge(&self, a: &ExtElem) -> f64 {
        height_minus_identity(a).to_f64().unwrap_or(f64::INFINITY)
    }
    fn cmp_gauge(&self, a: &ExtElem, b: &ExtElem) -> Ordering {
        height_minus_identity(a).cmp(&height_minus_identity(b))
    }
    fn within(&self, a: &ExtElem, bound: &Rational) -> bool {
        Rational::from_integer(height_minus_identity(a)) <= *bound
    }
    fn parse_elem(&self, s: &str) -> Result<ExtElem, GroupError> {
        let u: ExtElem = s.parse().map_err(|e: EulerError| GroupError::Parse(e.to_string()))?;
        if u.p() != self.p {
            return Err(GroupError::Parse(format!("{s} is not over Z[1/{}]", self.p)));
        }
        Ok(u)
    }
}

/// `Δ = {u : −2 < δ(u) < 2}` within the given set.
pub fn kernel_delta(set: &PointSet<ExtElem>) -> PointSet<ExtElem> {
    let two = Rational::from_integer(2.into());
    set.filter(|u| u.a.abs() < two)
}

/// `X ∩ X⁻¹`, the largest symmetric subset.
pub fn symmetric_core(set: &PointSet<ExtElem>) -> Result<PointSet<ExtElem>, EulerError> {
    let mut keep = HashSet::new();
    for u in set.iter() {
        if set.contains(&twisted_inverse(u)?) {
            keep.insert(u.clone());
        }
    }
    Ok(set.filter(|u| keep.contains(u)))
}

/// Exhaustive scan of `δ(uv) − δ(u) − δ(v)` over ordered pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectScan {
    pub pairs: usize,
    pub matrix_pairs: usize,
    /// Counts of defect values −1 and 0.
    pub histogram: [usize; 2],
    pub max_abs: Rational,
    /// First pair whose defect is not in `{−1, 0}`.
    pub violation: Option<(String, String, String)>,
}

impl DefectScan {
    pub fn to_json(&self) -> Value {
        json!({
            "pairs": self.pairs,
            "matrix_pairs": self.matrix_pairs,
            "histogram": { "-1": self.histogram[0], "0": self.histogram[1] },
            "max_abs_defect": self.max_abs.to_string(),
            "violation": self.violation.as_ref().map(|(u, v, d)| json!({ "u": u, "v": v, "defect": d })),
        })
    }
}

/// Since `δ(uv)` depends only on `a_u + a_v + β(λ_u, λ_v)`, pairs are
/// grouped by matrix: `β` is evaluated once per matrix pair and the central
/// parts are combined exactly as in [`twisted_product`].
pub fn defect_scan(set: &PointSet<ExtElem>) -> Result<DefectScan, EulerError> {
    let mut index: HashMap<&Mat2<PScaled>, usize> = HashMap::new();
    let mut groups: Vec<(RealMat2, Vec<&ExtElem>)> = Vec::new();
    for u in set.iter() {
        let i = *index.entry(&u.lambda).or_insert_with(|| {
            groups.push((u.real(), Vec::new()));
            groups.len() - 1
        });
        groups[i].1.push(u);
    }
    let mut scan = DefectScan {
        pairs: 0,
        matrix_pairs: groups.len() * groups.len(),
        histogram: [0; 2],
        max_abs: Rational::zero(),
        violation: None,
    };
    for (gu, us) in &groups {
        for (gv, vs) in &groups {
            let beta = euler_cocycle(gu, gv)?;
            for u in us {
                let p = u.p();
                let beta = PScaled::from_int(beta, p)?;
                for v in vs {
                    let a = &(&u.a + &v.a) + &beta;
                    let d = &(&(-&a) - &delta_qm(u)) - &delta_qm(v);
                    scan.pairs += 1;
                    let dv = d.value().clone();
                    if dv.abs() > scan.max_abs {
                        scan.max_abs = dv.abs();
                    }
                    match dv.to_integer().to_i64() {
                        Some(-1) if dv.is_integer() => scan.histogram[0] += 1,
                        Some(0) if dv.is_integer() => scan.histogram[1] += 1,
                        _ => {
                            if scan.violation.is_none() {
                                scan.violation = Some((u.to_string(), v.to_string(), d.to_string()));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(scan)
}

/// Seeded associativity check on triples drawn from a set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativitySample {
    pub triples: usize,
    pub seed: u64,
    pub failure: Option<(String, String, String)>,
}

pub fn associativity_sample(
    set: &PointSet<ExtElem>,
    triples: usize,
    seed: u64,
) -> Result<AssociativitySample, EulerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems = set.elements();
    let mut failure = None;
    if !elems.is_empty() {
        for _ in 0..triples {
            let [u, v, w] = [0; 3].map(|_| &elems[rng.gen_range(0..elems.len())]);
            let left = twisted_product(&twisted_product(u, v)?, w)?;
            let right = twisted_product(u, &twisted_product(v, w)?)?;
            if left != right && failure.is_none() {
                failure = Some((u.to_string(), v.to_string(), w.to_string()));
            }
        }
    }
    Ok(AssociativitySample { triples, seed, failure })
}

/// Seeded cocycle-identity check on random matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleSample {
    pub seed: u64,
    pub terms: Vec<CocycleTerms>,
}

impl CocycleSample {
    pub fn failures(&self) -> usize {
        self.terms.iter().filter(|t| !t.holds()).count()
    }

    pub fn max_residual(&self) -> f64 {
        self.terms.iter().map(CocycleTerms::max_residual).fold(0.0, f64::max)
    }

    /// Distinct `β` values observed, sorted.
    pub fn beta_values(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms.iter().flat_map(|t| t.betas).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "triples": self.terms.len(),
            "failures": self.failures(),
            "max_residual": self.max_residual(),
            "beta_values": self.beta_values(),
        })
    }

    /// One line per triple: index, the four `β` values, the identity verdict
    /// and the largest residual.
    pub fn per_triple_text(&self) -> String {
        let mut out = String::from("# index beta(g,h) beta(gh,k) beta(h,k) beta(g,hk) holds max_residual\n");
        for (i, t) in self.terms.iter().enumerate() {
            let [a, b, c, d] = t.betas;
            out.push_str(&format!("{i} {a} {b} {c} {d} {} {:.3e}\n", t.holds(), t.max_residual()));
        }
        out
    }
}

pub fn random_matrices(n: usize, seed: u64) -> Vec<RealMat2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| RealMat2::random(&mut rng)).collect()
}

pub fn cocycle_sample(triples: usize, seed: u64) -> Result<CocycleSample, EulerError> {
    let mats = random_matrices(3 * triples, seed);
    let terms = mats.chunks_exact(3).map(|c| cocycle_terms(&c[0], &c[1], &c[2])).collect::<Result<Vec<_>, _>>()?;
    Ok(CocycleSample { seed, terms })
}

#[cfg(test)]
mod tests;
