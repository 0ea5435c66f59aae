//! Quasimorphisms on the free group and on the line: Brooks counting
//! functions, exponent sums, and the nearest-integer retraction, with defect
//! scans, homogenization estimates and approximate kernels.

mod freeword;

pub use freeword::{ball_words, free_ball, FreeGroup, FreeWord, Letter};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{rat, Rational};
use crate::group::{Ambient, GroupError, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasiError {
    #[error("the counted word must be nontrivial")]
    TrivialWord,
    #[error("the counted word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),
    #[error("empty ball")]
    EmptyBall,
    #[error("gamma must lie in (0, 1], got {0}")]
    InvalidGamma(String),
    #[error("{0} must be at least 1")]
    InvalidCount(&'static str),
    #[error("bound must be non-negative, got {0}")]
    NegativeBound(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn check_counted(w: &FreeWord) -> Result<(), QuasiError> {
    if w.is_empty() {
        return Err(QuasiError::TrivialWord);
    }
    if !w.is_cyclically_reduced() {
        return Err(QuasiError::NotCyclicallyReduced(w.to_string()));
    }
    Ok(())
}

/// Number of pairwise disjoint occurrences of `w` in the reduced spelling of
/// `g`, scanning left to right.
pub fn brooks_count(w: &FreeWord, g: &FreeWord) -> Result<usize, QuasiError> {
    check_counted(w)?;
    let (pat, text) = (w.letters(), g.letters());
    let mut count = 0;
    let mut i = 0;
    while i + pat.len() <= text.len() {
        if &text[i..i + pat.len()] == pat {
            count += 1;
            i += pat.len();
        } else {
            i += 1;
        }
    }
    Ok(count)
}

/// `count(w, g) − count(w⁻¹, g)`.
pub fn brooks_value(w: &FreeWord, g: &FreeWord) -> Result<i64, QuasiError> {
    Ok(brooks_count(w, g)? as i64 - brooks_count(&w.inverse(), g)? as i64)
}

/// Words with as many copies of `w` as of `w⁻¹`.
pub fn in_brooks_a(w: &FreeWord, g: &FreeWord) -> Result<bool, QuasiError> {
    Ok(brooks_value(w, g)? == 0)
}

/// `r(n + δ) = n` if `δ ≤ γ`, else `n + 1`, with `n ∈ ℤ`, `δ ∈ [0, 1)`.
pub fn nearest_integer_qh(gamma: &Rational, t: &Rational) -> Result<BigInt, QuasiError> {
    if !gamma.is_positive() || *gamma > rat(1, 1) {
        return Err(QuasiError::InvalidGamma(gamma.to_string()));
    }
    let n = t.floor().to_integer();
    let delta = t - Rational::from_integer(n.clone());
    Ok(if delta <= *gamma { n } else { n + 1 })
}

/// A real-valued function on a group with a possibly known defect bound.
pub trait Quasimorphism<G: Ambient> {
    fn name(&self) -> String;
    fn eval(&self, x: &G::Elem) -> Result<Rational, QuasiError>;
    /// A proven bound on `|q(gh) − q(g) − q(h)|`, if one is known.
    fn declared_defect(&self) -> Option<Rational>;
}

/// `g ↦ brooks_value(w, g)` on the free group.
#[derive(Clone, Debug)]
pub struct BrooksQm {
    w: FreeWord,
}

impl BrooksQm {
    pub fn new(w: FreeWord) -> Result<Self, QuasiError> {
        check_counted(&w)?;
        Ok(Self { w })
    }

    pub fn word(&self) -> &FreeWord {
        &self.w
    }
}

impl Quasimorphism<FreeGroup> for BrooksQm {
    fn name(&self) -> String {
        format!("brooks({})", self.w)
    }
    fn eval(&self, g: &FreeWord) -> Result<Rational, QuasiError> {
        Ok(Rational::from_integer(brooks_value(&self.w, g)?.into()))
    }
    fn declared_defect(&self) -> Option<Rational> {
        None
    }
}

/// Exponent sum of one generator, a homomorphism `F₂ → ℤ`.
#[derive(Clone, Debug)]
pub struct ExponentSum {
    generator: Letter,
}

impl ExponentSum {
    pub fn x() -> Self {
        Self { generator: 1 }
    }

    pub fn y() -> Self {
        Self { generator: 2 }
    }
}

impl Quasimorphism<FreeGroup> for ExponentSum {
    fn name(&self) -> String {
        format!("exponent-sum({})", if self.generator == 1 { 'x' } else { 'y' })
    }
    fn eval(&self, g: &FreeWord) -> Result<Rational, QuasiError> {
        Ok(Rational::from_integer(g.exponent_sum(self.generator).into()))
    }
    fn declared_defect(&self) -> Option<Rational> {
        Some(Rational::zero())
    }
}

/// The nearest-integer retraction on `(ℚ, +)`, defect set `{−1, 0, 1}`.
#[derive(Clone, Debug)]
pub struct NearestInteger {
    gamma: Rational,
}

impl NearestInteger {
    pub fn new(gamma: Rational) -> Result<Self, QuasiError> {
        nearest_integer_qh(&gamma, &Rational::zero())?;
        Ok(Self { gamma })
    }
}

impl Quasimorphism<crate::group::RationalLine> for NearestInteger {
    fn name(&self) -> String {
        format!("nearest-integer(gamma={})", self.gamma)
    }
    fn eval(&self, t: &Rational) -> Result<Rational, QuasiError> {
        Ok(Rational::from_integer(nearest_integer_qh(&self.gamma, t)?))
    }
    fn declared_defect(&self) -> Option<Rational> {
        Some(rat(1, 1))
    }
}

/// `q(gh) − q(g) − q(h)`.
pub fn defect_value<G: Ambient, Q: Quasimorphism<G>>(
    g: &G,
    q: &Q,
    a: &G::Elem,
    b: &G::Elem,
) -> Result<Rational, QuasiError> {
    Ok(q.eval(&g.compose(a, b)?)? - q.eval(a)? - q.eval(b)?)
}

/// `max |q(gh) − q(g) − q(h)|` over all ordered pairs of the ball.
pub fn empirical_defect<G: Ambient, Q: Quasimorphism<G>>(
    g: &G,
    q: &Q,
    ball: &PointSet<G::Elem>,
) -> Result<Rational, QuasiError> {
    if ball.is_empty() {
        return Err(QuasiError::EmptyBall);
    }
    let values = ball.iter().map(|x| q.eval(x)).collect::<Result<Vec<_>, _>>()?;
    let mut worst = Rational::zero();
    for (a, qa) in ball.iter().zip(&values) {
        for (b, qb) in ball.iter().zip(&values) {
            let d = (q.eval(&g.compose(a, b)?)? - qa - qb).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    Ok(worst)
}

/// `q(xᴺ)/N` at `N`, `2N` and `4N`. Reported for inspection only; nothing
/// is claimed about convergence.
#[derive(Clone, Debug, PartialEq)]
pub struct Homogenization {
    pub estimates: Vec<(u64, Rational)>,
}

impl Homogenization {
    pub fn value(&self) -> &Rational {
        &self.estimates[0].1
    }

    pub fn to_json(&self) -> Value {
        json!(self.estimates.iter().map(|(n, v)| json!({ "n": n, "estimate": v.to_string() })).collect::<Vec<_>>())
    }
}

pub fn homogenize_estimate<G: Ambient, Q: Quasimorphism<G>>(
    g: &G,
    q: &Q,
    x: &G::Elem,
    n: u64,
) -> Result<Homogenization, QuasiError> {
    if n == 0 {
        return Err(QuasiError::InvalidCount("N"));
    }
    let mut estimates = Vec::with_capacity(3);
    let mut power = g.identity();
    let mut done = 0u64;
    for target in [n, 2 * n, 4 * n] {
        while done < target {
            power = g.compose(&power, x)?;
            done += 1;
        }
        estimates.push((target, q.eval(&power)? / Rational::from_integer(target.into())));
    }
    Ok(Homogenization { estimates })
}

/// `{g ∈ ball : |q(g)| ≤ bound}`, keeping the ball's region.
pub fn approximate_kernel<G: Ambient, Q: Quasimorphism<G>>(
    q: &Q,
    bound: &Rational,
    ball: &PointSet<G::Elem>,
) -> Result<PointSet<G::Elem>, QuasiError> {
    if bound.is_negative() {
        return Err(QuasiError::NegativeBound(bound.to_string()));
    }
    let mut keep = std::collections::HashSet::new();
    for x in ball.iter() {
        if q.eval(x)?.abs() <= *bound {
            keep.insert(x.clone());
        }
    }
    Ok(ball.filter(|x| keep.contains(x)))
}

/// Seeded sample of the nearest-integer defect over random rational pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearIntSample {
    pub gamma: Rational,
    pub pairs: usize,
    pub seed: u64,
    /// Counts of defect values −1, 0, 1.
    pub histogram: [usize; 3],
    /// First pair whose defect left `{−1, 0, 1}`.
    pub violation: Option<(Rational, Rational, BigInt)>,
}

impl NearIntSample {
    pub fn max_abs_defect(&self) -> u8 {
        if self.violation.is_some() {
            2
        } else if self.histogram[0] + self.histogram[2] > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "gamma": self.gamma.to_string(),
            "pairs": self.pairs,
            "seed": self.seed,
            "histogram": { "-1": self.histogram[0], "0": self.histogram[1], "1": self.histogram[2] },
            "max_abs_defect": self.max_abs_defect(),
            "violation": self.violation.as_ref().map(|(s, t, d)| json!({
                "s": s.to_string(), "t": t.to_string(), "defect": d.to_string(),
            })),
        })
    }
}

/// A rational with numerator in `[−10⁶, 10⁶]` and denominator in `[1, 10³]`.
pub fn sample_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-1_000_000i64..=1_000_000).into(), rng.gen_range(1i64..=1000).into())
}

pub fn nearest_integer_sample(gamma: &Rational, pairs: usize, seed: u64) -> Result<NearIntSample, QuasiError> {
    let q = NearestInteger::new(gamma.clone())?;
    let line = crate::group::RationalLine;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut histogram = [0usize; 3];
    let mut violation = None;
    for _ in 0..pairs {
        let s = sample_rational(&mut rng);
        let t = sample_rational(&mut rng);
        let d = defect_value(&line, &q, &s, &t)?.to_integer();
        match i8::try_from(&d) {
            Ok(v @ -1..=1) => histogram[(v + 1) as usize] += 1,
            _ => {
                if violation.is_none() {
                    violation = Some((s, t, d));
                }
            }
        }
    }
    Ok(NearIntSample { gamma: gamma.clone(), pairs, seed, histogram, violation })
}
