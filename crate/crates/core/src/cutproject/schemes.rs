use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use super::window::{floor_log, rational_pow};
use super::{CutProjectError, CutProjectScheme, Window};
use crate::arith::{Mat2, PScaled, QuadScalar, Rational, Scalar};
use crate::group::{RealQuadratic, Sl2Group, ZpAdic, ZpReal};

fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

fn require_window(ok: bool, scheme: &str, w: &Window) -> Result<(), CutProjectError> {
    if ok && w.is_valid() {
        Ok(())
    } else {
        Err(CutProjectError::InvalidWindow(format!("{w} is not usable for the {scheme} scheme")))
    }
}

/// Ring of integers of `ℚ(√d)`, embedded in `ℝ × ℝ` by `x ↦ (x, x*)`.
#[derive(Clone, Debug)]
pub struct QuadraticScheme {
    d: i64,
    window: Window,
}

impl QuadraticScheme {
    pub fn new(d: i64, window: Window) -> Result<Self, CutProjectError> {
        RealQuadratic::new(d)?;
        require_window(matches!(window, Window::RealInterval { .. }), "quadratic", &window)?;
        Ok(Self { d, window })
    }

    /// `ℤ[φ]` with window `[−radius, radius]`.
    pub fn fibonacci(radius: Rational) -> Self {
        Self::new(5, Window::interval(radius)).expect("5 is square-free")
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `x = m + n·ω`, with `ω = (1+√d)/2` when `d ≡ 1 (mod 4)` and `√d`
    /// otherwise.
    fn element(&self, m: i64, n: i64) -> QuadScalar {
        if self.d.rem_euclid(4) == 1 {
            let half = Rational::new(n.into(), 2.into());
            QuadScalar::new(Rational::from_integer(m.into()) + &half, half, self.d)
        } else {
            QuadScalar::new(Rational::from_integer(m.into()), Rational::from_integer(n.into()), self.d)
        }
        .expect("validated d")
    }
}

impl CutProjectScheme for QuadraticScheme {
    type G = RealQuadratic;
    type Internal = QuadScalar;

    fn name(&self) -> String {
        if self.d == 5 {
            "fibonacci".into()
        } else {
            format!("quadratic({})", self.d)
        }
    }

    fn ambient(&self) -> RealQuadratic {
        RealQuadratic::new(self.d).expect("validated d")
    }

    fn window(&self) -> &Window {
        &self.window
    }

    fn with_window(&self, window: Window) -> Result<Self, CutProjectError> {
        Self::new(self.d, window)
    }

    fn internal(&self, x: &QuadScalar) -> QuadScalar {
        x.conj()
    }

    fn internal_in(&self, w: &Window, x: &QuadScalar) -> bool {
        w.contains_quad(x)
    }

    fn candidates(&self, range: &Rational) -> Vec<QuadScalar> {
        let r = self.window.radius_f64();
        let big = Scalar::to_f64(range);
        let sd = (self.d as f64).sqrt();
        let (omega, omega_conj, spread) =
            if self.d.rem_euclid(4) == 1 { ((1.0 + sd) / 2.0, (1.0 - sd) / 2.0, sd) } else { (sd, -sd, 2.0 * sd) };
        // x − x* = n·spread, so |n| ≤ (range + r)/spread; one unit of slack
        // absorbs float error, the exact filter runs afterwards.
        let n_max = ((big + r) / spread).floor() as i64 + 1;
        let mut out = Vec::new();
        for n in -n_max..=n_max {
            let nf = n as f64;
            let lo = (-big - nf * omega).max(-r - nf * omega_conj).ceil() as i64 - 1;
            let hi = (big - nf * omega).min(r - nf * omega_conj).floor() as i64 + 1;
            for m in lo..=hi {
                out.push(self.element(m, n));
            }
        }
        out
    }

    fn physical_coords(&self, x: &QuadScalar) -> Vec<f64> {
        vec![x.to_f64()]
    }

    fn to_json(&self) -> Value {
        json!({ "kind": "quadratic", "name": self.name(), "d": self.d })
    }
}

/// `ℤ[1/p]` embedded in `ℝ × ℚ_p`; physical side `ℝ`, window a p-adic ball.
#[derive(Clone, Debug)]
pub struct PAdicWindowScheme {
    p: u64,
    window: Window,
}

impl PAdicWindowScheme {
    pub fn new(p: u64, window_exp: i64) -> Result<Self, CutProjectError> {
        ZpReal::new(p)?;
        Ok(Self { p, window: Window::PadicBall { p, exp: window_exp } })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl CutProjectScheme for PAdicWindowScheme {
    type G = ZpReal;
    type Internal = PScaled;

    fn name(&self) -> String {
        "zp".into()
    }

    fn ambient(&self) -> ZpReal {
        ZpReal::new(self.p).expect("validated p")
    }

    fn window(&self) -> &Window {
        &self.window
    }

    fn with_window(&self, window: Window) -> Result<Self, CutProjectError> {
        match window {
            Window::PadicBall { p, exp } if p == self.p => Self::new(p, exp),
            w => Err(CutProjectError::InvalidWindow(format!("{w} is not a {}-adic ball", self.p))),
        }
    }

    fn internal(&self, x: &PScaled) -> PScaled {
        x.clone()
    }

    fn internal_in(&self, w: &Window, x: &PScaled) -> bool {
        w.contains_padic(x)
    }

    fn candidates(&self, range: &Rational) -> Vec<PScaled> {
        let Window::PadicBall { exp, .. } = self.window else { unreachable!("constructor enforces a p-adic ball") };
        // |x|_p ≤ p^exp  ⇔  x ∈ p^(−exp)·ℤ
        let step = rational_pow(self.p, -exp);
        multiples(&step, range, self.p)
    }

    fn physical_coords(&self, x: &PScaled) -> Vec<f64> {
        vec![x.to_f64()]
    }

    fn to_json(&self) -> Value {
        json!({ "kind": "zp", "p": self.p })
    }
}

/// All `a·step` with `|a·step| ≤ bound`, as elements of `ℤ[1/p]`.
fn multiples(step: &Rational, bound: &Rational, p: u64) -> Vec<PScaled> {
    if bound.is_negative() {
        return Vec::new();
    }
    let a_max = floor_int(&(bound / step)).to_i64().unwrap_or(i64::MAX);
    (-a_max..=a_max)
        .map(|a| PScaled::new(step * Rational::from_integer(a.into()), p).expect("power-of-p denominator"))
        .collect()
}

/// `ℤ[1/p]` embedded in `ℚ_p × ℝ`: the physical side is `ℚ_p` (gauge the
/// p-adic norm) and the window is a real interval. With window `[−1, 1]`
/// and gauge cap `pⁿ` this is `{a/pᵏ : k ≤ n, |a| ≤ pᵏ}`.
#[derive(Clone, Debug)]
pub struct ApproxRingScheme {
    p: u64,
    n: i64,
    window: Window,
}

impl ApproxRingScheme {
    pub fn new(p: u64, n: i64, window: Window) -> Result<Self, CutProjectError> {
        ZpAdic::new(p)?;
        if n < 0 {
            return Err(CutProjectError::InvalidParameter(format!("n must be non-negative, got {n}")));
        }
        require_window(matches!(window, Window::RealInterval { .. }), "approximate ring", &window)?;
        Ok(Self { p, n, window })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// The effective gauge cap `min(pⁿ, range)`.
    pub fn cap(&self, range: &Rational) -> Rational {
        range.min(&rational_pow(self.p, self.n)).clone()
    }
}

impl CutProjectScheme for ApproxRingScheme {
    type G = ZpAdic;
    type Internal = Rational;

    fn name(&self) -> String {
        "approx-ring".into()
    }

    fn ambient(&self) -> ZpAdic {
        ZpAdic::new(self.p).expect("validated p")
    }

    fn physical_bound(&self, range: &Rational) -> Rational {
        self.cap(range)
    }

    fn window(&self) -> &Window {
        &self.window
    }

    fn with_window(&self, window: Window) -> Result<Self, CutProjectError> {
        Self::new(self.p, self.n, window)
    }

    fn internal(&self, x: &PScaled) -> Rational {
        x.value().clone()
    }

    fn internal_in(&self, w: &Window, x: &Rational) -> bool {
        w.contains_rational(x)
    }

    fn candidates(&self, range: &Rational) -> Vec<PScaled> {
        let Some(k) = floor_log(self.p, &self.cap(range)) else {
            return Vec::new();
        };
        // |x|_p ≤ p^k  ⇔  x ∈ p^(−k)·ℤ; the real window bounds |x|.
        let Window::RealInterval { radius } = &self.window else {
            unreachable!("constructor enforces a real interval")
        };
        multiples(&rational_pow(self.p, -k), radius, self.p)
    }

    fn physical_coords(&self, x: &PScaled) -> Vec<f64> {
        vec![x.to_f64()]
    }

    fn to_json(&self) -> Value {
        json!({ "kind": "approx-ring", "p": self.p, "n": self.n })
    }
}

/// `SL₂(O_K)`, `K = ℚ(√d)`, embedded in `SL₂(ℝ) × SL₂(ℝ)` by
/// `g ↦ (g, g*)`. The physical gauge is the entry height of `g − I`, the
/// window a sup-norm ball around `I` on the conjugate side.
#[derive(Clone, Debug)]
pub struct PisotMatrixScheme {
    d: i64,
    window: Window,
}

impl PisotMatrixScheme {
    pub fn new(d: i64, eps: Rational) -> Result<Self, CutProjectError> {
        RealQuadratic::new(d)?;
        if !eps.is_positive() {
            return Err(CutProjectError::InvalidParameter(format!("epsilon must be positive, got {eps}")));
        }
        Ok(Self { d, window: Window::MatrixBall { radius: eps } })
    }

    pub fn eps(&self) -> &Rational {
        match &self.window {
            Window::MatrixBall { radius } => radius,
            _ => unreachable!("constructor enforces a matrix ball"),
        }
    }

    /// Algebraic integers with height ≤ `h` and conjugate in `[−ε, ε]`.
    fn entry_candidates(&self, h: &BigInt) -> Vec<QuadScalar> {
        let two_h = (h * BigInt::from(2)).to_i64().unwrap_or(i64::MAX);
        let eps = self.eps();
        let half_integral = self.d.rem_euclid(4) == 1;
        let mut out = Vec::new();
        for bb in -two_h..=two_h {
            for aa in -two_h..=two_h {
                if !half_integral && (aa.is_odd() || bb.is_odd()) {
                    continue;
                }
                if half_integral && (aa - bb).is_odd() {
                    continue;
                }
                let x = QuadScalar::new(Rational::new(aa.into(), 2.into()), Rational::new(bb.into(), 2.into()), self.d)
                    .expect("validated d");
                if x.height() <= *h && x.conj().abs_le(eps) {
                    out.push(x);
                }
            }
        }
        out
    }
}

impl CutProjectScheme for PisotMatrixScheme {
    type G = Sl2Group<QuadScalar>;
    type Internal = Mat2<QuadScalar>;

    fn name(&self) -> String {
        "pisot-matrix".into()
    }

    fn ambient(&self) -> Sl2Group<QuadScalar> {
        Sl2Group::new(format!("SL2(O_Q(sqrt({})))", self.d), QuadScalar::one(self.d).expect("validated d"))
    }

    fn window(&self) -> &Window {
        &self.window
    }

    fn with_window(&self, window: Window) -> Result<Self, CutProjectError> {
        match window {
            Window::MatrixBall { radius } => Self::new(self.d, radius),
            w => Err(CutProjectError::InvalidWindow(format!("{w} is not a matrix ball"))),
        }
    }

    fn internal(&self, g: &Mat2<QuadScalar>) -> Mat2<QuadScalar> {
        g.map(QuadScalar::conj)
    }

    fn internal_in(&self, w: &Window, g: &Mat2<QuadScalar>) -> bool {
        w.contains_matrix(g)
    }

    /// Writes `g = I + M` and solves `det g = 1` for the last entry of `M`.
    fn candidates(&self, range: &Rational) -> Vec<Mat2<QuadScalar>> {
        if range.is_negative() {
            return Vec::new();
        }
        let h = floor_int(range);
        let cands = self.entry_candidates(&h);
        let index: std::collections::HashSet<&QuadScalar> = cands.iter().collect();
        let one = QuadScalar::one(self.d).expect("validated d");
        let mut out = Vec::new();
        for m11 in &cands {
            let pivot = &one + m11;
            for m12 in &cands {
                for m21 in &cands {
                    let rhs = &one + &(m12 * m21);
                    let solutions: Vec<QuadScalar> = if pivot.is_zero() {
                        // (1+m11)(1+m22) = 1 + m12·m21 forces m12·m21 = −1.
                        if rhs.is_zero() {
                            cands.clone()
                        } else {
                            Vec::new()
                        }
                    } else {
                        let m22 = &(&rhs / &pivot) - &one;
                        if index.contains(&m22) {
                            vec![m22]
                        } else {
                            Vec::new()
                        }
                    };
                    for m22 in solutions {
                        let g = Mat2::new(&one + m11, m12.clone(), m21.clone(), &one + &m22);
                        out.push(g);
                    }
                }
            }
        }
        out
    }

    fn physical_coords(&self, g: &Mat2<QuadScalar>) -> Vec<f64> {
        g.to_f64().iter().flatten().copied().collect()
    }

    fn to_json(&self) -> Value {
        json!({ "kind": "pisot-matrix", "d": self.d })
    }
}
