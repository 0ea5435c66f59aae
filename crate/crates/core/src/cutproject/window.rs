use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{Mat2, PScaled, QuadScalar, Rational, Scalar};

/// The internal-side acceptance region. Every window is symmetric about the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    /// `[−radius, radius]`.
    RealInterval { radius: Rational },
    /// Product of symmetric intervals.
    RealBox { radii: Vec<Rational> },
    /// `{x : |x|_p ≤ p^exp}`, a compact open subgroup.
    PadicBall { p: u64, exp: i64 },
    /// `{g : ‖g − I‖_sup ≤ radius}`.
    MatrixBall { radius: Rational },
}

impl Window {
    pub fn interval(radius: Rational) -> Self {
        Window::RealInterval { radius }
    }

    pub fn is_valid(&self) -> bool {
        match self {
            Window::RealInterval { radius } | Window::MatrixBall { radius } => !radius.is_negative(),
            Window::RealBox { radii } => radii.iter().all(|r| !r.is_negative()),
            Window::PadicBall { p, .. } => crate::arith::is_prime(*p),
        }
    }

    /// A window containing `W·W⁻¹`. Exact for intervals, boxes and p-adic
    /// balls; for matrix balls the submultiplicative bound
    /// `‖A + B + AB‖ ≤ 2ε + 2ε²` is used.
    pub fn difference(&self) -> Window {
        match self {
            Window::RealInterval { radius } => Window::RealInterval { radius: radius + radius },
            Window::RealBox { radii } => Window::RealBox { radii: radii.iter().map(|r| r + r).collect() },
            Window::PadicBall { .. } => self.clone(),
            Window::MatrixBall { radius } => {
                Window::MatrixBall { radius: (radius + radius) * (Rational::one() + radius) }
            }
        }
    }

    /// `self ⊆ other`, for windows of the same kind.
    pub fn is_subset_of(&self, other: &Window) -> Option<bool> {
        match (self, other) {
            (Window::RealInterval { radius: a }, Window::RealInterval { radius: b })
            | (Window::MatrixBall { radius: a }, Window::MatrixBall { radius: b }) => Some(a <= b),
            (Window::RealBox { radii: a }, Window::RealBox { radii: b }) if a.len() == b.len() => {
                Some(a.iter().zip(b).all(|(x, y)| x <= y))
            }
            (Window::PadicBall { p: p1, exp: e1 }, Window::PadicBall { p: p2, exp: e2 }) if p1 == p2 => Some(e1 <= e2),
            _ => None,
        }
    }

    /// Real interval membership of a quadratic value.
    pub fn contains_quad(&self, x: &QuadScalar) -> bool {
        match self {
            Window::RealInterval { radius } => x.abs_le(radius),
            _ => false,
        }
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        match self {
            Window::RealInterval { radius } => x.abs() <= *radius,
            _ => false,
        }
    }

    pub fn contains_padic(&self, x: &PScaled) -> bool {
        match self {
            Window::PadicBall { p, exp } => *p == x.p() && x.padic_norm_le_pow(*exp),
            _ => false,
        }
    }

    /// Matrix ball membership, entries compared in the real embedding.
    pub fn contains_matrix(&self, g: &Mat2<QuadScalar>) -> bool {
        match self {
            Window::MatrixBall { radius } => g.minus_identity().entries().iter().all(|e| e.abs_le(radius)),
            _ => false,
        }
    }

    pub fn radius_f64(&self) -> f64 {
        match self {
            Window::RealInterval { radius } | Window::MatrixBall { radius } => Scalar::to_f64(radius),
            Window::RealBox { radii } => radii.iter().map(Scalar::to_f64).fold(0.0, f64::max),
            Window::PadicBall { p, exp } => (*p as f64).powi(*exp as i32),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Window::RealInterval { radius } => json!({"kind": "real_interval", "radius": radius.to_string()}),
            Window::RealBox { radii } => json!({
                "kind": "real_box",
                "radii": radii.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
            Window::PadicBall { p, exp } => json!({"kind": "padic_ball", "p": p, "exp": exp}),
            Window::MatrixBall { radius } => json!({"kind": "matrix_ball", "radius": radius.to_string()}),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::RealInterval { radius } => write!(f, "[-{radius},{radius}]"),
            Window::RealBox { radii } => {
                let parts: Vec<String> = radii.iter().map(|r| format!("[-{r},{r}]")).collect();
                write!(f, "{}", parts.join("x"))
            }
            Window::PadicBall { p, exp } => write!(f, "|x|_{p} <= {p}^{exp}"),
            Window::MatrixBall { radius } => write!(f, "|g - I|_sup <= {radius}"),
        }
    }
}

/// `p^k` as a rational, for any integer `k`.
pub(crate) fn rational_pow(p: u64, k: i64) -> Rational {
    let base = BigInt::from(p);
    let m: BigInt = Pow::pow(&base, k.unsigned_abs());
    if k >= 0 {
        Rational::from_integer(m)
    } else {
        Rational::new(BigInt::one(), m)
    }
}

/// Largest `k` with `p^k ≤ bound`; `None` if `bound ≤ 0`.
pub(crate) fn floor_log(p: u64, bound: &Rational) -> Option<i64> {
    if !bound.is_positive() || bound.is_zero() {
        return None;
    }
    let mut k = 0i64;
    if rational_pow(p, 0) <= *bound {
        while rational_pow(p, k + 1) <= *bound {
            k += 1;
        }
    } else {
        while rational_pow(p, k) > *bound {
            k -= 1;
        }
    }
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn logs_and_powers() {
        assert_eq!(floor_log(2, &rat(5, 1)), Some(2));
        assert_eq!(floor_log(2, &rat(4, 1)), Some(2));
        assert_eq!(floor_log(2, &rat(1, 3)), Some(-2));
        assert_eq!(floor_log(3, &rat(0, 1)), None);
        assert_eq!(rational_pow(2, -3), rat(1, 8));
    }

    #[test]
    fn difference_windows() {
        assert_eq!(Window::interval(rat(1, 1)).difference(), Window::interval(rat(2, 1)));
        let ball = Window::PadicBall { p: 2, exp: 1 };
        assert_eq!(ball.difference(), ball);
        assert_eq!(Window::MatrixBall { radius: rat(1, 5) }.difference(), Window::MatrixBall { radius: rat(12, 25) });
    }

    #[test]
    fn subset_relation() {
        let small = Window::interval(rat(1, 1));
        let big = Window::interval(rat(2, 1));
        assert_eq!(small.is_subset_of(&big), Some(true));
        assert_eq!(big.is_subset_of(&small), Some(false));
        assert_eq!(small.is_subset_of(&Window::PadicBall { p: 2, exp: 0 }), None);
    }
}
