use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{parse_rational, rational_height, Rational};
use super::{is_square_free, ArithError};

/// An element `a + b√d` of the real quadratic field `ℚ(√d)`.
///
/// Equality is componentwise on `(a, b)` for a fixed `d`. Mixing elements of
/// different fields in one arithmetic operation panics, just like mixing
/// matrix dimensions would.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    a: Rational,
    b: Rational,
    d: i64,
}

fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self, ArithError> {
        if !is_square_free(d) {
            return Err(ArithError::NotSquareFree(d));
        }
        Ok(Self { a, b, d })
    }

    /// Construction for callers that already hold a validated `d`.
    pub(crate) fn raw(a: Rational, b: Rational, d: i64) -> Self {
        debug_assert!(is_square_free(d));
        Self { a, b, d }
    }

    pub fn from_rational(r: Rational, d: i64) -> Result<Self, ArithError> {
        Self::new(r, Rational::zero(), d)
    }

    pub fn zero(d: i64) -> Result<Self, ArithError> {
        Self::new(Rational::zero(), Rational::zero(), d)
    }

    pub fn one(d: i64) -> Result<Self, ArithError> {
        Self::new(Rational::one(), Rational::zero(), d)
    }

    /// `√d` itself.
    pub fn sqrt_d(d: i64) -> Result<Self, ArithError> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// The golden ratio `(1 + √5) / 2`.
    pub fn golden_ratio() -> Self {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        Self::raw(half.clone(), half, 5)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational(&self, r: Rational) -> Self {
        Self::raw(r, Rational::zero(), self.d)
    }

    /// Galois conjugate `a − b√d`.
    pub fn conj(&self) -> Self {
        Self::raw(self.a.clone(), -self.b.clone(), self.d)
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    /// Field trace `2a`.
    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    /// `a + b√d` is an algebraic integer iff its trace and norm are integers.
    pub fn is_algebraic_integer(&self) -> bool {
        self.trace().is_integer() && self.norm().is_integer()
    }

    /// Sign of the real embedding, decided without floating point.
    pub fn signum(&self) -> i8 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
        match a2.cmp(&db2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Exact order of real embeddings.
    pub fn cmp_real(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.cmp_real(&self.rational(r.clone()))
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// `|x| ≤ r` in the real embedding.
    pub fn abs_le(&self, r: &Rational) -> bool {
        self.abs().cmp_rational(r) != Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    /// Pisot test: an algebraic integer greater than 1 whose conjugate lies
    /// strictly inside the unit interval.
    pub fn is_pisot(&self) -> bool {
        if !self.is_algebraic_integer() {
            return false;
        }
        let one = Rational::one();
        if self.cmp_rational(&one) != Ordering::Greater {
            return false;
        }
        self.conj().abs().cmp_rational(&one) == Ordering::Less
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Self::raw(&c.a / &n, &c.b / &n, self.d))
    }

    /// `max(height(a), height(b))`.
    pub fn height(&self) -> BigInt {
        rational_height(&self.a).max(rational_height(&self.b))
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixed quadratic fields Q(sqrt({})) and Q(sqrt({}))", self.d, other.d);
    }
}

impl Add for &QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &QuadScalar) -> QuadScalar {
        self.check_field(rhs);
        QuadScalar::raw(&self.a + &rhs.a, &self.b + &rhs.b, self.d)
    }
}

impl Sub for &QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &QuadScalar) -> QuadScalar {
        self.check_field(rhs);
        QuadScalar::raw(&self.a - &rhs.a, &self.b - &rhs.b, self.d)
    }
}

impl Mul for &QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &QuadScalar) -> QuadScalar {
        self.check_field(rhs);
        let d = Rational::from_integer(BigInt::from(self.d));
        QuadScalar::raw(&self.a * &rhs.a + &self.b * &rhs.b * d, &self.a * &rhs.b + &self.b * &rhs.a, self.d)
    }
}

impl Div for &QuadScalar {
    type Output = QuadScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadScalar) -> QuadScalar {
        let inv = rhs.inverse().expect("division by zero");
        self * &inv
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::raw(-self.a.clone(), -self.b.clone(), self.d)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadScalar {
            type Output = QuadScalar;
            fn $m(self, rhs: QuadScalar) -> QuadScalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        -&self
    }
}

impl fmt::Display for QuadScalar {
    /// `a+b*sqrt(d)`, with `-` in place of `+` when `b` is negative.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt({})", self.a, -self.b.clone(), self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl FromStr for QuadScalar {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ArithError::Parse(s.to_string());
        let body = t.strip_suffix(')').ok_or_else(err)?;
        let (coeffs, d) = body.rsplit_once("*sqrt(").ok_or_else(err)?;
        let d: i64 = d.parse().map_err(|_| err())?;
        // the separator is the last '+' or '-' that is not a leading sign
        // and does not directly follow another operator (as in "1/-2" or "+-3")
        let bytes = coeffs.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'/' | b'+' | b'-'))
            .ok_or_else(err)?;
        let a = parse_rational(&coeffs[..split])?;
        let mut b = parse_rational(&coeffs[split + 1..])?;
        if bytes[split] == b'-' {
            b = -b;
        }
        QuadScalar::new(a, b, d)
    }
}
