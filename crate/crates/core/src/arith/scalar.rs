use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::rational::{parse_rational, rational_height, Rational};
use super::{ArithError, PScaled, QuadScalar};

/// Ring operations shared by the three scalar kinds, so that [`Mat2`]
/// can be generic over them. Constants are produced "like" an existing
/// value because quadratic and p-scaled scalars carry their field.
///
/// [`Mat2`]: super::Mat2
pub trait Scalar: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display {
    fn parse_scalar(s: &str) -> Result<Self, ArithError>;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn is_zero_scalar(&self) -> bool;
    fn height(&self) -> BigInt;
    fn to_f64(&self) -> f64;

    fn is_one_scalar(&self) -> bool {
        *self == self.one_like()
    }
}

impl Scalar for Rational {
    fn parse_scalar(s: &str) -> Result<Self, ArithError> {
        parse_rational(s)
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn is_zero_scalar(&self) -> bool {
        self.is_zero()
    }
    fn height(&self) -> BigInt {
        rational_height(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for QuadScalar {
    fn parse_scalar(s: &str) -> Result<Self, ArithError> {
        s.parse()
    }
    fn zero_like(&self) -> Self {
        self.rational(Rational::zero())
    }
    fn one_like(&self) -> Self {
        self.rational(Rational::one())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn is_zero_scalar(&self) -> bool {
        self.is_zero()
    }
    fn height(&self) -> BigInt {
        QuadScalar::height(self)
    }
    fn to_f64(&self) -> f64 {
        QuadScalar::to_f64(self)
    }
}

impl Scalar for PScaled {
    fn parse_scalar(s: &str) -> Result<Self, ArithError> {
        s.parse()
    }
    fn zero_like(&self) -> Self {
        self.same_ring(Rational::zero())
    }
    fn one_like(&self) -> Self {
        self.same_ring(Rational::one())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn is_zero_scalar(&self) -> bool {
        self.is_zero()
    }
    fn height(&self) -> BigInt {
        PScaled::height(self)
    }
    fn to_f64(&self) -> f64 {
        PScaled::to_f64(self)
    }
}

/// Any one of the three scalar kinds, as read from text. The syntax picks
/// the kind: `a+b*sqrt(d)` is quadratic, `m/p^k` is p-scaled, anything
/// else is parsed as a rational `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(Rational),
    Quad(QuadScalar),
    PScaled(PScaled),
}

impl FromStr for FieldScalar {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains("sqrt") {
            s.parse().map(FieldScalar::Quad)
        } else if s.contains('^') {
            s.parse().map(FieldScalar::PScaled)
        } else {
            parse_rational(s).map(FieldScalar::Rational)
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => write!(f, "{r}"),
            FieldScalar::Quad(q) => write!(f, "{q}"),
            FieldScalar::PScaled(x) => write!(f, "{x}"),
        }
    }
}
