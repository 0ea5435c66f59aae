use std::cmp::Ordering;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::{Ambient, GroupError, LineAmbient};
use crate::arith::{parse_rational, Mat2, PScaled, QuadScalar, Rational, Scalar};

fn parse_err(e: crate::arith::ArithError) -> GroupError {
    match e {
        crate::arith::ArithError::Parse(s) => GroupError::Parse(s),
        other => GroupError::Parse(other.to_string()),
    }
}

/// `(ℤ, +)` with gauge `|n|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ambient for Integers {
    type Elem = i64;

    fn label(&self) -> String {
        "Z".into()
    }
    fn compose(&self, a: &i64, b: &i64) -> Result<i64, GroupError> {
        a.checked_add(*b).ok_or_else(|| GroupError::Operation("integer overflow".into()))
    }
    fn invert(&self, a: &i64) -> Result<i64, GroupError> {
        a.checked_neg().ok_or_else(|| GroupError::Operation("integer overflow".into()))
    }
    fn identity(&self) -> i64 {
        0
    }
    fn gauge(&self, a: &i64) -> f64 {
        a.unsigned_abs() as f64
    }
    fn cmp_gauge(&self, a: &i64, b: &i64) -> Ordering {
        a.unsigned_abs().cmp(&b.unsigned_abs())
    }
    fn within(&self, a: &i64, bound: &Rational) -> bool {
        Rational::from_integer(BigInt::from(a.unsigned_abs())) <= *bound
    }
    fn parse_elem(&self, s: &str) -> Result<i64, GroupError> {
        s.trim().parse().map_err(|_| GroupError::Parse(s.to_string()))
    }
}

impl LineAmbient for Integers {
    fn position(&self, a: &i64) -> f64 {
        *a as f64
    }
    fn cmp_position(&self, a: &i64, b: &i64) -> Ordering {
        a.cmp(b)
    }
}

/// `(ℚ, +)` with gauge `|x|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalLine;

impl Ambient for RationalLine {
    type Elem = Rational;

    fn label(&self) -> String {
        "Q".into()
    }
    fn compose(&self, a: &Rational, b: &Rational) -> Result<Rational, GroupError> {
        Ok(a + b)
    }
    fn invert(&self, a: &Rational) -> Result<Rational, GroupError> {
        Ok(-a.clone())
    }
    fn identity(&self) -> Rational {
        Rational::from_integer(0.into())
    }
    fn gauge(&self, a: &Rational) -> f64 {
        Scalar::to_f64(&a.abs())
    }
    fn cmp_gauge(&self, a: &Rational, b: &Rational) -> Ordering {
        a.abs().cmp(&b.abs())
    }
    fn within(&self, a: &Rational, bound: &Rational) -> bool {
        a.abs() <= *bound
    }
    fn parse_elem(&self, s: &str) -> Result<Rational, GroupError> {
        parse_rational(s).map_err(parse_err)
    }
}

impl LineAmbient for RationalLine {
    fn position(&self, a: &Rational) -> f64 {
        Scalar::to_f64(a)
    }
    fn cmp_position(&self, a: &Rational, b: &Rational) -> Ordering {
        a.cmp(b)
    }
}

/// Additive group of `ℚ(√d)` in its real embedding, gauge `|x|`.
#[derive(Clone, Copy, Debug)]
pub struct RealQuadratic {
    d: i64,
}

impl RealQuadratic {
    pub fn new(d: i64) -> Result<Self, crate::arith::ArithError> {
        QuadScalar::zero(d)?;
        Ok(Self { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }
}

impl Ambient for RealQuadratic {
    type Elem = QuadScalar;

    fn label(&self) -> String {
        format!("Q(sqrt({}))", self.d)
    }
    fn compose(&self, a: &QuadScalar, b: &QuadScalar) -> Result<QuadScalar, GroupError> {
        Ok(a + b)
    }
    fn invert(&self, a: &QuadScalar) -> Result<QuadScalar, GroupError> {
        Ok(-a)
    }
    fn identity(&self) -> QuadScalar {
        QuadScalar::raw(Rational::from_integer(0.into()), Rational::from_integer(0.into()), self.d)
    }
    fn gauge(&self, a: &QuadScalar) -> f64 {
        a.to_f64().abs()
    }
    fn cmp_gauge(&self, a: &QuadScalar, b: &QuadScalar) -> Ordering {
        a.abs().cmp_real(&b.abs())
    }
    fn within(&self, a: &QuadScalar, bound: &Rational) -> bool {
        a.abs_le(bound)
    }
    /// `a+b*sqrt(d)`, or a plain rational `a`.
    fn parse_elem(&self, s: &str) -> Result<QuadScalar, GroupError> {
        if !s.contains("sqrt") {
            let a = parse_rational(s).map_err(parse_err)?;
            return QuadScalar::from_rational(a, self.d).map_err(parse_err);
        }
        let x: QuadScalar = s.parse().map_err(parse_err)?;
        if x.d() != self.d {
            return Err(GroupError::Parse(format!("{s} is not in Q(sqrt({}))", self.d)));
        }
        Ok(x)
    }
}

impl LineAmbient for RealQuadratic {
    fn position(&self, a: &QuadScalar) -> f64 {
        a.to_f64()
    }
    fn cmp_position(&self, a: &QuadScalar, b: &QuadScalar) -> Ordering {
        a.cmp_real(b)
    }
}

fn parse_pscaled(s: &str, p: u64) -> Result<PScaled, GroupError> {
    let x: PScaled = s.parse().map_err(parse_err)?;
    if x.p() != p {
        return Err(GroupError::Parse(format!("{s} is not in Z[1/{p}]")));
    }
    Ok(x)
}

/// `ℤ[1/p]` inside the reals: gauge is the archimedean absolute value.
#[derive(Clone, Copy, Debug)]
pub struct ZpReal {
    p: u64,
}

impl ZpReal {
    pub fn new(p: u64) -> Result<Self, crate::arith::ArithError> {
        PScaled::from_int(0, p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Ambient for ZpReal {
    type Elem = PScaled;

    fn label(&self) -> String {
        format!("Z[1/{}] in R", self.p)
    }
    fn compose(&self, a: &PScaled, b: &PScaled) -> Result<PScaled, GroupError> {
        Ok(a + b)
    }
    fn invert(&self, a: &PScaled) -> Result<PScaled, GroupError> {
        Ok(-a)
    }
    fn identity(&self) -> PScaled {
        PScaled::raw(Rational::from_integer(0.into()), self.p)
    }
    fn gauge(&self, a: &PScaled) -> f64 {
        a.to_f64().abs()
    }
    fn cmp_gauge(&self, a: &PScaled, b: &PScaled) -> Ordering {
        a.abs().cmp(&b.abs())
    }
    fn within(&self, a: &PScaled, bound: &Rational) -> bool {
        a.abs() <= *bound
    }
    fn parse_elem(&self, s: &str) -> Result<PScaled, GroupError> {
        parse_pscaled(s, self.p)
    }
}

impl LineAmbient for ZpReal {
    fn position(&self, a: &PScaled) -> f64 {
        a.to_f64()
    }
    fn cmp_position(&self, a: &PScaled, b: &PScaled) -> Ordering {
        a.cmp_value(b)
    }
}

/// `ℤ[1/p]` inside `ℚ_p`: gauge is the p-adic norm.
#[derive(Clone, Copy, Debug)]
pub struct ZpAdic {
    p: u64,
}

impl ZpAdic {
    pub fn new(p: u64) -> Result<Self, crate::arith::ArithError> {
        PScaled::from_int(0, p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Ambient for ZpAdic {
    type Elem = PScaled;

    fn label(&self) -> String {
        format!("Z[1/{}] in Q_{}", self.p, self.p)
    }
    fn compose(&self, a: &PScaled, b: &PScaled) -> Result<PScaled, GroupError> {
        Ok(a + b)
    }
    fn invert(&self, a: &PScaled) -> Result<PScaled, GroupError> {
        Ok(-a)
    }
    fn identity(&self) -> PScaled {
        PScaled::raw(Rational::from_integer(0.into()), self.p)
    }
    fn gauge(&self, a: &PScaled) -> f64 {
        Scalar::to_f64(&a.padic_norm())
    }
    fn cmp_gauge(&self, a: &PScaled, b: &PScaled) -> Ordering {
        a.padic_norm().cmp(&b.padic_norm())
    }
    fn within(&self, a: &PScaled, bound: &Rational) -> bool {
        a.padic_norm() <= *bound
    }
    fn parse_elem(&self, s: &str) -> Result<PScaled, GroupError> {
        parse_pscaled(s, self.p)
    }
}

/// `SL₂` over one scalar kind, gauge = entry height of `g − I`.
#[derive(Clone, Debug)]
pub struct Sl2Group<S> {
    label: String,
    unit: S,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> Sl2Group<S> {
    /// `unit` fixes the scalar ring (its value is irrelevant).
    pub fn new(label: impl Into<String>, unit: S) -> Self {
        Self { label: label.into(), unit, _scalar: PhantomData }
    }

    pub fn height(&self, g: &Mat2<S>) -> BigInt {
        g.minus_identity().height()
    }
}

impl<S: Scalar> Ambient for Sl2Group<S> {
    type Elem = Mat2<S>;

    fn label(&self) -> String {
        self.label.clone()
    }
    fn compose(&self, a: &Mat2<S>, b: &Mat2<S>) -> Result<Mat2<S>, GroupError> {
        Ok(a.mul(b))
    }
    fn invert(&self, a: &Mat2<S>) -> Result<Mat2<S>, GroupError> {
        a.inv().map_err(|e| GroupError::Operation(e.to_string()))
    }
    fn identity(&self) -> Mat2<S> {
        Mat2::identity_like(&self.unit)
    }
    fn gauge(&self, a: &Mat2<S>) -> f64 {
        self.height(a).to_f64().unwrap_or(f64::INFINITY)
    }
    fn cmp_gauge(&self, a: &Mat2<S>, b: &Mat2<S>) -> Ordering {
        self.height(a).cmp(&self.height(b))
    }
    fn within(&self, a: &Mat2<S>, bound: &Rational) -> bool {
        Rational::from_integer(self.height(a)) <= *bound
    }
    fn parse_elem(&self, s: &str) -> Result<Mat2<S>, GroupError> {
        let m: Mat2<S> = s.parse().map_err(parse_err)?;
        if !m.det().is_one_scalar() {
            return Err(GroupError::Parse(format!("{s} does not have determinant 1")));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn gauges_vanish_at_identity_and_are_inversion_invariant() {
        let z = Integers;
        assert_eq!(z.gauge(&z.identity()), 0.0);
        assert_eq!(z.gauge(&-7), z.gauge(&7));

        let q = RealQuadratic::new(5).unwrap();
        let phi = QuadScalar::golden_ratio();
        assert_eq!(q.cmp_gauge(&phi, &q.invert(&phi).unwrap()), Ordering::Equal);
        assert!(q.within(&q.identity(), &rat(0, 1)));

        let adic = ZpAdic::new(2).unwrap();
        let x = PScaled::new(rat(3, 4), 2).unwrap();
        assert!(adic.within(&x, &rat(4, 1)));
        assert!(!adic.within(&x, &rat(2, 1)));

        let sl = Sl2Group::new("SL2(Q)", rat(0, 1));
        let u = Mat2::new(rat(1, 1), rat(3, 2), rat(0, 1), rat(1, 1));
        assert_eq!(sl.gauge(&sl.identity()), 0.0);
        assert_eq!(sl.gauge(&u), sl.gauge(&sl.invert(&u).unwrap()));
    }

    #[test]
    fn parse_checks_field_and_ring() {
        let q = RealQuadratic::new(5).unwrap();
        assert!(q.parse_elem("1+1*sqrt(2)").is_err());
        assert!(ZpReal::new(3).unwrap().parse_elem("1/2^1").is_err());
        let sl = Sl2Group::new("SL2(Q)", rat(0, 1));
        assert!(sl.parse_elem("[[2,0],[0,1]]").is_err());
        assert!(sl.parse_elem("[[2,0],[0,1/2]]").is_ok());
    }
}
