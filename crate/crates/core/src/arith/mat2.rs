use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{ArithError, Scalar};

/// A 2×2 matrix over one scalar kind, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2<S> {
    e: [S; 4],
}

impl<S: Scalar> Mat2<S> {
    pub fn new(e11: S, e12: S, e21: S, e22: S) -> Self {
        Self { e: [e11, e12, e21, e22] }
    }

    /// Identity matrix over the ring of `like`.
    pub fn identity_like(like: &S) -> Self {
        let (z, o) = (like.zero_like(), like.one_like());
        Self::new(o.clone(), z.clone(), z, o)
    }

    pub fn entries(&self) -> &[S; 4] {
        &self.e
    }

    pub fn e11(&self) -> &S {
        &self.e[0]
    }
    pub fn e12(&self) -> &S {
        &self.e[1]
    }
    pub fn e21(&self) -> &S {
        &self.e[2]
    }
    pub fn e22(&self) -> &S {
        &self.e[3]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &rhs.e;
        Self::new(
            a.mul_ref(p).add_ref(&b.mul_ref(r)),
            a.mul_ref(q).add_ref(&b.mul_ref(s)),
            c.mul_ref(p).add_ref(&d.mul_ref(r)),
            c.mul_ref(q).add_ref(&d.mul_ref(s)),
        )
    }

    pub fn det(&self) -> S {
        let [a, b, c, d] = &self.e;
        a.mul_ref(d).sub_ref(&b.mul_ref(c))
    }

    /// Inverse of a determinant-one matrix: `[[d, −b], [−c, a]]`.
    pub fn inv(&self) -> Result<Self, ArithError> {
        let det = self.det();
        if !det.is_one_scalar() {
            return Err(ArithError::NotUnimodular(det.to_string()));
        }
        let [a, b, c, d] = &self.e;
        Ok(Self::new(d.clone(), b.neg_ref(), c.neg_ref(), a.clone()))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity_like(&self.e[0])
    }

    /// `self − I`.
    pub fn minus_identity(&self) -> Self {
        let one = self.e[0].one_like();
        let [a, b, c, d] = &self.e;
        Self::new(a.sub_ref(&one), b.clone(), c.clone(), d.sub_ref(&one))
    }

    /// Entrywise map, e.g. Galois conjugation.
    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        let [a, b, c, d] = &self.e;
        Self::new(f(a), f(b), f(c), f(d))
    }

    /// Largest entry height.
    pub fn height(&self) -> BigInt {
        self.e.iter().map(Scalar::height).max().expect("four entries")
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        let [a, b, c, d] = &self.e;
        [[a.to_f64(), b.to_f64()], [c.to_f64(), d.to_f64()]]
    }

    /// Upper or lower unipotent: ones on the diagonal, at least one zero
    /// off the diagonal.
    pub fn is_unipotent_triangular(&self) -> bool {
        let [a, b, c, d] = &self.e;
        a.is_one_scalar() && d.is_one_scalar() && (b.is_zero_scalar() || c.is_zero_scalar())
    }
}

impl<S: Scalar> fmt::Display for Mat2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.e;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl<S: Scalar> FromStr for Mat2<S> {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ArithError::Parse(s.to_string());
        let body = t.strip_prefix("[[").and_then(|x| x.strip_suffix("]]")).ok_or_else(err)?;
        let (r1, r2) = body.split_once("],[").ok_or_else(err)?;
        let (a, b) = r1.split_once(',').ok_or_else(err)?;
        let (c, d) = r2.split_once(',').ok_or_else(err)?;
        Ok(Self::new(S::parse_scalar(a)?, S::parse_scalar(b)?, S::parse_scalar(c)?, S::parse_scalar(d)?))
    }
}
