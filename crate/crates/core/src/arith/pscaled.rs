use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::rational::{rational_height, Rational};
use super::{is_prime, ArithError};

/// An element of `ℤ[1/p]`: a rational whose denominator is a power of `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PScaled {
    value: Rational,
    p: u64,
}

/// Largest `k` with `p^k | n`, for `n != 0`.
fn multiplicity(n: &BigInt, p: &BigInt) -> u64 {
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `Some(k)` if `n == p^k`.
fn log_exact(n: &BigInt, p: &BigInt) -> Option<u64> {
    let k = multiplicity(n, p);
    if Pow::pow(p, k) == *n {
        Some(k)
    } else {
        None
    }
}

impl PScaled {
    pub fn new(value: Rational, p: u64) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if log_exact(value.denom(), &BigInt::from(p)).is_none() {
            return Err(ArithError::NotPScaled { value: value.to_string(), p });
        }
        Ok(Self { value, p })
    }

    /// `m / p^k`.
    pub fn from_parts(m: BigInt, k: u32, p: u64) -> Result<Self, ArithError> {
        let den: BigInt = Pow::pow(&BigInt::from(p), k);
        Self::new(Rational::new(m, den), p)
    }

    pub fn from_int(n: i64, p: u64) -> Result<Self, ArithError> {
        Self::new(Rational::from_integer(BigInt::from(n)), p)
    }

    pub(crate) fn raw(value: Rational, p: u64) -> Self {
        Self { value, p }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn same_ring(&self, r: Rational) -> Self {
        Self::raw(r, self.p)
    }

    /// Exponent `k` of the reduced denominator `p^k`.
    pub fn denominator_exponent(&self) -> u64 {
        log_exact(self.value.denom(), &BigInt::from(self.p)).expect("invariant: p-power denominator")
    }

    /// p-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.value.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let up = multiplicity(self.value.numer(), &p) as i64;
        Some(up - self.denominator_exponent() as i64)
    }

    /// `p^(−v)`, and 0 for 0.
    pub fn padic_norm(&self) -> Rational {
        match self.valuation() {
            None => Rational::zero(),
            Some(v) => {
                let p = BigInt::from(self.p);
                let pk: BigInt = Pow::pow(&p, v.unsigned_abs());
                if v >= 0 {
                    Rational::new(BigInt::one(), pk)
                } else {
                    Rational::from_integer(pk)
                }
            }
        }
    }

    /// `|x|_p ≤ p^n`, i.e. `x ∈ p^(−n) ℤ_p`.
    pub fn padic_norm_le_pow(&self, n: i64) -> bool {
        match self.valuation() {
            None => true,
            Some(v) => -v <= n,
        }
    }

    pub fn abs(&self) -> Rational {
        self.value.abs()
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }

    pub fn height(&self) -> BigInt {
        rational_height(&self.value)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed rings Z[1/{}] and Z[1/{}]", self.p, other.p);
    }
}

impl Add for &PScaled {
    type Output = PScaled;
    fn add(self, rhs: &PScaled) -> PScaled {
        self.check_ring(rhs);
        PScaled::raw(&self.value + &rhs.value, self.p)
    }
}

impl Sub for &PScaled {
    type Output = PScaled;
    fn sub(self, rhs: &PScaled) -> PScaled {
        self.check_ring(rhs);
        PScaled::raw(&self.value - &rhs.value, self.p)
    }
}

impl Mul for &PScaled {
    type Output = PScaled;
    fn mul(self, rhs: &PScaled) -> PScaled {
        self.check_ring(rhs);
        PScaled::raw(&self.value * &rhs.value, self.p)
    }
}

impl Neg for &PScaled {
    type Output = PScaled;
    fn neg(self) -> PScaled {
        PScaled::raw(-self.value.clone(), self.p)
    }
}

impl Add for PScaled {
    type Output = PScaled;
    fn add(self, rhs: PScaled) -> PScaled {
        &self + &rhs
    }
}

impl Sub for PScaled {
    type Output = PScaled;
    fn sub(self, rhs: PScaled) -> PScaled {
        &self - &rhs
    }
}

impl Mul for PScaled {
    type Output = PScaled;
    fn mul(self, rhs: PScaled) -> PScaled {
        &self * &rhs
    }
}

impl Neg for PScaled {
    type Output = PScaled;
    fn neg(self) -> PScaled {
        -&self
    }
}

impl fmt::Display for PScaled {
    /// `m/p^k` with `k` the reduced denominator exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.value.numer(), self.p, self.denominator_exponent())
    }
}

impl FromStr for PScaled {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ArithError::Parse(s.to_string());
        let (m, rest) = t.split_once('/').ok_or_else(err)?;
        let (p, k) = rest.split_once('^').ok_or_else(err)?;
        let m: BigInt = m.parse().map_err(|_| err())?;
        let p: u64 = p.parse().map_err(|_| err())?;
        let k: u32 = k.parse().map_err(|_| err())?;
        PScaled::from_parts(m, k, p)
    }
}
