//! Exact scalar and 2×2 matrix arithmetic.
//!
//! Three scalar kinds are supported: rationals, elements `a + b√d` of a real
//! quadratic field, and elements of `ℤ[1/p]`. Every decision (sign, order,
//! window membership) is made with rational arithmetic; floats only appear in
//! `to_f64` conversions used for plotting and reporting.

mod mat2;
mod pscaled;
mod quad;
mod rational;
mod scalar;

pub use mat2::Mat2;
pub use pscaled::PScaled;
pub use quad::QuadScalar;
pub use rational::{parse_rational, rat, rational_height, Rational};
pub use scalar::{FieldScalar, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not a square-free integer >= 2")]
    NotSquareFree(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{value} does not have a denominator that is a power of {p}")]
    NotPScaled { value: String, p: u64 },
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

pub(crate) fn is_square_free(d: i64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut f = 2i64;
    while f * f <= n {
        if n % (f * f) == 0 {
            return false;
        }
        if n % f == 0 {
            n /= f;
        }
        f += 1;
    }
    true
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= p {
        if p.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}
