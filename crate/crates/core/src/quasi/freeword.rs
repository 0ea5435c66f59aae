use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::arith::Rational;
use crate::group::{Ambient, GroupError, PointSet};

/// Letters: `1 = x`, `-1 = x⁻¹`, `2 = y`, `-2 = y⁻¹`.
pub type Letter = i8;

/// Canonical enumeration order x < X < y < Y.
const ALPHABET: [Letter; 4] = [1, -1, 2, -2];

/// A freely reduced word in the free group on `x, y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Reduces `letters` freely. Letters outside `{±1, ±2}` are rejected.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self, GroupError> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if !ALPHABET.contains(&l) {
                return Err(GroupError::Parse(format!("letter code {l}")));
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(Self(out))
    }

    pub fn x() -> Self {
        Self(vec![1])
    }

    pub fn y() -> Self {
        Self(vec![2])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        let mut rest = other.0.as_slice();
        while let (Some(&a), Some(&b)) = (out.last(), rest.first()) {
            if a != -b {
                break;
            }
            out.pop();
            rest = &rest[1..];
        }
        out.extend_from_slice(rest);
        Self(out)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| -l).collect())
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.mul(&base))
    }

    /// First and last letters are not mutually inverse.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => self.0.len() == 1 || *a != -*b,
            _ => true,
        }
    }

    /// Sum of exponents of one generator (`1` for x, `2` for y).
    pub fn exponent_sum(&self, generator: Letter) -> i64 {
        self.0
            .iter()
            .map(|&l| {
                if l == generator {
                    1
                } else if l == -generator {
                    -1
                } else {
                    0
                }
            })
            .sum()
    }

    fn cmp_enumeration(&self, other: &Self) -> Ordering {
        let rank = |l: &Letter| ALPHABET.iter().position(|a| a == l);
        self.len().cmp(&other.len()).then_with(|| self.0.iter().map(rank).cmp(other.0.iter().map(rank)))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            let c = match l {
                1 => 'x',
                -1 => 'X',
                2 => 'y',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = GroupError;

    /// Letters `x, X, y, Y`; `e` or the empty string is the identity.
    /// The input is freely reduced.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "e" {
            return Ok(Self::identity());
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'x' => Ok(1),
                'X' => Ok(-1),
                'y' => Ok(2),
                'Y' => Ok(-2),
                _ => Err(GroupError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(letters)
    }
}

/// The free group on `x, y` with word length as gauge.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeGroup;

impl Ambient for FreeGroup {
    type Elem = FreeWord;

    fn label(&self) -> String {
        "F2".into()
    }
    fn compose(&self, a: &FreeWord, b: &FreeWord) -> Result<FreeWord, GroupError> {
        Ok(a.mul(b))
    }
    fn invert(&self, a: &FreeWord) -> Result<FreeWord, GroupError> {
        Ok(a.inverse())
    }
    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }
    fn gauge(&self, a: &FreeWord) -> f64 {
        a.len() as f64
    }
    fn cmp_gauge(&self, a: &FreeWord, b: &FreeWord) -> Ordering {
        a.len().cmp(&b.len())
    }
    fn within(&self, a: &FreeWord, bound: &Rational) -> bool {
        Rational::from_integer(a.len().into()) <= *bound
    }
    fn parse_elem(&self, s: &str) -> Result<FreeWord, GroupError> {
        s.parse()
    }
}

/// All reduced words of length at most `radius`, by length and then in the
/// order x < X < y < Y.
pub fn ball_words(radius: usize) -> Vec<FreeWord> {
    let mut out = vec![FreeWord::identity()];
    let mut frontier = vec![FreeWord::identity()];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for w in &frontier {
            for &l in &ALPHABET {
                if w.0.last() != Some(&-l) {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(FreeWord(v));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    debug_assert!(out.windows(2).all(|p| p[0].cmp_enumeration(&p[1]).is_lt()));
    out
}

/// The radius ball as a point set with region `radius`.
pub fn free_ball(radius: usize) -> PointSet<FreeWord> {
    PointSet::new(&FreeGroup, ball_words(radius), Rational::from_integer(radius.into()))
}
