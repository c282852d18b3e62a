//! Exact rationals, two-generator numerical semigroups and monomial enumeration.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary precision rational, always reduced with a positive denominator.
///
/// Serializes as the string `"p/q"` (or `"p"` when `q = 1`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an `i64` if it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Membership in `<a,b> = { ma + nb : m,n >= 0, (m,n) != (0,0) }`.
pub fn semigroup_contains(a: u64, b: u64, x: u64) -> bool {
    assert!(a >= 1 && b >= 1, "generators must be positive");
    if x == 0 {
        return false;
    }
    (0..=x / a).any(|m| {
        let rest = x - m * a;
        rest % b == 0 && (m, rest / b) != (0, 0)
    })
}

/// Smallest `k > 0` with `k * ai` in `<a0,a1>`. Always exists since `a0 * ai` qualifies.
pub fn semigroup_min_multiple(a0: u64, a1: u64, ai: u64) -> u64 {
    assert!(ai >= 1);
    (1..=a0)
        .find(|&k| semigroup_contains(a0, a1, k * ai))
        .expect("k = a0 always lies in the semigroup")
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |g, &x| g.gcd(&x))
}

pub type ExponentVector = Vec<u32>;

/// Weighted degree `sum e_i * w_i`.
pub fn weighted_degree(e: &[u32], weights: &[u64]) -> u64 {
    e.iter().zip(weights).map(|(&ei, &w)| ei as u64 * w).sum()
}

/// All exponent vectors of weighted degree exactly `d`, in lexicographic order.
pub fn monomials_of_degree(d: u64, weights: &[u64]) -> Vec<ExponentVector> {
    assert!(!weights.is_empty(), "need at least one variable");
    assert!(weights.iter().all(|&w| w >= 1), "weights must be positive");
    let mut out = Vec::new();
    let mut cur = vec![0u32; weights.len()];
    fill(d, weights, 0, &mut cur, &mut out);
    out
}

fn fill(rem: u64, weights: &[u64], i: usize, cur: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
    if i + 1 == weights.len() {
        if rem % weights[i] == 0 {
            cur[i] = (rem / weights[i]) as u32;
            out.push(cur.clone());
        }
        cur[i] = 0;
        return;
    }
    for e in 0..=rem / weights[i] {
        cur[i] = e as u32;
        fill(rem - e * weights[i], weights, i + 1, cur, out);
    }
    cur[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semigroup_examples() {
        assert!(semigroup_contains(2, 5, 7));
        assert!(!semigroup_contains(2, 5, 3));
        assert!((2..=100).all(|k| semigroup_contains(2, 3, k)));
        assert!(!semigroup_contains(2, 3, 1));
    }

    #[test]
    fn min_multiple_examples() {
        assert_eq!(semigroup_min_multiple(2, 3, 4), 1);
        assert_eq!(semigroup_min_multiple(2, 3, 5), 1);
        assert_eq!(semigroup_min_multiple(4, 6, 5), 2);
        assert_eq!(semigroup_min_multiple(3, 4, 5), 2);
    }

    #[test]
    fn monomial_examples() {
        assert_eq!(monomials_of_degree(18, &[5, 9]), vec![vec![0, 2]]);
        assert_eq!(
            monomials_of_degree(10, &[4, 6, 6]),
            vec![vec![1, 0, 1], vec![1, 1, 0]]
        );
        assert!(monomials_of_degree(3, &[5]).is_empty());
        assert_eq!(monomials_of_degree(0, &[2, 3]), vec![vec![0, 0]]);
    }

    #[test]
    fn rational_strings() {
        let q: Rational = "6/-4".parse().unwrap();
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_int(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        let s = serde_json::to_string(&Rational::new(4, 231)).unwrap();
        assert_eq!(s, "\"4/231\"");
    }
}
