//! p-adic orders and the residue coloring `x -> O_p(x) mod r`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equation::Equation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("a coloring needs at least one color")]
    NoColors,
}

/// A nonnegative integer extended with infinity, the order of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtendedNat {
    Finite(u64),
    Infinity,
}

impl ExtendedNat {
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedNat::Finite(v) => Some(v),
            ExtendedNat::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedNat::Infinity)
    }
}

impl Ord for ExtendedNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) => a.cmp(b),
            (ExtendedNat::Finite(_), ExtendedNat::Infinity) => Ordering::Less,
            (ExtendedNat::Infinity, ExtendedNat::Finite(_)) => Ordering::Greater,
            (ExtendedNat::Infinity, ExtendedNat::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtendedNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExtendedNat {
    type Output = ExtendedNat;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) => ExtendedNat::Finite(a + b),
            _ => ExtendedNat::Infinity,
        }
    }
}

impl Add<u64> for ExtendedNat {
    type Output = ExtendedNat;

    fn add(self, rhs: u64) -> Self {
        self + ExtendedNat::Finite(rhs)
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNat::Finite(v) => write!(f, "{v}"),
            ExtendedNat::Infinity => f.write_str("∞"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve primes as bases are exact for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exponent of the prime `p` in `x`, with `O_p(0) = ∞`.
pub fn padic_order(p: u64, x: impl Into<i128>) -> Result<ExtendedNat, PadicError> {
    if !is_prime(p) {
        return Err(PadicError::NotPrime(p));
    }
    Ok(order_unchecked(p, x.into().unsigned_abs()))
}

/// `p` must already be known prime.
pub(crate) fn order_unchecked(p: u64, mut x: u128) -> ExtendedNat {
    if x == 0 {
        return ExtendedNat::Infinity;
    }
    let p = p as u128;
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    ExtendedNat::Finite(v)
}

/// The coloring `x -> O_p(x) mod num_colors` of the positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPadicColoring")]
pub struct PAdicColoring {
    p: u64,
    num_colors: u32,
}

#[derive(Deserialize)]
struct RawPadicColoring {
    p: u64,
    num_colors: u32,
}

impl TryFrom<RawPadicColoring> for PAdicColoring {
    type Error = PadicError;

    fn try_from(raw: RawPadicColoring) -> Result<Self, Self::Error> {
        PAdicColoring::new(raw.p, raw.num_colors)
    }
}

impl PAdicColoring {
    pub fn new(p: u64, num_colors: u32) -> Result<Self, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if num_colors == 0 {
            return Err(PadicError::NoColors);
        }
        Ok(PAdicColoring { p, num_colors })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    /// Color of `x >= 1`. Zero has no finite order and is not a member of the domain.
    pub fn color(&self, x: u64) -> u32 {
        debug_assert!(x >= 1);
        let order = order_unchecked(self.p, x as u128)
            .finite()
            .expect("positive integers have finite order");
        (order % self.num_colors as u64) as u32
    }
}

/// Ascending primes dividing at least one coefficient, found by trial division.
pub fn candidate_primes(eq: &Equation) -> Vec<u64> {
    let mut primes = Vec::new();
    for &a in eq.coeffs() {
        let mut m = a.unsigned_abs();
        let mut f = 2u64;
        while f.saturating_mul(f) <= m {
            if m % f == 0 {
                primes.push(f);
                while m % f == 0 {
                    m /= f;
                }
            }
            f += if f == 2 { 1 } else { 2 };
        }
        if m > 1 {
            primes.push(m);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(coeffs: &[i64]) -> Equation {
        Equation::new(coeffs.to_vec()).unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(padic_order(2, 12), Ok(ExtendedNat::Finite(2)));
        assert_eq!(padic_order(5, 0), Ok(ExtendedNat::Infinity));
        assert_eq!(padic_order(3, 7), Ok(ExtendedNat::Finite(0)));
        assert_eq!(padic_order(3, -18), Ok(ExtendedNat::Finite(2)));
        assert_eq!(padic_order(4, 8), Err(PadicError::NotPrime(4)));
        assert_eq!(padic_order(1, 8), Err(PadicError::NotPrime(1)));
    }

    #[test]
    fn infinity_is_absorbing_and_maximal() {
        assert!(ExtendedNat::Infinity > ExtendedNat::Finite(u64::MAX));
        assert_eq!(ExtendedNat::Infinity + 3, ExtendedNat::Infinity);
        assert_eq!(ExtendedNat::Finite(2) + 3, ExtendedNat::Finite(5));
        assert_eq!(
            ExtendedNat::Finite(1).min(ExtendedNat::Infinity),
            ExtendedNat::Finite(1)
        );
    }

    #[test]
    fn color_examples() {
        let c = PAdicColoring::new(2, 3).unwrap();
        assert_eq!(c.color(8), 0);
        assert_eq!(c.color(4), 2);
        assert_eq!(PAdicColoring::new(3, 2).unwrap().color(18), 0);
        assert_eq!(PAdicColoring::new(6, 2), Err(PadicError::NotPrime(6)));
        assert_eq!(PAdicColoring::new(2, 0), Err(PadicError::NoColors));
    }

    #[test]
    fn candidate_prime_examples() {
        assert_eq!(candidate_primes(&eq(&[1, -2, 4, -8])), vec![2]);
        assert_eq!(candidate_primes(&eq(&[6, -10])), vec![2, 3, 5]);
        assert!(candidate_primes(&eq(&[1, 1, -1])).is_empty());
        assert_eq!(candidate_primes(&eq(&[49, -97])), vec![7, 97]);
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|f| f * f <= n)
                    .all(|f| !n.is_multiple_of(f))
        };
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }
}
