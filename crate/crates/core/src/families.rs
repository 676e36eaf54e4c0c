//! Generators for three families of equations whose degree of regularity is `n - 1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equation::{Equation, EquationError};
use crate::padic::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("a family member needs at least two variables, got {0}")]
    TooFewVariables(usize),
    #[error("base must be at least 2, got {0}")]
    BaseTooSmall(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("weight q{} = {q} is divisible by {p}", .index + 1)]
    DivisibleWeight { index: usize, q: u64, p: u64 },
    #[error("weights must be positive")]
    ZeroWeight,
    #[error("coefficients overflow 64-bit integers")]
    Overflow,
    #[error(transparent)]
    Equation(#[from] EquationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `x1 - 2x2 + 4x3 - ... ± 2^(n-1) xn`.
    AlternatingPow2 { n: usize },
    /// `x1 + a x2 + ... + a^(n-2) x(n-1) - a^(n-1) xn`.
    Geometric { base: u64, n: usize },
    /// `q1 x1 + q2 p x2 + ... - S p^(n-1) xn` with `S = Σ q_i p^(i-1)`.
    Weighted { p: u64, qs: Vec<u64> },
}

/// What is known about the degree of regularity of a generated equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum RegularityClaim {
    /// `(n-1)`-regular, and the `O_p mod n` coloring shows it is not `n`-regular.
    ExactlyNMinusOne { p: u64 },
    /// `(n-1)`-regular; non-`n`-regularity is not established for a composite base.
    AtLeastNMinusOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEquation {
    pub equation: Equation,
    pub claim: RegularityClaim,
}

impl FamilySpec {
    pub fn generate(&self) -> Result<FamilyEquation, FamilyError> {
        match self {
            FamilySpec::AlternatingPow2 { n } => Ok(FamilyEquation {
                equation: alternating_powers_of_two(*n)?,
                claim: RegularityClaim::ExactlyNMinusOne { p: 2 },
            }),
            FamilySpec::Geometric { base, n } => geometric_family(*base, *n),
            FamilySpec::Weighted { p, qs } => Ok(FamilyEquation {
                equation: weighted_family(*p, qs)?,
                claim: RegularityClaim::ExactlyNMinusOne { p: *p },
            }),
        }
    }
}

fn checked_power(base: u64, exp: usize) -> Result<i64, FamilyError> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| (base as i64).checked_pow(e))
        .ok_or(FamilyError::Overflow)
}

/// `a_i = (-1)^(i-1) 2^(i-1)` for `i = 1..=n`.
pub fn alternating_powers_of_two(n: usize) -> Result<Equation, FamilyError> {
    if n < 2 {
        return Err(FamilyError::TooFewVariables(n));
    }
    let coeffs = (0..n)
        .map(|i| {
            let mag = checked_power(2, i)?;
            Ok(if i % 2 == 0 { mag } else { -mag })
        })
        .collect::<Result<Vec<_>, FamilyError>>()?;
    Ok(Equation::new(coeffs)?)
}

/// `(1, a, ..., a^(n-2), -a^(n-1))`. Composite bases are accepted with a weaker claim.
pub fn geometric_family(base: u64, n: usize) -> Result<FamilyEquation, FamilyError> {
    if base < 2 {
        return Err(FamilyError::BaseTooSmall(base));
    }
    if n < 2 {
        return Err(FamilyError::TooFewVariables(n));
    }
    let base_i = i64::try_from(base).map_err(|_| FamilyError::Overflow)?;
    let mut coeffs = (0..n - 1)
        .map(|i| checked_power(base, i))
        .collect::<Result<Vec<_>, _>>()?;
    let last = checked_power(base, n - 2)?
        .checked_mul(base_i)
        .ok_or(FamilyError::Overflow)?;
    coeffs.push(-last);
    let claim = if is_prime(base) {
        RegularityClaim::ExactlyNMinusOne { p: base }
    } else {
        RegularityClaim::AtLeastNMinusOne
    };
    Ok(FamilyEquation {
        equation: Equation::new(coeffs)?,
        claim,
    })
}

/// `(q1, q2 p, ..., q(n-1) p^(n-2), -S p^(n-1))`, `n = qs.len() + 1`.
pub fn weighted_family(p: u64, qs: &[u64]) -> Result<Equation, FamilyError> {
    if !is_prime(p) {
        return Err(FamilyError::NotPrime(p));
    }
    if qs.is_empty() {
        return Err(FamilyError::TooFewVariables(qs.len() + 1));
    }
    for (index, &q) in qs.iter().enumerate() {
        if q == 0 {
            return Err(FamilyError::ZeroWeight);
        }
        if q % p == 0 {
            return Err(FamilyError::DivisibleWeight { index, q, p });
        }
    }
    let mut coeffs = Vec::with_capacity(qs.len() + 1);
    let mut weighted_sum: i64 = 0;
    for (i, &q) in qs.iter().enumerate() {
        let q = i64::try_from(q).map_err(|_| FamilyError::Overflow)?;
        let term = q
            .checked_mul(checked_power(p, i)?)
            .ok_or(FamilyError::Overflow)?;
        weighted_sum = weighted_sum
            .checked_add(term)
            .ok_or(FamilyError::Overflow)?;
        coeffs.push(term);
    }
    let last = weighted_sum
        .checked_mul(checked_power(p, qs.len())?)
        .ok_or(FamilyError::Overflow)?;
    coeffs.push(-last);
    Ok(Equation::new(coeffs)?)
}

/// Identifies (up to a global sign) members of the alternating and geometric
/// families, whose `(n-1)`-regularity does not follow from the side-sum condition.
pub fn recognize(eq: &Equation) -> Option<FamilySpec> {
    let n = eq.num_vars();
    let candidate = if eq.coeffs()[0] < 0 {
        eq.negated()
    } else {
        eq.clone()
    };
    if alternating_powers_of_two(n).is_ok_and(|alt| alt == candidate) {
        return Some(FamilySpec::AlternatingPow2 { n });
    }
    let base = candidate.coeffs()[n - 1].unsigned_abs() / candidate.coeffs()[n - 2].unsigned_abs();
    geometric_family(base, n)
        .is_ok_and(|g| g.equation == candidate)
        .then_some(FamilySpec::Geometric { base, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::{divisibility_condition, is_rado_regular, padic_distinctness};

    #[test]
    fn alternating_examples() {
        assert_eq!(alternating_powers_of_two(3).unwrap().coeffs(), &[1, -2, 4]);
        assert_eq!(alternating_powers_of_two(2).unwrap().coeffs(), &[1, -2]);
        assert_eq!(
            alternating_powers_of_two(4).unwrap().coeffs(),
            &[1, -2, 4, -8]
        );
        assert_eq!(
            alternating_powers_of_two(1),
            Err(FamilyError::TooFewVariables(1))
        );
        assert_eq!(alternating_powers_of_two(70), Err(FamilyError::Overflow));
    }

    #[test]
    fn geometric_examples() {
        let g = geometric_family(2, 4).unwrap();
        assert_eq!(g.equation.coeffs(), &[1, 2, 4, -8]);
        assert_eq!(g.claim, RegularityClaim::ExactlyNMinusOne { p: 2 });
        assert_eq!(
            geometric_family(3, 3).unwrap().equation.coeffs(),
            &[1, 3, -9]
        );
        assert_eq!(geometric_family(1, 3), Err(FamilyError::BaseTooSmall(1)));
        let composite = geometric_family(4, 3).unwrap();
        assert_eq!(composite.equation.coeffs(), &[1, 4, -16]);
        assert_eq!(composite.claim, RegularityClaim::AtLeastNMinusOne);
    }

    #[test]
    fn weighted_examples() {
        assert_eq!(weighted_family(2, &[1, 1]).unwrap().coeffs(), &[1, 2, -12]);
        assert_eq!(weighted_family(3, &[1, 2]).unwrap().coeffs(), &[1, 6, -63]);
        assert_eq!(
            weighted_family(2, &[2, 1]),
            Err(FamilyError::DivisibleWeight {
                index: 0,
                q: 2,
                p: 2
            })
        );
        assert_eq!(weighted_family(4, &[1, 1]), Err(FamilyError::NotPrime(4)));
        assert_eq!(
            weighted_family(2, &[]),
            Err(FamilyError::TooFewVariables(1))
        );
    }

    fn grid() -> Vec<(FamilySpec, FamilyEquation, u64)> {
        let primes = [2u64, 3, 5, 7];
        let mut out = Vec::new();
        for n in 2..=8 {
            let spec = FamilySpec::AlternatingPow2 { n };
            out.push((spec.clone(), spec.generate().unwrap(), 2));
            for &p in &primes {
                let spec = FamilySpec::Geometric { base: p, n };
                out.push((spec.clone(), spec.generate().unwrap(), p));
            }
        }
        for &p in &primes {
            let weights: Vec<u64> = (1..=5).filter(|q| q % p != 0).collect();
            // All weight vectors of length 1..=7 (n <= 8) over the allowed weights.
            let mut stack: Vec<Vec<u64>> = weights.iter().map(|&q| vec![q]).collect();
            while let Some(qs) = stack.pop() {
                let spec = FamilySpec::Weighted { p, qs: qs.clone() };
                out.push((spec.clone(), spec.generate().unwrap(), p));
                if qs.len() < 7 {
                    for &q in &weights {
                        let mut next = qs.clone();
                        next.push(q);
                        stack.push(next);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn generated_equations_meet_both_conditions() {
        for (spec, fam, p) in grid() {
            let eq = &fam.equation;
            let residues = crate::equation::order_residues(eq, p);
            let mut sorted = residues.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(
                sorted.len(),
                residues.len(),
                "{eq}: orders mod n not distinct for p={p}"
            );
            assert!(padic_distinctness(eq).is_some(), "{eq}");
            // The alternating and geometric families are (n-1)-regular by their
            // own constructions, not through the side-sum condition (1 + 2 - 4: 3 vs 4).
            if matches!(spec, FamilySpec::Weighted { .. }) {
                assert!(divisibility_condition(eq).is_some(), "{eq}");
            } else {
                // x1 - 2x2 belongs to both families.
                let found = recognize(eq).expect("family member not recognized");
                assert_eq!(found.generate().unwrap().equation, *eq);
                assert_eq!(recognize(&eq.negated()), Some(found));
            }
            assert_eq!(is_rado_regular(eq), None, "{eq}");
        }
    }

    #[test]
    fn recognition() {
        let eq = |c: &[i64]| Equation::new(c.to_vec()).unwrap();
        assert_eq!(
            recognize(&eq(&[1, -2, 4])),
            Some(FamilySpec::AlternatingPow2 { n: 3 })
        );
        assert_eq!(
            recognize(&eq(&[1, 4, -16])),
            Some(FamilySpec::Geometric { base: 4, n: 3 })
        );
        assert_eq!(
            recognize(&eq(&[-1, 2])),
            Some(FamilySpec::AlternatingPow2 { n: 2 })
        );
        assert_eq!(
            recognize(&eq(&[1, -3])),
            Some(FamilySpec::Geometric { base: 3, n: 2 })
        );
        assert_eq!(recognize(&eq(&[1, 2, -12])), None);
        assert_eq!(recognize(&eq(&[2, 4, -8])), None);
        assert_eq!(recognize(&eq(&[1, 1, -1])), None);
    }

    #[test]
    fn weighted_quotient_is_p_to_n_minus_one() {
        for (p, qs) in [
            (2u64, vec![1u64, 1]),
            (3, vec![1, 2]),
            (5, vec![4, 3, 2]),
            (7, vec![6]),
        ] {
            let eq = weighted_family(p, &qs).unwrap();
            let w = divisibility_condition(&eq).unwrap();
            assert_eq!(w.quotient, (p as u128).pow(qs.len() as u32));
        }
    }
}
