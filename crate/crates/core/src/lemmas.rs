//! Finite-interval witness finders for monochromatic progressions, and
//! constructors that turn those witnesses into monochromatic solutions for the
//! three `(n-1)`-regular families.
//!
//! Every finder scans in a fixed order (difference outermost, then position,
//! then exponent) so results are reproducible. Constructors re-verify their
//! output and never return an unchecked solution.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{verify_witness, Color, Coloring, ColoringError, SolutionWitness};
use crate::equation::{divisibility_condition, DivisibilityDirection, Equation};
use crate::families::{alternating_powers_of_two, geometric_family, FamilyError};
use crate::padic::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no witness inside [1, {interval}]; retry with a larger interval")]
    WitnessNotFound { interval: u64 },
    #[error("coloring uses {used} colors on the interval, at most {allowed} allowed")]
    ColorCountExceeded { used: usize, allowed: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("neither coefficient side sum divides the other")]
    ConditionNotSatisfied,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("parameters overflow 64-bit integers")]
    Overflow,
    #[error("constructed tuple failed verification")]
    Unverified,
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// The progression `{center + λ diff : |λ| <= half_length}`, monochromatic on its positive members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct APWitness {
    pub center: u64,
    pub diff: u64,
    pub half_length: u64,
    pub color: Color,
}

impl APWitness {
    /// Members that are positive integers, ascending.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        let m = self.half_length as i128;
        (-m..=m)
            .map(move |l| self.center as i128 + l * self.diff as i128)
            .filter(|&x| x >= 1)
            .map(|x| x as u64)
    }

    /// Whether every member is a positive integer.
    pub fn is_full(&self) -> bool {
        self.center as i128 - (self.half_length as i128) * (self.diff as i128) >= 1
    }

    pub fn holds(&self, c: &Coloring) -> bool {
        self.center >= 1
            && self.diff >= 1
            && self.members().all(|x| c.color_of(x) == Ok(self.color))
    }
}

/// A progression plus the extra value `q + diff` in the same color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedApWitness {
    pub ap: APWitness,
    pub q: u64,
}

impl ShiftedApWitness {
    pub fn holds(&self, c: &Coloring) -> bool {
        self.ap.holds(c) && c.color_of(self.q + self.ap.diff) == Ok(self.ap.color)
    }
}

/// `{base^j b + l d} ∪ {b + l d}` for `|l| <= half_length`, together with `q d`, in one color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricWitness {
    pub base: u64,
    pub j: u32,
    pub b: u64,
    pub d: u64,
    pub q: u64,
    pub half_length: u64,
    pub color: Color,
}

impl GeometricWitness {
    pub fn holds(&self, c: &Coloring) -> bool {
        let Some(top) = self
            .base
            .checked_pow(self.j)
            .and_then(|p| p.checked_mul(self.b))
        else {
            return false;
        };
        let progression = |center| APWitness {
            center,
            diff: self.d,
            half_length: self.half_length,
            color: self.color,
        };
        let (low, high) = (progression(self.b), progression(top));
        self.j >= 1
            && self.d >= 1
            && low.is_full()
            && low.holds(c)
            && high.holds(c)
            && self
                .q
                .checked_mul(self.d)
                .is_some_and(|x| c.color_of(x) == Ok(self.color))
    }
}

fn same_color(table: &[Color], color: Color, mut values: impl Iterator<Item = u64>) -> bool {
    values.all(|x| table[(x - 1) as usize] == color)
}

/// First `(start, diff)` such that `start, start + diff, ...` (`length` terms)
/// is monochromatic inside `[1, bound]`, by start then diff.
pub fn find_monochromatic_ap(
    c: &Coloring,
    bound: u64,
    length: u64,
) -> Result<Option<(u64, u64)>, ColoringError> {
    if length == 0 || bound == 0 {
        return Ok(None);
    }
    if length == 1 {
        c.color_of(1)?;
        return Ok(Some((1, 1)));
    }
    let table = c.tabulate(bound)?;
    for start in 1..=bound {
        let color = table[(start - 1) as usize];
        let mut diff = 1;
        while start + (length - 1) * diff <= bound {
            if same_color(&table, color, (1..length).map(|i| start + i * diff)) {
                return Ok(Some((start, diff)));
            }
            diff += 1;
        }
    }
    Ok(None)
}

/// Searches `d = 1, 2, ...` then `k` ascending for a monochromatic
/// `{k + λd : |λ| <= M}` with `q + d` in the same color, all inside `[1, bound]`.
///
/// Without `center` the progression must lie entirely in the positive integers.
/// With a forced `center` its non-positive members are ignored.
pub fn find_shifted_ap_witness(
    c: &Coloring,
    bound: u64,
    q: u64,
    half_length: u64,
    center: Option<u64>,
) -> Result<Option<ShiftedApWitness>, ColoringError> {
    if q == 0 || half_length == 0 || center == Some(0) {
        return Ok(None);
    }
    let table = c.tabulate(bound)?;
    let m = half_length;
    let mut d = 1u64;
    loop {
        let reach = match m.checked_mul(d) {
            Some(r) => r,
            None => return Ok(None),
        };
        let fits = match center {
            Some(k) => k.checked_add(reach).is_some_and(|top| top <= bound),
            None => reach.checked_mul(2).is_some_and(|w| w < bound),
        };
        if !fits || q + d > bound {
            return Ok(None);
        }
        let extra = table[(q + d - 1) as usize];
        let (first, last) = match center {
            Some(k) => (k, k),
            None => (reach + 1, bound - reach),
        };
        for k in first..=last {
            let ap = APWitness {
                center: k,
                diff: d,
                half_length: m,
                color: extra,
            };
            if table[(k - 1) as usize] == extra && same_color(&table, extra, ap.members()) {
                return Ok(Some(ShiftedApWitness { ap, q }));
            }
        }
        d += 1;
    }
}

/// First `(d, b, j)` with `j` in `1..=j_max` such that both progressions around
/// `b` and `base^j b` (half-length `M`, difference `d`) and the value `q d` share
/// one color, all inside `[1, bound]`.
pub fn find_geometric_witness(
    c: &Coloring,
    bound: u64,
    base: u64,
    j_max: u32,
    q: u64,
    half_length: u64,
) -> Result<Option<GeometricWitness>, ConstructionError> {
    if base < 2 {
        return Err(ConstructionError::InvalidParameter(
            "base must be at least 2",
        ));
    }
    if j_max == 0 || q == 0 {
        return Err(ConstructionError::InvalidParameter(
            "need j_max >= 1 and q >= 1",
        ));
    }
    let table = c.tabulate(bound)?;
    let m = half_length;
    let mut d = 1u64;
    loop {
        let (Some(reach), Some(qd)) = (m.checked_mul(d), q.checked_mul(d)) else {
            return Ok(None);
        };
        // Smallest b is reach + 1, and base * b + reach must still fit.
        let smallest_top = (reach + 1)
            .checked_mul(base)
            .and_then(|t| t.checked_add(reach));
        if qd > bound || smallest_top.is_none_or(|t| t > bound) {
            return Ok(None);
        }
        let color = table[(qd - 1) as usize];
        let mut b = reach + 1;
        while let Some(first_top) = b.checked_mul(base).filter(|t| t + reach <= bound) {
            let low = APWitness {
                center: b,
                diff: d,
                half_length: m,
                color,
            };
            if same_color(&table, color, low.members()) {
                let mut top = first_top;
                for j in 1..=j_max {
                    if j > 1 {
                        match top.checked_mul(base).filter(|t| t + reach <= bound) {
                            Some(t) => top = t,
                            None => break,
                        }
                    }
                    let high = APWitness { center: top, ..low };
                    if same_color(&table, color, high.members()) {
                        return Ok(Some(GeometricWitness {
                            base,
                            j,
                            b,
                            d,
                            q,
                            half_length: m,
                            color,
                        }));
                    }
                }
            }
            b += 1;
        }
        d += 1;
    }
}

/// How a solution was obtained, for certificates and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum ConstructionProof {
    /// Geometric-pair witness with the two progression offsets used.
    Geometric {
        witness: GeometricWitness,
        lambda1: u64,
        lambda2: u64,
    },
    /// Centered progression witness; the larger side sum over the smaller is `lambda`.
    Split {
        witness: ShiftedApWitness,
        lambda: u64,
        direction: DivisibilityDirection,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructedSolution {
    pub witness: SolutionWitness,
    pub proof: ConstructionProof,
}

fn check_color_budget(c: &Coloring, bound: u64, n: usize) -> Result<(), ConstructionError> {
    let used = c.colors_used(bound)?;
    if used >= n {
        return Err(ConstructionError::ColorCountExceeded {
            used,
            allowed: n - 1,
        });
    }
    Ok(())
}

fn pow(base: u64, exp: usize) -> Result<u64, ConstructionError> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or(ConstructionError::Overflow)
}

fn finish(
    eq: &Equation,
    c: &Coloring,
    values: Vec<u64>,
    color: Color,
    proof: ConstructionProof,
) -> Result<ConstructedSolution, ConstructionError> {
    let witness = SolutionWitness {
        equation: eq.clone(),
        values,
        color,
    };
    if !verify_witness(eq, c, &witness) {
        return Err(ConstructionError::Unverified);
    }
    Ok(ConstructedSolution { witness, proof })
}

/// Monochromatic solution of `x1 - 2x2 + 4x3 - ... ± 2^(n-1) xn = 0` under a
/// coloring using at most `n - 1` colors on `[1, bound]`.
///
/// With the witness `(b, j, d)` the variables are `2^(n-1) d` except
/// `x(n-j) = 2^j b + λ1 d` (and also `x(n-j+1)` when `j` is even, where the
/// coefficient of `x(n-j)` has the sign of the last one) and `xn = b + λ2 d`,
/// with `λ1 = 2^(n-1)` and `λ2 = (2^(n-1) ± 1) / 3`, plus for even `n`.
pub fn construct_solution_alternating(
    c: &Coloring,
    n: usize,
    bound: u64,
) -> Result<ConstructedSolution, ConstructionError> {
    let eq = alternating_powers_of_two(n)?;
    let q = pow(2, n - 1)?;
    let half_length = pow(2, n)?;
    check_color_budget(c, bound, n)?;
    let lambda1 = q;
    let lambda2 = if n.is_multiple_of(2) {
        (q + 1) / 3
    } else {
        (q - 1) / 3
    };

    let w = find_geometric_witness(c, bound, 2, (n - 1) as u32, q, half_length)?
        .ok_or(ConstructionError::WitnessNotFound { interval: bound })?;
    let j = w.j as usize;
    let top = (1u64 << j) * w.b + lambda1 * w.d;
    let mut values = vec![q * w.d; n];
    values[n - j - 1] = top;
    if j.is_multiple_of(2) {
        values[n - j] = top;
    }
    values[n - 1] = w.b + lambda2 * w.d;
    let proof = ConstructionProof::Geometric {
        witness: w,
        lambda1,
        lambda2,
    };
    finish(&eq, c, values, w.color, proof)
}

/// Monochromatic solution of `x1 + p x2 + ... + p^(n-2) x(n-1) - p^(n-1) xn = 0`
/// under a coloring using at most `n - 1` colors on `[1, bound]`.
///
/// Uses `l1 = p^(n-1)`, `l2 = 1 + p + ... + p^(n-2)` and progression half-length `p^(n-1)`.
pub fn construct_solution_geometric(
    c: &Coloring,
    p: u64,
    n: usize,
    bound: u64,
) -> Result<ConstructedSolution, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NotPrime(p));
    }
    let eq = geometric_family(p, n)?.equation;
    let q = pow(p, n - 1)?;
    check_color_budget(c, bound, n)?;
    let l1 = q;
    let l2 = (q - 1) / (p - 1);

    let w = find_geometric_witness(c, bound, p, (n - 1) as u32, q, q)?
        .ok_or(ConstructionError::WitnessNotFound { interval: bound })?;
    let j = w.j as usize;
    let mut values = vec![q * w.d; n];
    values[n - j - 1] = pow(p, j)? * w.b + l1 * w.d;
    values[n - 1] = w.b + l2 * w.d;
    let proof = ConstructionProof::Geometric {
        witness: w,
        lambda1: l1,
        lambda2: l2,
    };
    finish(&eq, c, values, w.color, proof)
}

/// Monochromatic solution of any equation whose positive and negative
/// coefficient sums `A`, `B` satisfy `A | B` (or `B | A`).
///
/// With `A | B` and `λ = B / A`, finds `d` such that the progression centered at
/// `B` (half-length `A + B`) and `A + d` share a color; positive-side variables
/// take `B + λ d` and negative-side variables `A + d`.
pub fn construct_solution_split(
    c: &Coloring,
    eq: &Equation,
    bound: u64,
) -> Result<ConstructedSolution, ConstructionError> {
    let div = divisibility_condition(eq).ok_or(ConstructionError::ConditionNotSatisfied)?;
    check_color_budget(c, bound, eq.num_vars())?;
    let to_u64 = |v: u128| u64::try_from(v).map_err(|_| ConstructionError::Overflow);
    let split = &div.split;
    let (small, large, small_side) = match div.direction {
        DivisibilityDirection::PosDividesNeg => (split.pos_sum, split.neg_sum, &split.pos_indices),
        DivisibilityDirection::NegDividesPos => (split.neg_sum, split.pos_sum, &split.neg_indices),
    };
    let (small, large, lambda) = (to_u64(small)?, to_u64(large)?, to_u64(div.quotient)?);
    let half_length = small
        .checked_add(large)
        .ok_or(ConstructionError::Overflow)?;

    let w = find_shifted_ap_witness(c, bound, small, half_length, Some(large))?
        .ok_or(ConstructionError::WitnessNotFound { interval: bound })?;
    let d = w.ap.diff;
    let on_small_side = large + lambda * d;
    let on_large_side = small + d;
    let values = (0..eq.num_vars())
        .map(|i| {
            if small_side.contains(&i) {
                on_small_side
            } else {
                on_large_side
            }
        })
        .collect();
    let proof = ConstructionProof::Split {
        witness: w,
        lambda,
        direction: div.direction,
    };
    finish(eq, c, values, w.ap.color, proof)
}
