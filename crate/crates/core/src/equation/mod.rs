//! Linear homogeneous equations `a_1 x_1 + ... + a_n x_n = 0` and their static analysis.
//!
//! Indices in this module are 0-based; human-facing output adds one.

mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{candidate_primes, order_unchecked};

pub use report::{AnalysisConfig, DorBound, DorReport, LowerBoundSource, UpperBoundSource};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("cannot parse equation: {0}")]
    Parse(String),
    #[error("coefficient {} is zero", .index + 1)]
    ZeroCoefficient { index: usize },
    #[error("an equation needs at least two variables, got {0}")]
    TooFewVariables(usize),
}

/// Nonzero integer coefficients, `n >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Equation {
    coeffs: Vec<i64>,
}

impl Equation {
    pub fn new(coeffs: Vec<i64>) -> Result<Self, EquationError> {
        if coeffs.len() < 2 {
            return Err(EquationError::TooFewVariables(coeffs.len()));
        }
        if let Some(index) = coeffs.iter().position(|&a| a == 0) {
            return Err(EquationError::ZeroCoefficient { index });
        }
        Ok(Equation { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn negated(&self) -> Equation {
        Equation {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// `Σ a_i x_i` in 128-bit arithmetic. `values` must have one entry per variable.
    pub fn evaluate(&self, values: &[u64]) -> i128 {
        debug_assert_eq!(values.len(), self.coeffs.len());
        self.coeffs
            .iter()
            .zip(values)
            .map(|(&a, &x)| a as i128 * x as i128)
            .sum()
    }

    /// Index of the largest `|a_i|`, smallest index on ties.
    pub fn pivot_index(&self) -> usize {
        let mut best = 0;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.unsigned_abs() > self.coeffs[best].unsigned_abs() {
                best = i;
            }
        }
        best
    }

    /// Comma list form, e.g. `1,-2,4`.
    pub fn to_list_string(&self) -> String {
        self.coeffs
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl TryFrom<Vec<i64>> for Equation {
    type Error = EquationError;

    fn try_from(coeffs: Vec<i64>) -> Result<Self, Self::Error> {
        Equation::new(coeffs)
    }
}

impl From<Equation> for Vec<i64> {
    fn from(eq: Equation) -> Self {
        eq.coeffs
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &a) in self.coeffs.iter().enumerate() {
            let mag = a.unsigned_abs();
            match (i, a < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "x{}", i + 1)?;
        }
        f.write_str(" = 0")
    }
}

impl FromStr for Equation {
    type Err = EquationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_equation(s)
    }
}

/// Accepts `1,-2,4` or `x1 - 2x2 + 4x3 = 0` (`*` between coefficient and variable is optional).
pub fn parse_equation(text: &str) -> Result<Equation, EquationError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(EquationError::Parse("empty input".into()));
    }
    let coeffs = if compact.contains(['x', 'X']) {
        parse_symbolic(&compact)?
    } else {
        compact
            .split(',')
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| EquationError::Parse(format!("bad coefficient {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    Equation::new(coeffs)
}

fn parse_symbolic(compact: &str) -> Result<Vec<i64>, EquationError> {
    let (lhs, rhs) = match compact.split_once('=') {
        Some((l, r)) => (l, Some(r)),
        None => (compact, None),
    };
    if let Some(r) = rhs {
        if r.parse::<i64>() != Ok(0) {
            return Err(EquationError::Parse(format!(
                "right-hand side must be 0, got {r:?}"
            )));
        }
    }

    let bytes = lhs.as_bytes();
    let mut pos = 0;
    let mut coeffs = Vec::new();
    let mut labels: Vec<u64> = Vec::new();
    while pos < bytes.len() {
        let negative = match bytes[pos] {
            b'+' => {
                pos += 1;
                false
            }
            b'-' => {
                pos += 1;
                true
            }
            _ if coeffs.is_empty() => false,
            other => {
                return Err(EquationError::Parse(format!(
                    "expected '+' or '-' before term, found {:?}",
                    other as char
                )))
            }
        };
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let magnitude: i64 = if pos == digits_start {
            1
        } else {
            lhs[digits_start..pos]
                .parse()
                .map_err(|_| EquationError::Parse("coefficient out of range".into()))?
        };
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
        }
        if pos >= bytes.len() || !matches!(bytes[pos], b'x' | b'X') {
            return Err(EquationError::Parse(
                "every term must name a variable such as x1 (constant terms are not homogeneous)"
                    .into(),
            ));
        }
        pos += 1;
        let label_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let label: u64 = lhs[label_start..pos]
            .parse()
            .map_err(|_| EquationError::Parse("variable needs a numeric index, e.g. x1".into()))?;
        if labels.contains(&label) {
            return Err(EquationError::Parse(format!(
                "variable x{label} appears twice"
            )));
        }
        labels.push(label);
        coeffs.push(if negative { -magnitude } else { magnitude });
    }
    Ok(coeffs)
}

/// Lexicographically smallest (by sorted index sequence) nonempty subset of
/// coefficients summing to zero, if any exists. Its existence is exactly
/// partition regularity.
pub fn is_rado_regular(eq: &Equation) -> Option<Vec<usize>> {
    fn extend(coeffs: &[i64], from: usize, sum: i128, chosen: &mut Vec<usize>) -> bool {
        // Pre-order over "next index to include" visits index sequences in lexicographic order.
        for i in from..coeffs.len() {
            chosen.push(i);
            let s = sum + coeffs[i] as i128;
            if s == 0 || extend(coeffs, i + 1, s, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::new();
    extend(eq.coeffs(), 0, 0, &mut chosen).then_some(chosen)
}

/// The equation written as `Σ a_i x_i - Σ b_i x_i = 0` with all `a_i, b_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignSplit {
    pub pos_indices: Vec<usize>,
    pub neg_indices: Vec<usize>,
    pub pos_sum: u128,
    pub neg_sum: u128,
    /// The equation was multiplied by -1 so that index 0 lands on the positive side.
    pub negated: bool,
}

/// `None` when every coefficient has the same sign (no positive solutions).
pub fn sign_split(eq: &Equation) -> Option<SignSplit> {
    let negated = eq.coeffs()[0] < 0;
    let mut split = SignSplit {
        pos_indices: Vec::new(),
        neg_indices: Vec::new(),
        pos_sum: 0,
        neg_sum: 0,
        negated,
    };
    for (i, &a) in eq.coeffs().iter().enumerate() {
        if (a > 0) != negated {
            split.pos_indices.push(i);
            split.pos_sum += a.unsigned_abs() as u128;
        } else {
            split.neg_indices.push(i);
            split.neg_sum += a.unsigned_abs() as u128;
        }
    }
    (!split.neg_indices.is_empty()).then_some(split)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisibilityDirection {
    PosDividesNeg,
    NegDividesPos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityWitness {
    pub split: SignSplit,
    /// Larger side sum over smaller side sum.
    pub quotient: u128,
    pub direction: DivisibilityDirection,
}

/// Sufficient condition for `(n-1)`-regularity: one side's coefficient sum
/// divides the other's. `pos | neg` is preferred when both hold.
pub fn divisibility_condition(eq: &Equation) -> Option<DivisibilityWitness> {
    let split = sign_split(eq)?;
    let (direction, quotient) = if split.neg_sum % split.pos_sum == 0 {
        (
            DivisibilityDirection::PosDividesNeg,
            split.neg_sum / split.pos_sum,
        )
    } else if split.pos_sum % split.neg_sum == 0 {
        (
            DivisibilityDirection::NegDividesPos,
            split.pos_sum / split.neg_sum,
        )
    } else {
        return None;
    };
    Some(DivisibilityWitness {
        split,
        quotient,
        direction,
    })
}

/// Orders `O_p(a_i) mod n`, in coefficient order. `p` must be prime.
pub fn order_residues(eq: &Equation, p: u64) -> Vec<u64> {
    let n = eq.num_vars() as u64;
    eq.coeffs()
        .iter()
        .map(|&a| {
            order_unchecked(p, a.unsigned_abs() as u128)
                .finite()
                .expect("coefficients are nonzero")
                % n
        })
        .collect()
}

/// Smallest prime `p` for which the orders `O_p(a_i)` are pairwise distinct
/// mod `n`; such a prime certifies that the equation is not `n`-regular.
pub fn padic_distinctness(eq: &Equation) -> Option<u64> {
    candidate_primes(eq).into_iter().find(|&p| {
        let mut residues = order_residues(eq, p);
        residues.sort_unstable();
        residues.windows(2).all(|w| w[0] != w[1])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eq(coeffs: &[i64]) -> Equation {
        Equation::new(coeffs.to_vec()).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_equation("1,-2,4"), Ok(eq(&[1, -2, 4])));
        assert_eq!(parse_equation("x1 + 2x2 - 12x3 = 0"), Ok(eq(&[1, 2, -12])));
        assert_eq!(
            parse_equation("1,0,3"),
            Err(EquationError::ZeroCoefficient { index: 1 })
        );
        assert_eq!(parse_equation("5"), Err(EquationError::TooFewVariables(1)));
    }

    #[test]
    fn parse_symbolic_variants() {
        assert_eq!(parse_equation("-x1 + 3*x2"), Ok(eq(&[-1, 3])));
        assert_eq!(parse_equation(" 2 x1 - x2 - x3 = 0 "), Ok(eq(&[2, -1, -1])));
        assert_eq!(parse_equation("x2 - 2x1"), Ok(eq(&[1, -2])));
        assert!(matches!(
            parse_equation("x1 + x2 = 3"),
            Err(EquationError::Parse(_))
        ));
        assert!(matches!(
            parse_equation("x1 + 4"),
            Err(EquationError::Parse(_))
        ));
        assert!(matches!(
            parse_equation("x1 + x1"),
            Err(EquationError::Parse(_))
        ));
        assert!(matches!(
            parse_equation("x1 x2"),
            Err(EquationError::Parse(_))
        ));
        assert!(matches!(
            parse_equation("1,,2"),
            Err(EquationError::Parse(_))
        ));
        assert!(matches!(parse_equation(""), Err(EquationError::Parse(_))));
        assert_eq!(
            parse_equation("x1 + 0x2"),
            Err(EquationError::ZeroCoefficient { index: 1 })
        );
    }

    #[test]
    fn display_parses_back() {
        let e = eq(&[-3, 1, -12, 7]);
        assert_eq!(e.to_string(), "-3x1 + x2 - 12x3 + 7x4 = 0");
        assert_eq!(parse_equation(&e.to_string()), Ok(e.clone()));
        assert_eq!(parse_equation(&e.to_list_string()), Ok(e));
    }

    #[test]
    fn rado_examples() {
        assert_eq!(is_rado_regular(&eq(&[1, 1, -1])), Some(vec![0, 2]));
        assert_eq!(is_rado_regular(&eq(&[1, -2, 4, -8])), None);
        assert_eq!(is_rado_regular(&eq(&[2, -1, -1])), Some(vec![0, 1, 2]));
        // [0,1,2] precedes [0,3] lexicographically.
        assert_eq!(is_rado_regular(&eq(&[1, 1, -2, -1])), Some(vec![0, 1, 2]));
    }

    #[test]
    fn sign_split_examples() {
        let s = sign_split(&eq(&[1, 2, -12])).unwrap();
        assert_eq!(
            s,
            SignSplit {
                pos_indices: vec![0, 1],
                neg_indices: vec![2],
                pos_sum: 3,
                neg_sum: 12,
                negated: false,
            }
        );
        assert_eq!(sign_split(&eq(&[1, 1, 1])), None);
        assert_eq!(sign_split(&eq(&[-1, -1])), None);
        let s = sign_split(&eq(&[-1, -2, 12])).unwrap();
        assert_eq!(
            (s.pos_indices.clone(), s.neg_indices.clone()),
            (vec![0, 1], vec![2])
        );
        assert_eq!((s.pos_sum, s.neg_sum, s.negated), (3, 12, true));
    }

    #[test]
    fn divisibility_examples() {
        let w = divisibility_condition(&eq(&[1, 2, -12])).unwrap();
        assert_eq!(
            (w.quotient, w.direction),
            (4, DivisibilityDirection::PosDividesNeg)
        );
        assert_eq!(divisibility_condition(&eq(&[2, -3])), None);
        let w = divisibility_condition(&eq(&[1, -2])).unwrap();
        assert_eq!(
            (w.quotient, w.direction),
            (2, DivisibilityDirection::PosDividesNeg)
        );
        let w = divisibility_condition(&eq(&[6, -1, -2])).unwrap();
        assert_eq!(
            (w.quotient, w.direction),
            (2, DivisibilityDirection::NegDividesPos)
        );
        assert_eq!(divisibility_condition(&eq(&[1, 1, 1])), None);
    }

    #[test]
    fn padic_distinctness_examples() {
        assert_eq!(padic_distinctness(&eq(&[1, -2, 4, -8])), Some(2));
        assert_eq!(padic_distinctness(&eq(&[1, 1, -1])), None);
        assert_eq!(padic_distinctness(&eq(&[1, 2, -12])), Some(2));
        // Orders under 2 are 0,0; under 3 they are 0,1.
        assert_eq!(padic_distinctness(&eq(&[1, -3])), Some(3));
        assert_eq!(order_residues(&eq(&[1, 2, -12]), 2), vec![0, 1, 2]);
    }

    #[test]
    fn pivot_prefers_largest_then_first() {
        assert_eq!(eq(&[1, 1, -1]).pivot_index(), 0);
        assert_eq!(eq(&[1, -2, 4]).pivot_index(), 2);
        assert_eq!(eq(&[3, -3, 2]).pivot_index(), 0);
    }

    fn naive_rado(coeffs: &[i64]) -> bool {
        (1u32..1 << coeffs.len()).any(|mask| {
            coeffs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .sum::<i64>()
                == 0
        })
    }

    fn small_equation() -> impl Strategy<Value = Equation> {
        prop::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 2..=5)
            .prop_map(|c| Equation::new(c).unwrap())
    }

    proptest! {
        #[test]
        fn rado_matches_subset_enumeration(e in small_equation()) {
            let subset = is_rado_regular(&e);
            prop_assert_eq!(subset.is_some(), naive_rado(e.coeffs()));
            if let Some(s) = subset {
                prop_assert!(!s.is_empty());
                prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
                prop_assert_eq!(s.iter().map(|&i| e.coeffs()[i]).sum::<i64>(), 0);
            }
        }

        #[test]
        fn divisibility_ignores_global_sign(e in small_equation()) {
            let a = divisibility_condition(&e);
            let b = divisibility_condition(&e.negated());
            prop_assert_eq!(a.is_some(), b.is_some());
            if let (Some(a), Some(b)) = (a, b) {
                prop_assert_eq!(a.quotient, b.quotient);
                prop_assert_eq!(a.direction, b.direction);
                prop_assert_eq!(a.split.pos_indices, b.split.pos_indices);
                prop_assert_eq!(a.split.negated, !b.split.negated);
            }
        }

        #[test]
        fn distinctness_prime_has_distinct_residues(
            c in prop::collection::vec(prop_oneof![-200i64..=-1, 1i64..=200], 2..=6)
        ) {
            let e = Equation::new(c).unwrap();
            if let Some(p) = padic_distinctness(&e) {
                let r = order_residues(&e, p);
                for i in 0..r.len() {
                    for j in i + 1..r.len() {
                        prop_assert_ne!(r[i], r[j]);
                    }
                }
            }
        }
    }
}
