use std::fmt;

use serde::{Deserialize, Serialize};

use super::{divisibility_condition, is_rado_regular, padic_distinctness, sign_split};
use super::{DivisibilityWitness, Equation, SignSplit};
use crate::families::{recognize, FamilySpec};
use crate::search::{
    certify_r_regular, ExhaustiveRegularityCertificate, SearchError, SearchOptions,
};

/// A bound on the degree of regularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DorBound {
    Finite(u32),
    /// Known to be finite, with no certified value.
    FiniteUnknown,
    Infinite,
}

impl fmt::Display for DorBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DorBound::Finite(v) => write!(f, "{v}"),
            DorBound::FiniteUnknown => f.write_str("finite (unknown)"),
            DorBound::Infinite => f.write_str("∞"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum LowerBoundSource {
    /// A coefficient subset sums to zero.
    Rado,
    /// One side's coefficient sum divides the other's.
    Divisibility,
    /// Member of the alternating powers-of-two or geometric family.
    Family {
        family: FamilySpec,
    },
    /// Exhaustive search over colorings of a finite interval.
    ExhaustiveSearch {
        colors: u32,
    },
    /// A positive solution exists, so every 1-coloring has one.
    PositiveSolution,
    NoPositiveSolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum UpperBoundSource {
    Rado,
    /// The `O_p mod n` coloring avoids every solution.
    PadicColoring {
        p: u64,
    },
    NoPositiveSolution,
    /// Not regular, so finite, but nothing bounds it.
    Unbounded,
}

/// Interval search settings for [`DorReport::analyze`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    /// Interval for exhaustive search; `None` skips the search.
    pub search_interval: Option<u64>,
    /// Search never goes beyond this many colors.
    pub max_search_colors: u32,
    pub search: SearchOptions,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            search_interval: None,
            max_search_colors: 4,
            search: SearchOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DorReport {
    pub equation: Equation,
    pub rado_subset: Option<Vec<usize>>,
    pub sign_split: Option<SignSplit>,
    pub not_n_regular_prime: Option<u64>,
    pub divisibility: Option<DivisibilityWitness>,
    pub family: Option<FamilySpec>,
    pub search_evidence: Vec<ExhaustiveRegularityCertificate>,
    pub dor_lower: DorBound,
    pub dor_upper: DorBound,
    pub lower_source: LowerBoundSource,
    pub upper_source: UpperBoundSource,
}

impl DorReport {
    pub fn analyze(eq: &Equation, config: &AnalysisConfig) -> Result<Self, SearchError> {
        let n = eq.num_vars() as u32;
        let mut report = DorReport {
            equation: eq.clone(),
            rado_subset: is_rado_regular(eq),
            sign_split: sign_split(eq),
            not_n_regular_prime: padic_distinctness(eq),
            divisibility: divisibility_condition(eq),
            family: recognize(eq),
            search_evidence: Vec::new(),
            dor_lower: DorBound::Finite(0),
            dor_upper: DorBound::Finite(0),
            lower_source: LowerBoundSource::NoPositiveSolution,
            upper_source: UpperBoundSource::NoPositiveSolution,
        };

        if report.rado_subset.is_some() {
            report.dor_lower = DorBound::Infinite;
            report.dor_upper = DorBound::Infinite;
            report.lower_source = LowerBoundSource::Rado;
            report.upper_source = UpperBoundSource::Rado;
            return Ok(report);
        }
        if report.sign_split.is_none() {
            return Ok(report);
        }

        (report.dor_upper, report.upper_source) = match report.not_n_regular_prime {
            Some(p) => (
                DorBound::Finite(n - 1),
                UpperBoundSource::PadicColoring { p },
            ),
            None => (DorBound::FiniteUnknown, UpperBoundSource::Unbounded),
        };
        let mut lower = if report.divisibility.is_some() {
            report.lower_source = LowerBoundSource::Divisibility;
            n - 1
        } else if let Some(family) = &report.family {
            report.lower_source = LowerBoundSource::Family {
                family: family.clone(),
            };
            n - 1
        } else {
            report.lower_source = LowerBoundSource::PositiveSolution;
            1
        };

        if let Some(interval) = config.search_interval {
            let ceiling = match report.dor_upper {
                DorBound::Finite(u) => u.min(config.max_search_colors),
                _ => config.max_search_colors,
            };
            // r-regularity fails for all larger r once it fails for one r.
            for colors in lower + 1..=ceiling {
                match certify_r_regular(eq, colors, interval, &config.search)? {
                    Some(cert) => {
                        report.search_evidence.push(cert);
                        lower = colors;
                        report.lower_source = LowerBoundSource::ExhaustiveSearch { colors };
                    }
                    None => break,
                }
            }
        }
        report.dor_lower = DorBound::Finite(lower);
        Ok(report)
    }

    /// Internal consistency of the bounds and the evidence behind them.
    pub fn is_consistent(&self) -> bool {
        let n = self.equation.num_vars() as u32;
        let ordered = match (self.dor_lower, self.dor_upper) {
            (DorBound::Finite(l), DorBound::Finite(u)) => l <= u,
            (DorBound::Finite(_), DorBound::FiniteUnknown | DorBound::Infinite) => true,
            (DorBound::Infinite, DorBound::Infinite) => true,
            _ => false,
        };
        let rado = self.rado_subset.is_none()
            || (self.dor_lower == DorBound::Infinite && self.dor_upper == DorBound::Infinite);
        let padic = self.rado_subset.is_some()
            || self.sign_split.is_none()
            || self.not_n_regular_prime.is_none()
            || matches!(self.dor_upper, DorBound::Finite(u) if u < n);
        let divisible = (self.divisibility.is_none() && self.family.is_none())
            || matches!(self.dor_lower, DorBound::Infinite)
            || matches!(self.dor_lower, DorBound::Finite(l) if l >= n - 1);
        ordered && rado && padic && divisible
    }

    /// The exact degree of regularity when both bounds meet.
    pub fn exact(&self) -> Option<DorBound> {
        (self.dor_lower == self.dor_upper).then_some(self.dor_lower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(coeffs: &[i64]) -> DorReport {
        let eq = Equation::new(coeffs.to_vec()).unwrap();
        DorReport::analyze(&eq, &AnalysisConfig::default()).unwrap()
    }

    #[test]
    fn weighted_instance_has_exact_degree() {
        let r = report(&[1, 2, -12]);
        assert_eq!(r.exact(), Some(DorBound::Finite(2)));
        assert_eq!(r.not_n_regular_prime, Some(2));
        assert_eq!(r.divisibility.as_ref().map(|d| d.quotient), Some(4));
        assert_eq!(r.upper_source, UpperBoundSource::PadicColoring { p: 2 });
        assert_eq!(r.lower_source, LowerBoundSource::Divisibility);
        assert!(r.is_consistent());
    }

    #[test]
    fn regular_and_degenerate() {
        let r = report(&[1, 1, -1]);
        assert_eq!(r.exact(), Some(DorBound::Infinite));
        assert_eq!(r.rado_subset, Some(vec![0, 2]));
        let r = report(&[1, 1, 1]);
        assert_eq!(r.exact(), Some(DorBound::Finite(0)));
        assert!(r.is_consistent());
    }

    #[test]
    fn unknown_upper_bound_without_padic_certificate() {
        // 2 - 3 has no zero subset; primes 2 and 3 each give orders {1,0}: distinct mod 2.
        let r = report(&[2, -3]);
        assert_eq!(r.not_n_regular_prime, Some(2));
        // 3x1 + 3x2 - 5x3: orders under 3 are 1,1,0; under 5 are 0,0,1. No certificate.
        let r = report(&[3, 3, -5]);
        assert_eq!(r.not_n_regular_prime, None);
        assert_eq!(r.dor_upper, DorBound::FiniteUnknown);
        assert_eq!(r.dor_lower, DorBound::Finite(1));
        assert!(r.is_consistent());
    }

    #[test]
    fn search_raises_lower_bound() {
        // x1 + x2 = 3 x3: pos 2 does not divide 3, no certificate from the sums.
        let eq = Equation::new(vec![1, 1, -3]).unwrap();
        let config = AnalysisConfig {
            search_interval: Some(30),
            max_search_colors: 3,
            ..AnalysisConfig::default()
        };
        let r = DorReport::analyze(&eq, &config).unwrap();
        assert!(r.divisibility.is_none());
        assert!(!r.search_evidence.is_empty());
        assert_eq!(r.search_evidence[0].colors, 2);
        assert_eq!(
            r.lower_source,
            LowerBoundSource::ExhaustiveSearch {
                colors: r.search_evidence.len() as u32 + 1
            }
        );
        assert!(r.is_consistent());
    }

    #[test]
    fn family_members_get_n_minus_one_from_construction() {
        let r = report(&[1, -2, 4]);
        assert!(r.divisibility.is_none());
        assert_eq!(
            r.lower_source,
            LowerBoundSource::Family {
                family: FamilySpec::AlternatingPow2 { n: 3 }
            }
        );
        assert_eq!(r.exact(), Some(DorBound::Finite(2)));
        // 1 - 2 + 4 - 8: 5 divides 10, so the side sums already decide it.
        let r = report(&[1, -2, 4, -8]);
        assert_eq!(r.lower_source, LowerBoundSource::Divisibility);
        assert_eq!(r.exact(), Some(DorBound::Finite(3)));
        let r = report(&[1, 3, -9]);
        assert_eq!(r.exact(), Some(DorBound::Finite(2)));
        assert!(r.is_consistent());
    }

    #[test]
    fn inconsistent_report_is_detected() {
        let mut r = report(&[1, 2, -12]);
        r.dor_lower = DorBound::Finite(3);
        assert!(!r.is_consistent());
    }
}
