//! Colorings of the positive integers and monochromatic-solution search on `[1, N]`.
//!
//! Colors are 0-based indices.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equation::Equation;
use crate::padic::{PAdicColoring, PadicError};

pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("{x} is outside the coloring's domain [1, {bound}]")]
    OutOfDomain { x: u64, bound: u64 },
    #[error("invalid coloring: {0}")]
    Invalid(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// A color table for `[1, N]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawExplicit")]
pub struct ExplicitColoring {
    num_colors: u32,
    table: Vec<Color>,
}

#[derive(Deserialize)]
struct RawExplicit {
    num_colors: u32,
    table: Vec<Color>,
}

impl TryFrom<RawExplicit> for ExplicitColoring {
    type Error = ColoringError;

    fn try_from(raw: RawExplicit) -> Result<Self, Self::Error> {
        ExplicitColoring::new(raw.num_colors, raw.table)
    }
}

impl ExplicitColoring {
    pub fn new(num_colors: u32, table: Vec<Color>) -> Result<Self, ColoringError> {
        if num_colors == 0 {
            return Err(ColoringError::Invalid("needs at least one color".into()));
        }
        if table.is_empty() {
            return Err(ColoringError::Invalid("empty color table".into()));
        }
        if let Some(pos) = table.iter().position(|&c| c >= num_colors) {
            return Err(ColoringError::Invalid(format!(
                "color {} of {} is not below {num_colors}",
                table[pos],
                pos + 1
            )));
        }
        Ok(ExplicitColoring { num_colors, table })
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    /// Colors of `1..=N` in order.
    pub fn table(&self) -> &[Color] {
        &self.table
    }

    pub fn bound(&self) -> u64 {
        self.table.len() as u64
    }
}

/// `x -> table[x mod m]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPeriodic")]
pub struct PeriodicColoring {
    table: Vec<Color>,
}

#[derive(Deserialize)]
struct RawPeriodic {
    table: Vec<Color>,
}

impl TryFrom<RawPeriodic> for PeriodicColoring {
    type Error = ColoringError;

    fn try_from(raw: RawPeriodic) -> Result<Self, Self::Error> {
        PeriodicColoring::new(raw.table)
    }
}

impl PeriodicColoring {
    pub fn new(table: Vec<Color>) -> Result<Self, ColoringError> {
        if table.is_empty() {
            return Err(ColoringError::Invalid(
                "periodic coloring needs a modulus >= 1".into(),
            ));
        }
        Ok(PeriodicColoring { table })
    }

    pub fn modulus(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn table(&self) -> &[Color] {
        &self.table
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Coloring {
    Explicit(ExplicitColoring),
    Padic(PAdicColoring),
    Periodic(PeriodicColoring),
}

// Knuth's MMIX constants.
const LCG_MULTIPLIER: u64 = 6_364_136_223_846_793_005;
const LCG_INCREMENT: u64 = 1_442_695_040_888_963_407;

impl Coloring {
    /// Every integer gets color 0.
    pub fn constant() -> Self {
        Coloring::Periodic(PeriodicColoring { table: vec![0] })
    }

    pub fn explicit(num_colors: u32, table: Vec<Color>) -> Result<Self, ColoringError> {
        ExplicitColoring::new(num_colors, table).map(Coloring::Explicit)
    }

    pub fn periodic(table: Vec<Color>) -> Result<Self, ColoringError> {
        PeriodicColoring::new(table).map(Coloring::Periodic)
    }

    pub fn padic(p: u64, num_colors: u32) -> Result<Self, ColoringError> {
        Ok(Coloring::Padic(PAdicColoring::new(p, num_colors)?))
    }

    /// Portable pseudorandom coloring of `[1, N]`.
    ///
    /// The state starts at `seed` and advances as `s <- s * 6364136223846793005 + 1442695040888963407`
    /// (mod 2^64) once per integer; `x` receives `(s >> 33) mod num_colors` after its step.
    pub fn pseudo_random(seed: u64, num_colors: u32, bound: u64) -> Result<Self, ColoringError> {
        if num_colors == 0 {
            return Err(ColoringError::Invalid("needs at least one color".into()));
        }
        let mut state = seed;
        let table = (0..bound)
            .map(|_| {
                state = state
                    .wrapping_mul(LCG_MULTIPLIER)
                    .wrapping_add(LCG_INCREMENT);
                ((state >> 33) % num_colors as u64) as Color
            })
            .collect();
        Coloring::explicit(num_colors, table)
    }

    /// Largest integer the coloring is defined on; `None` for rules.
    pub fn domain_bound(&self) -> Option<u64> {
        match self {
            Coloring::Explicit(e) => Some(e.bound()),
            _ => None,
        }
    }

    /// Declared palette size (an upper bound on colors actually used).
    pub fn num_colors(&self) -> u32 {
        match self {
            Coloring::Explicit(e) => e.num_colors,
            Coloring::Padic(p) => p.num_colors(),
            Coloring::Periodic(p) => p.table.iter().max().map_or(1, |&m| m + 1),
        }
    }

    pub fn color_of(&self, x: u64) -> Result<Color, ColoringError> {
        if x == 0 {
            return Err(ColoringError::OutOfDomain {
                x,
                bound: self.domain_bound().unwrap_or(u64::MAX),
            });
        }
        match self {
            Coloring::Explicit(e) => {
                e.table
                    .get((x - 1) as usize)
                    .copied()
                    .ok_or(ColoringError::OutOfDomain {
                        x,
                        bound: e.bound(),
                    })
            }
            Coloring::Padic(p) => Ok(p.color(x)),
            Coloring::Periodic(p) => Ok(p.table[(x % p.modulus()) as usize]),
        }
    }

    /// Colors of `1..=bound`, index `x - 1`.
    pub fn tabulate(&self, bound: u64) -> Result<Vec<Color>, ColoringError> {
        self.check_domain(bound)?;
        (1..=bound).map(|x| self.color_of(x)).collect()
    }

    /// Number of distinct colors appearing on `[1, bound]`.
    pub fn colors_used(&self, bound: u64) -> Result<usize, ColoringError> {
        let mut table = self.tabulate(bound)?;
        table.sort_unstable();
        table.dedup();
        Ok(table.len())
    }

    fn check_domain(&self, bound: u64) -> Result<(), ColoringError> {
        match self.domain_bound() {
            Some(b) if bound > b => Err(ColoringError::OutOfDomain { x: bound, bound: b }),
            _ => Ok(()),
        }
    }

    /// Text form for explicit tables: `r N` on the first line, then `N` colors.
    pub fn to_text(&self, bound: u64) -> Result<String, ColoringError> {
        let table = self.tabulate(bound)?;
        let mut out = format!("{} {}\n", self.num_colors(), bound);
        for (i, c) in table.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{c}").unwrap();
        }
        out.push('\n');
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Self, ColoringError> {
        let bad = |msg: &str| ColoringError::Invalid(msg.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header line"))?;
        let mut head = header.split_whitespace().map(str::parse::<u64>);
        let (r, n) = match (head.next(), head.next(), head.next()) {
            (Some(Ok(r)), Some(Ok(n)), None) => (r, n),
            _ => return Err(bad("header must be `r N`")),
        };
        let r = u32::try_from(r).map_err(|_| bad("too many colors"))?;
        let table = lines
            .flat_map(str::split_whitespace)
            .map(|tok| {
                tok.parse::<Color>()
                    .map_err(|_| bad("colors must be integers"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if table.len() as u64 != n {
            return Err(ColoringError::Invalid(format!(
                "header promises {n} colors, found {}",
                table.len()
            )));
        }
        Coloring::explicit(r, table)
    }
}

/// A monochromatic solution: `Σ a_i x_i = 0`, every `x_i >= 1`, all colored `color`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionWitness {
    pub equation: Equation,
    pub values: Vec<u64>,
    pub color: Color,
}

/// The coloring has no monochromatic solution inside `[1, interval]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceCertificate {
    pub equation: Equation,
    pub coloring: Coloring,
    pub interval: u64,
    /// Non-pivot assignments examined.
    pub checked_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AvoidanceOutcome {
    Avoids(AvoidanceCertificate),
    Solution(SolutionWitness),
}

struct Scan<'a> {
    coeffs: &'a [i64],
    pivot: usize,
    others: Vec<usize>,
    table: &'a [Color],
    classes: Vec<Vec<u64>>,
    distinct: bool,
    values: Vec<u64>,
    checked: u64,
}

impl Scan<'_> {
    fn run(&mut self, depth: usize, sum: i128, color: Color) -> bool {
        if depth == self.others.len() {
            self.checked += 1;
            return self.solve_pivot(sum, color);
        }
        let var = self.others[depth];
        let a = self.coeffs[var] as i128;
        if depth == 0 {
            for x in 1..=self.table.len() as u64 {
                let c = self.table[(x - 1) as usize];
                self.values[var] = x;
                if self.run(1, a * x as i128, c) {
                    return true;
                }
            }
        } else {
            let class = std::mem::take(&mut self.classes[color as usize]);
            let mut found = false;
            for &x in &class {
                if self.distinct && self.others[..depth].iter().any(|&o| self.values[o] == x) {
                    continue;
                }
                self.values[var] = x;
                if self.run(depth + 1, sum + a * x as i128, color) {
                    found = true;
                    break;
                }
            }
            self.classes[color as usize] = class;
            return found;
        }
        false
    }

    fn solve_pivot(&mut self, sum: i128, color: Color) -> bool {
        let a = self.coeffs[self.pivot] as i128;
        if sum % a != 0 {
            return false;
        }
        let x = -sum / a;
        if x < 1 || x > self.table.len() as i128 {
            return false;
        }
        let x = x as u64;
        if self.table[(x - 1) as usize] != color {
            return false;
        }
        if self.distinct && self.others.iter().any(|&o| self.values[o] == x) {
            return false;
        }
        self.values[self.pivot] = x;
        true
    }
}

/// Scans the non-pivot assignments in lexicographic order, solving exactly for
/// the pivot. Returns the first witness and the number of assignments checked.
fn scan(
    eq: &Equation,
    coloring: &Coloring,
    bound: u64,
    distinct: bool,
) -> Result<(Option<SolutionWitness>, u64), ColoringError> {
    let table = coloring.tabulate(bound)?;
    let num_classes = table.iter().max().map_or(0, |&m| m as usize + 1);
    let mut classes = vec![Vec::new(); num_classes];
    for (i, &c) in table.iter().enumerate() {
        classes[c as usize].push(i as u64 + 1);
    }
    let pivot = eq.pivot_index();
    let mut scan = Scan {
        coeffs: eq.coeffs(),
        pivot,
        others: (0..eq.num_vars()).filter(|&i| i != pivot).collect(),
        table: &table,
        classes,
        distinct,
        values: vec![0; eq.num_vars()],
        checked: 0,
    };
    let found = scan.run(0, 0, 0);
    let witness = found.then(|| SolutionWitness {
        equation: eq.clone(),
        color: table[(scan.values[0] - 1) as usize],
        values: scan.values.clone(),
    });
    Ok((witness, scan.checked))
}

/// First monochromatic solution inside `[1, bound]`, if any. `distinct` demands
/// pairwise different values.
pub fn find_monochromatic_solution(
    eq: &Equation,
    coloring: &Coloring,
    bound: u64,
    distinct: bool,
) -> Result<Option<SolutionWitness>, ColoringError> {
    scan(eq, coloring, bound, distinct).map(|(w, _)| w)
}

/// Exhaustively checks `[1, bound]`: an avoidance certificate, or the first solution.
pub fn verify_avoiding(
    eq: &Equation,
    coloring: &Coloring,
    bound: u64,
) -> Result<AvoidanceOutcome, ColoringError> {
    let (witness, checked_count) = scan(eq, coloring, bound, false)?;
    Ok(match witness {
        Some(w) => AvoidanceOutcome::Solution(w),
        None => AvoidanceOutcome::Avoids(AvoidanceCertificate {
            equation: eq.clone(),
            coloring: coloring.clone(),
            interval: bound,
            checked_count,
        }),
    })
}

/// Independent re-check of a witness against an equation and a coloring.
pub fn verify_witness(eq: &Equation, coloring: &Coloring, w: &SolutionWitness) -> bool {
    w.equation == *eq
        && w.values.len() == eq.num_vars()
        && w.values.iter().all(|&x| x >= 1)
        && eq.evaluate(&w.values) == 0
        && w.values
            .iter()
            .all(|&x| coloring.color_of(x) == Ok(w.color))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(coeffs: &[i64]) -> Equation {
        Equation::new(coeffs.to_vec()).unwrap()
    }

    fn witness(e: &Equation, values: &[u64], color: Color) -> SolutionWitness {
        SolutionWitness {
            equation: e.clone(),
            values: values.to_vec(),
            color,
        }
    }

    #[test]
    fn color_of_examples() {
        let explicit = Coloring::explicit(2, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(explicit.color_of(3), Ok(1));
        assert_eq!(
            explicit.color_of(5),
            Err(ColoringError::OutOfDomain { x: 5, bound: 4 })
        );
        assert_eq!(Coloring::padic(2, 3).unwrap().color_of(4), Ok(2));
        assert_eq!(Coloring::periodic(vec![0, 1]).unwrap().color_of(7), Ok(1));
        assert!(Coloring::constant().color_of(0).is_err());
    }

    #[test]
    fn invalid_colorings_rejected() {
        assert!(Coloring::explicit(2, vec![0, 2]).is_err());
        assert!(Coloring::explicit(2, vec![]).is_err());
        assert!(Coloring::periodic(vec![]).is_err());
        assert!(Coloring::padic(9, 2).is_err());
        assert!(serde_json::from_str::<Coloring>(
            r#"{"rule":"explicit","num_colors":1,"table":[0,1]}"#
        )
        .is_err());
    }

    #[test]
    fn find_examples() {
        let w = find_monochromatic_solution(&eq(&[1, 1, -1]), &Coloring::constant(), 10, false)
            .unwrap()
            .unwrap();
        assert_eq!((w.values, w.color), (vec![1, 1, 2], 0));

        let padic = Coloring::padic(2, 3).unwrap();
        assert_eq!(
            find_monochromatic_solution(&eq(&[1, 2, -12]), &padic, 500, false).unwrap(),
            None
        );

        let parity = Coloring::periodic(vec![0, 1]).unwrap();
        let w = find_monochromatic_solution(&eq(&[1, -2]), &parity, 100, false)
            .unwrap()
            .unwrap();
        assert_eq!((w.values, w.color), (vec![4, 2], 0));
    }

    #[test]
    fn distinct_flag_excludes_repeats() {
        let w = find_monochromatic_solution(&eq(&[1, 1, -1]), &Coloring::constant(), 10, true)
            .unwrap()
            .unwrap();
        // (x2, x3) = (1, 2) forces x1 = 1, a repeat; (1, 3) gives x1 = 2.
        assert_eq!(w.values, vec![2, 1, 3]);
        assert_eq!(
            find_monochromatic_solution(&eq(&[1, 1, -2]), &Coloring::constant(), 2, true).unwrap(),
            None
        );
    }

    #[test]
    fn explicit_domain_is_enforced() {
        let c = Coloring::explicit(1, vec![0; 5]).unwrap();
        assert!(matches!(
            find_monochromatic_solution(&eq(&[1, -1]), &c, 6, false),
            Err(ColoringError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn verify_avoiding_examples() {
        let padic = Coloring::padic(2, 3).unwrap();
        match verify_avoiding(&eq(&[1, -2, 4]), &padic, 2000).unwrap() {
            AvoidanceOutcome::Avoids(cert) => assert!(cert.checked_count > 0),
            other => panic!("expected avoidance, got {other:?}"),
        }

        let schur = Coloring::explicit(2, vec![0, 1, 1, 0]).unwrap();
        assert!(matches!(
            verify_avoiding(&eq(&[1, 1, -1]), &schur, 4).unwrap(),
            AvoidanceOutcome::Avoids(_)
        ));

        match verify_avoiding(&eq(&[1, 1, -1]), &Coloring::constant(), 2).unwrap() {
            AvoidanceOutcome::Solution(w) => assert_eq!(w.values, vec![1, 1, 2]),
            other => panic!("expected a solution, got {other:?}"),
        }
    }

    #[test]
    fn verify_witness_examples() {
        let e = eq(&[1, 2, -4]);
        assert!(verify_witness(
            &e,
            &Coloring::constant(),
            &witness(&e, &[4, 6, 4], 0)
        ));
        let e = eq(&[1, 1, -1]);
        assert!(!verify_witness(
            &e,
            &Coloring::constant(),
            &witness(&e, &[1, 1, 3], 0)
        ));
        let e = eq(&[1, -2]);
        let parity = Coloring::periodic(vec![0, 1]).unwrap();
        assert!(!verify_witness(&e, &parity, &witness(&e, &[2, 1], 0)));
        assert!(!verify_witness(&e, &parity, &witness(&e, &[2, 1, 0], 0)));
        assert!(!verify_witness(
            &eq(&[2, -4]),
            &parity,
            &witness(&e, &[4, 2], 0)
        ));
    }

    #[test]
    fn text_format_round_trips() {
        let c = Coloring::explicit(3, vec![0, 2, 1, 1, 0]).unwrap();
        let text = c.to_text(5).unwrap();
        assert_eq!(text, "3 5\n0 2 1 1 0\n");
        assert_eq!(Coloring::from_text(&text).unwrap(), c);
        assert!(Coloring::from_text("2 3\n0 1\n").is_err());
        assert!(Coloring::from_text("2 2\n0 2\n").is_err());
        assert!(Coloring::from_text("").is_err());
    }

    #[test]
    fn pseudo_random_is_stable() {
        let a = Coloring::pseudo_random(7, 2, 32).unwrap();
        let b = Coloring::pseudo_random(7, 2, 32).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, Coloring::pseudo_random(8, 2, 32).unwrap());
        assert_eq!(a.colors_used(32).unwrap(), 2);
        // First state from seed 0 is the increment itself.
        let first = ((LCG_INCREMENT >> 33) % 5) as Color;
        assert_eq!(
            Coloring::pseudo_random(0, 5, 1).unwrap().color_of(1),
            Ok(first)
        );
    }
}
