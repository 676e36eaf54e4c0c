//! Backtracking over all `r`-colorings of `[1, N]`.
//!
//! Values are colored in increasing order and a branch is cut as soon as the
//! newest value closes a monochromatic solution. With symmetry breaking, a value
//! may only open the next unused color, so each coloring is visited once up to
//! a permutation of colors. One node is one color-assignment attempt.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::equation::Equation;

/// Assignment levels expanded before subtrees are handed to worker threads.
const FANOUT_DEPTH: u64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search parameter: {0}")]
    InvalidParameter(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub node_budget: u64,
    pub parallel: bool,
    pub symmetry_breaking: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: 10_000_000,
            parallel: false,
            symmetry_breaking: true,
        }
    }
}

/// Every `colors`-coloring of `[1, interval]` contains a monochromatic solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveRegularityCertificate {
    pub equation: Equation,
    pub colors: u32,
    pub interval: u64,
    pub nodes_explored: u64,
    pub symmetry_breaking: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// An explicit coloring of `[1, N]` with no monochromatic solution.
    Found(Coloring),
    NoneExists(ExhaustiveRegularityCertificate),
    BudgetExhausted {
        nodes: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Found,
    Exhausted,
    OutOfBudget,
    Cancelled,
}

struct Anchor {
    /// Position pinned to the newest value.
    anchor: usize,
    pivot: usize,
    rest: Vec<usize>,
}

struct Tree<'a> {
    coeffs: &'a [i64],
    anchors: &'a [Anchor],
    colors: u32,
    interval: u64,
    symmetry: bool,
    table: Vec<Color>,
    classes: Vec<Vec<u64>>,
    used: u32,
    nodes: u64,
    budget: u64,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

enum Event {
    Node,
    Leaf(Vec<Color>),
    Subtree(Vec<Color>),
}

enum SubResult {
    Found { nodes: u64, table: Vec<Color> },
    Exhausted { nodes: u64 },
    OutOfBudget,
    Cancelled,
}

fn anchors_for(eq: &Equation) -> Vec<Anchor> {
    let coeffs = eq.coeffs();
    let mut anchors = Vec::new();
    for anchor in 0..coeffs.len() {
        // Equal coefficients give identical sub-searches.
        if coeffs[..anchor].contains(&coeffs[anchor]) {
            continue;
        }
        let others: Vec<usize> = (0..coeffs.len()).filter(|&i| i != anchor).collect();
        let mut pivot = others[0];
        for &i in &others {
            if coeffs[i].unsigned_abs() > coeffs[pivot].unsigned_abs() {
                pivot = i;
            }
        }
        let rest = others.into_iter().filter(|&i| i != pivot).collect();
        anchors.push(Anchor {
            anchor,
            pivot,
            rest,
        });
    }
    anchors
}

#[allow(clippy::too_many_arguments)]
fn closes_with(
    coeffs: &[i64],
    rest: &[usize],
    sum: i128,
    pivot: usize,
    class: &[u64],
    table: &[Color],
    newest: u64,
    color: Color,
) -> bool {
    match rest.split_first() {
        None => {
            let a = coeffs[pivot] as i128;
            if sum % a != 0 {
                return false;
            }
            let x = -sum / a;
            x >= 1 && x <= newest as i128 && table[(x - 1) as usize] == color
        }
        Some((&var, tail)) => {
            let a = coeffs[var] as i128;
            class.iter().any(|&x| {
                closes_with(
                    coeffs,
                    tail,
                    sum + a * x as i128,
                    pivot,
                    class,
                    table,
                    newest,
                    color,
                )
            })
        }
    }
}

impl<'a> Tree<'a> {
    fn new(
        eq: &'a Equation,
        anchors: &'a [Anchor],
        colors: u32,
        interval: u64,
        opts: &SearchOptions,
    ) -> Self {
        Tree {
            coeffs: eq.coeffs(),
            anchors,
            colors,
            interval,
            symmetry: opts.symmetry_breaking,
            table: Vec::with_capacity(interval as usize),
            classes: vec![Vec::new(); colors as usize],
            used: 0,
            nodes: 0,
            budget: opts.node_budget,
            cancel: None,
        }
    }

    fn load_prefix(&mut self, prefix: &[Color]) {
        for &c in prefix {
            self.assign(c);
        }
    }

    fn assign(&mut self, c: Color) {
        self.table.push(c);
        self.classes[c as usize].push(self.table.len() as u64);
        self.used = self.used.max(c + 1);
    }

    fn unassign(&mut self, previous_used: u32) {
        let c = self.table.pop().expect("nothing assigned");
        self.classes[c as usize].pop();
        self.used = previous_used;
    }

    /// Does the newest value close a monochromatic solution among `1..=newest`?
    fn closes(&self) -> bool {
        let newest = self.table.len() as u64;
        let color = self.table[(newest - 1) as usize];
        let class = &self.classes[color as usize];
        self.anchors.iter().any(|an| {
            let sum = self.coeffs[an.anchor] as i128 * newest as i128;
            closes_with(
                self.coeffs,
                &an.rest,
                sum,
                an.pivot,
                class,
                &self.table,
                newest,
                color,
            )
        })
    }

    fn color_limit(&self) -> u32 {
        if self.symmetry {
            self.colors.min(self.used + 1)
        } else {
            self.colors
        }
    }

    fn cancelled(&self) -> bool {
        self.cancel
            .is_some_and(|(flag, me)| flag.load(Ordering::Relaxed) < me)
    }

    fn dfs(&mut self) -> Step {
        if self.table.len() as u64 == self.interval {
            return Step::Found;
        }
        for c in 0..self.color_limit() {
            if self.cancelled() {
                return Step::Cancelled;
            }
            if self.nodes >= self.budget {
                return Step::OutOfBudget;
            }
            self.nodes += 1;
            let previous_used = self.used;
            self.assign(c);
            if !self.closes() {
                match self.dfs() {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            self.unassign(previous_used);
        }
        Step::Exhausted
    }

    /// Expands the first `depth` levels in DFS order. Returns true once a full
    /// coloring is reached (later events can never matter).
    fn frontier(&mut self, depth: u64, events: &mut Vec<Event>) -> bool {
        if self.table.len() as u64 == self.interval {
            events.push(Event::Leaf(self.table.clone()));
            return true;
        }
        if self.table.len() as u64 == depth {
            events.push(Event::Subtree(self.table.clone()));
            return false;
        }
        for c in 0..self.color_limit() {
            events.push(Event::Node);
            let previous_used = self.used;
            self.assign(c);
            if !self.closes() && self.frontier(depth, events) {
                return true;
            }
            self.unassign(previous_used);
        }
        false
    }
}

fn validate(colors: u32, interval: u64, opts: &SearchOptions) -> Result<(), SearchError> {
    if colors == 0 {
        return Err(SearchError::InvalidParameter("need at least one color"));
    }
    if interval == 0 {
        return Err(SearchError::InvalidParameter("interval must be at least 1"));
    }
    if opts.node_budget == 0 {
        return Err(SearchError::InvalidParameter(
            "node budget must be at least 1",
        ));
    }
    Ok(())
}

/// Searches for a `colors`-coloring of `[1, interval]` with no monochromatic
/// solution. Parallel and sequential runs return identical outcomes.
pub fn search_avoiding_coloring(
    eq: &Equation,
    colors: u32,
    interval: u64,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    validate(colors, interval, opts)?;
    let anchors = anchors_for(eq);
    let certificate = |nodes| {
        SearchOutcome::NoneExists(ExhaustiveRegularityCertificate {
            equation: eq.clone(),
            colors,
            interval,
            nodes_explored: nodes,
            symmetry_breaking: opts.symmetry_breaking,
        })
    };
    let found = |table: Vec<Color>| {
        SearchOutcome::Found(
            Coloring::explicit(colors, table).expect("search colors stay in range"),
        )
    };
    let exhausted = SearchOutcome::BudgetExhausted {
        nodes: opts.node_budget,
    };

    if !opts.parallel {
        let mut tree = Tree::new(eq, &anchors, colors, interval, opts);
        return Ok(match tree.dfs() {
            Step::Found => found(tree.table),
            Step::Exhausted => certificate(tree.nodes),
            Step::OutOfBudget => exhausted,
            Step::Cancelled => unreachable!("sequential search is never cancelled"),
        });
    }

    let mut events = Vec::new();
    Tree::new(eq, &anchors, colors, interval, opts).frontier(FANOUT_DEPTH, &mut events);
    let prefixes: Vec<&[Color]> = events
        .iter()
        .filter_map(|e| match e {
            Event::Subtree(p) => Some(p.as_slice()),
            _ => None,
        })
        .collect();

    let first_found = AtomicUsize::new(usize::MAX);
    let results: Vec<SubResult> = prefixes
        .par_iter()
        .enumerate()
        .map(|(idx, prefix)| {
            let mut tree = Tree::new(eq, &anchors, colors, interval, opts);
            tree.load_prefix(prefix);
            tree.cancel = Some((&first_found, idx));
            match tree.dfs() {
                Step::Found => {
                    first_found.fetch_min(idx, Ordering::Relaxed);
                    SubResult::Found {
                        nodes: tree.nodes,
                        table: tree.table,
                    }
                }
                Step::Exhausted => SubResult::Exhausted { nodes: tree.nodes },
                Step::OutOfBudget => SubResult::OutOfBudget,
                Step::Cancelled => SubResult::Cancelled,
            }
        })
        .collect();

    // Replay the sequential node accounting in DFS order.
    let budget = opts.node_budget;
    let mut spent = 0u64;
    let mut results = results.into_iter();
    for event in events {
        match event {
            Event::Node => {
                if spent >= budget {
                    return Ok(exhausted);
                }
                spent += 1;
            }
            Event::Leaf(table) => return Ok(found(table)),
            Event::Subtree(_) => match results.next().expect("one result per subtree") {
                SubResult::Found { nodes, table } if spent + nodes <= budget => {
                    return Ok(found(table))
                }
                SubResult::Exhausted { nodes } if spent + nodes <= budget => spent += nodes,
                SubResult::Cancelled => unreachable!("cancelled subtrees follow a found one"),
                _ => return Ok(exhausted),
            },
        }
    }
    Ok(certificate(spent))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ForcingInterval {
    /// Smallest interval on which every coloring has a monochromatic solution.
    Forced {
        interval: u64,
    },
    /// Avoiding colorings exist for every interval up to the limit.
    AvoidersThrough {
        interval: u64,
    },
    BudgetExhausted {
        interval: u64,
    },
}

/// Smallest `N <= max_interval` on which no avoiding `colors`-coloring exists.
pub fn min_forcing_interval(
    eq: &Equation,
    colors: u32,
    max_interval: u64,
    opts: &SearchOptions,
) -> Result<ForcingInterval, SearchError> {
    validate(colors, max_interval, opts)?;
    for interval in 1..=max_interval {
        match search_avoiding_coloring(eq, colors, interval, opts)? {
            SearchOutcome::Found(_) => {}
            SearchOutcome::NoneExists(_) => return Ok(ForcingInterval::Forced { interval }),
            SearchOutcome::BudgetExhausted { .. } => {
                return Ok(ForcingInterval::BudgetExhausted { interval })
            }
        }
    }
    Ok(ForcingInterval::AvoidersThrough {
        interval: max_interval,
    })
}

/// Certificate that every `colors`-coloring of `[1, interval]` is forced, if the search proves it.
pub fn certify_r_regular(
    eq: &Equation,
    colors: u32,
    interval: u64,
    opts: &SearchOptions,
) -> Result<Option<ExhaustiveRegularityCertificate>, SearchError> {
    Ok(
        match search_avoiding_coloring(eq, colors, interval, opts)? {
            SearchOutcome::NoneExists(cert) => Some(cert),
            _ => None,
        },
    )
}
