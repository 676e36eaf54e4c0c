use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use regularity::coloring::{verify_avoiding, AvoidanceOutcome};
use regularity::equation::{LowerBoundSource, UpperBoundSource};
use regularity::lemmas::{
    construct_solution_alternating, construct_solution_geometric, construct_solution_split,
    ConstructionProof,
};
use regularity::search::search_avoiding_coloring;
use regularity::{
    parse_equation, AnalysisConfig, Coloring, ConstructedSolution, ConstructionError, DorReport,
    Equation, FamilySpec, RegularityClaim, SearchOptions, SearchOutcome,
};

use crate::certificate::{Budgets, CertificateFile, DorRecord, Payload, Provenance, WitnessRecord};
use crate::rule::ColoringRule;
use crate::{exit, CliError};

const DEFAULT_BUDGET: u64 = 10_000_000;
/// How far beyond `--interval` the witness command looks when suggesting a retry.
const RETRY_FACTOR: u64 = 8;

#[derive(Debug, Parser)]
#[command(
    name = "regularity",
    version,
    about = "Partition regularity of linear equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound the degree of regularity of an equation.
    Analyze {
        /// Coefficients `a1,a2,...` or a symbolic form such as `x1 + 2x2 - 12x3 = 0`.
        #[arg(allow_hyphen_values = true)]
        equation: String,
        /// Also run exhaustive searches on [1, N] to raise the lower bound.
        #[arg(long)]
        interval: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Largest color count the searches try.
        #[arg(long, default_value_t = 4)]
        max_colors: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a coloring of [1, N] with no monochromatic solution.
    Search {
        #[arg(allow_hyphen_values = true)]
        equation: String,
        #[arg(long)]
        colors: u32,
        /// Without this, N grows from 1 until no avoiding coloring exists.
        #[arg(long)]
        interval: Option<u64>,
        #[arg(long, default_value_t = 64)]
        max_interval: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        no_symmetry_breaking: bool,
        /// Certificate file; a found coloring also goes to `<out>.coloring`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file.
    Verify { file: PathBuf },
    /// Build a monochromatic solution for a family member under a coloring.
    Witness {
        #[command(flatten)]
        family: FamilyArgs,
        /// Any equation whose side sums divide one another, instead of a family.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "family")]
        equation: Option<String>,
        /// `all-one`, `padic:p:r`, `periodic:m:c0,...`, `rand-seed:seed:r` or a coloring file.
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        interval: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a family member as a coefficient list.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Alt2,
    Geom,
    Weighted,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub family: Option<FamilyName>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, visible_alias = "base")]
    pub p: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("this family needs --{flag}")))
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec, CliError> {
        let family = need(self.family, "family")?;
        Ok(match family {
            FamilyName::Alt2 => FamilySpec::AlternatingPow2 {
                n: need(self.n, "n")?,
            },
            FamilyName::Geom => FamilySpec::Geometric {
                base: need(self.p, "p")?,
                n: need(self.n, "n")?,
            },
            FamilyName::Weighted => {
                if let Some(n) = self.n {
                    if n != self.q.len() + 1 {
                        return Err(CliError::Usage(format!(
                            "--n {n} disagrees with {} weights",
                            self.q.len()
                        )));
                    }
                }
                FamilySpec::Weighted {
                    p: need(self.p, "p")?,
                    qs: self.q.clone(),
                }
            }
        })
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    argv: Vec<String>,
}

// Console writes are best effort; a closed pipe must not change the exit code.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{
        let _ = writeln!($w, $($arg)*);
    }};
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    exit::SUCCESS
                }
                _ => {
                    let _ = write!(err, "{e}");
                    exit::USAGE
                }
            };
        }
    };
    let mut io = Io {
        out,
        err,
        argv: args
            .iter()
            .map(|a| a.to_string_lossy().into_owned())
            .collect(),
    };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            say!(io.err, "error: {e}");
            exit::USAGE
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, CliError> {
    match command {
        Command::Analyze {
            equation,
            interval,
            budget,
            max_colors,
            out,
        } => analyze(io, &equation, interval, budget, max_colors, out.as_deref()),
        Command::Search {
            equation,
            colors,
            interval,
            max_interval,
            budget,
            parallel,
            no_symmetry_breaking,
            out,
        } => {
            let opts = SearchOptions {
                node_budget: budget,
                parallel,
                symmetry_breaking: !no_symmetry_breaking,
            };
            let eq = parse_equation(&equation)?;
            match interval {
                Some(n) => search_fixed(io, &eq, colors, n, &opts, out.as_deref()),
                None => search_growing(io, &eq, colors, max_interval, &opts, out.as_deref()),
            }
        }
        Command::Verify { file } => verify(io, &file),
        Command::Witness {
            family,
            equation,
            coloring,
            interval,
            out,
        } => witness(
            io,
            &family,
            equation.as_deref(),
            &coloring,
            interval,
            out.as_deref(),
        ),
        Command::Generate { family } => generate(io, &family),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(
    io: &mut Io<'_>,
    path: Option<&Path>,
    payload: &Payload,
    budgets: Budgets,
) -> Result<(), CliError> {
    if let Some(path) = path {
        let provenance = Provenance {
            command: io.argv.clone(),
            budgets,
        };
        write_file(path, &CertificateFile::new(payload, provenance).to_json())?;
        say!(io.out, "certificate written to {}", path.display());
    }
    Ok(())
}

fn one_based(indices: &[usize]) -> String {
    let labels: Vec<String> = indices.iter().map(|i| format!("x{}", i + 1)).collect();
    labels.join(", ")
}

fn analyze(
    io: &mut Io<'_>,
    text: &str,
    interval: Option<u64>,
    budget: u64,
    max_colors: u32,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let eq = parse_equation(text)?;
    let config = AnalysisConfig {
        search_interval: interval,
        max_search_colors: max_colors,
        search: SearchOptions {
            node_budget: budget,
            ..SearchOptions::default()
        },
    };
    let report = DorReport::analyze(&eq, &config)?;
    let n = eq.num_vars();
    say!(io.out, "equation: {eq}");

    if let Some(subset) = &report.rado_subset {
        say!(
            io.out,
            "regular (Rado): coefficients of {} sum to zero, dor=∞",
            one_based(subset)
        );
    } else if report.sign_split.is_none() {
        say!(
            io.out,
            "no positive solutions (all coefficients share a sign), dor=0"
        );
    } else {
        say!(
            io.out,
            "not partition regular (Rado): no coefficient subset sums to zero"
        );
        match report.upper_source {
            UpperBoundSource::PadicColoring { p } => say!(
                io.out,
                "upper bound dor <= {}: p-adic distinctness with p={p}; the coloring O_{p}(x) mod {n} avoids every solution",
                n - 1
            ),
            _ => say!(
                io.out,
                "upper bound: finite but uncertified (no prime separates the coefficient orders mod {n})"
            ),
        }
        match &report.lower_source {
            LowerBoundSource::Divisibility => {
                let div = report
                    .divisibility
                    .as_ref()
                    .expect("divisibility source has a witness");
                let (a, b) = (div.split.pos_sum, div.split.neg_sum);
                let (small, large) = if a <= b { (a, b) } else { (b, a) };
                say!(
                    io.out,
                    "lower bound dor >= {}: divisibility of side sums, {small} divides {large} with quotient {}",
                    n - 1,
                    div.quotient
                );
            }
            LowerBoundSource::Family { family } => say!(
                io.out,
                "lower bound dor >= {}: explicit construction for the {} family",
                n - 1,
                family_label(family)
            ),
            LowerBoundSource::ExhaustiveSearch { colors } => {
                let cert = report
                    .search_evidence
                    .last()
                    .expect("search source has evidence");
                say!(
                    io.out,
                    "lower bound dor >= {colors}: every {colors}-coloring of [1, {}] has a monochromatic solution (exhaustive search, {} nodes)",
                    cert.interval,
                    cert.nodes_explored
                );
            }
            _ => say!(io.out, "lower bound dor >= 1: a positive solution exists"),
        }
        match report.exact() {
            Some(d) => say!(io.out, "dor={d}"),
            None => say!(
                io.out,
                "{} <= dor <= {}",
                report.dor_lower,
                report.dor_upper
            ),
        }
    }

    let budgets = Budgets {
        node_budget: interval.map(|_| budget),
        interval,
        parallel: false,
    };
    let payload = Payload::DorReport(Box::new(DorRecord { report, config }));
    emit(io, out, &payload, budgets)?;
    Ok(exit::SUCCESS)
}

fn family_label(family: &FamilySpec) -> String {
    match family {
        FamilySpec::AlternatingPow2 { n } => format!("alternating powers of two (n={n})"),
        FamilySpec::Geometric { base, n } => format!("geometric (base {base}, n={n})"),
        FamilySpec::Weighted { p, qs } => format!("weighted (p={p}, q={qs:?})"),
    }
}

fn show_table(coloring: &Coloring, interval: u64) -> String {
    let table = coloring
        .tabulate(interval)
        .expect("found colorings cover the interval");
    let labels: Vec<String> = table.iter().map(|c| (c + 1).to_string()).collect();
    labels.join(" ")
}

fn search_budgets(opts: &SearchOptions, interval: u64) -> Budgets {
    Budgets {
        node_budget: Some(opts.node_budget),
        interval: Some(interval),
        parallel: opts.parallel,
    }
}

/// Reports a search outcome and writes its certificate; returns the exit code.
fn report_outcome(
    io: &mut Io<'_>,
    eq: &Equation,
    interval: u64,
    outcome: SearchOutcome,
    opts: &SearchOptions,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    match outcome {
        SearchOutcome::Found(coloring) => {
            say!(
                io.out,
                "Found: avoiding coloring of [1, {interval}] (evidence, not a proof of non-regularity)"
            );
            say!(
                io.out,
                "colors of 1..{interval}: {}",
                show_table(&coloring, interval)
            );
            let cert = match verify_avoiding(eq, &coloring, interval)? {
                AvoidanceOutcome::Avoids(cert) => cert,
                AvoidanceOutcome::Solution(_) => unreachable!("search returns avoiding colorings"),
            };
            if let Some(path) = out {
                let mut coloring_path = path.as_os_str().to_owned();
                coloring_path.push(".coloring");
                let coloring_path = PathBuf::from(coloring_path);
                write_file(&coloring_path, &coloring.to_text(interval)?)?;
                say!(io.out, "coloring written to {}", coloring_path.display());
            }
            emit(
                io,
                out,
                &Payload::Avoidance(cert),
                search_budgets(opts, interval),
            )?;
            Ok(exit::SUCCESS)
        }
        SearchOutcome::NoneExists(cert) => {
            say!(
                io.out,
                "NoneExists: every {}-coloring of [1, {interval}] has a monochromatic solution ({} nodes)",
                cert.colors,
                cert.nodes_explored
            );
            emit(
                io,
                out,
                &Payload::ExhaustiveRegularity(cert),
                search_budgets(opts, interval),
            )?;
            Ok(exit::SUCCESS)
        }
        SearchOutcome::BudgetExhausted { nodes } => {
            say!(
                io.out,
                "BudgetExhausted: no answer for [1, {interval}] within {nodes} nodes"
            );
            Ok(exit::BUDGET_EXHAUSTED)
        }
    }
}

fn search_fixed(
    io: &mut Io<'_>,
    eq: &Equation,
    colors: u32,
    interval: u64,
    opts: &SearchOptions,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let outcome = search_avoiding_coloring(eq, colors, interval, opts)?;
    report_outcome(io, eq, interval, outcome, opts, out)
}

fn search_growing(
    io: &mut Io<'_>,
    eq: &Equation,
    colors: u32,
    max_interval: u64,
    opts: &SearchOptions,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let mut last_found = None;
    for interval in 1..=max_interval {
        match search_avoiding_coloring(eq, colors, interval, opts)? {
            SearchOutcome::Found(c) => last_found = Some((interval, c)),
            outcome => {
                if let Some((n, c)) = last_found.take() {
                    say!(io.out, "Found at N={n}: colors {}", show_table(&c, n));
                }
                return report_outcome(io, eq, interval, outcome, opts, out);
            }
        }
    }
    match last_found {
        Some((n, c)) => report_outcome(io, eq, n, SearchOutcome::Found(c), opts, out),
        None => Err(CliError::Usage("--max-interval must be at least 1".into())),
    }
}

fn verify(io: &mut Io<'_>, path: &Path) -> Result<i32, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file = CertificateFile::from_json(&text)?;
    match file.verify()? {
        crate::Verdict::Valid => {
            say!(io.out, "valid {:?} certificate", file.kind);
            Ok(exit::SUCCESS)
        }
        crate::Verdict::Invalid(reason) => {
            say!(io.out, "INVALID {:?} certificate: {reason}", file.kind);
            Ok(exit::VERIFICATION_FAILED)
        }
    }
}

fn construct(
    family: Option<&FamilySpec>,
    eq: &Equation,
    coloring: &Coloring,
    bound: u64,
) -> Result<ConstructedSolution, ConstructionError> {
    match family {
        Some(FamilySpec::AlternatingPow2 { n }) => {
            construct_solution_alternating(coloring, *n, bound)
        }
        Some(FamilySpec::Geometric { base, n }) => {
            construct_solution_geometric(coloring, *base, *n, bound)
        }
        _ => construct_solution_split(coloring, eq, bound),
    }
}

fn witness(
    io: &mut Io<'_>,
    family_args: &FamilyArgs,
    equation: Option<&str>,
    rule_text: &str,
    interval: u64,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let (family, eq) = match equation {
        Some(text) => (None, parse_equation(text)?),
        None => {
            let spec = family_args.spec()?;
            let eq = spec.generate()?.equation;
            (Some(spec), eq)
        }
    };
    let rule = ColoringRule::parse(rule_text)?;
    let coloring = rule.build(interval)?;
    say!(io.out, "equation: {eq}");

    match construct(family.as_ref(), &eq, &coloring, interval) {
        Ok(solution) => {
            let w = &solution.witness;
            say!(io.out, "witness: {:?} in color {}", w.values, w.color + 1);
            say!(io.out, "{}", describe_proof(&solution.proof));
            let record = WitnessRecord {
                witness: solution.witness,
                coloring,
                interval,
                proof: Some(solution.proof),
            };
            let budgets = Budgets {
                node_budget: None,
                interval: Some(interval),
                parallel: false,
            };
            emit(io, out, &Payload::SolutionWitness(record), budgets)?;
            Ok(exit::SUCCESS)
        }
        Err(ConstructionError::WitnessNotFound { interval }) => {
            say!(io.out, "WitnessNotFound: no witness inside [1, {interval}]");
            say!(
                io.out,
                "{}",
                retry_hint(family.as_ref(), &eq, &rule, interval)?
            );
            Ok(exit::BUDGET_EXHAUSTED)
        }
        Err(e) => {
            say!(io.err, "error: {e}");
            Ok(exit::USAGE)
        }
    }
}

fn retry_hint(
    family: Option<&FamilySpec>,
    eq: &Equation,
    rule: &ColoringRule,
    interval: u64,
) -> Result<String, CliError> {
    if !rule.is_extensible() {
        return Ok("the coloring file only covers this interval; supply a longer coloring".into());
    }
    let limit = interval.saturating_mul(RETRY_FACTOR);
    let mut bound = interval;
    while bound < limit {
        bound = bound.saturating_mul(2).min(limit);
        let coloring = rule.build(bound)?;
        if construct(family, eq, &coloring, bound).is_ok() {
            return Ok(format!("retry with --interval {bound}"));
        }
    }
    Ok(format!(
        "no witness inside [1, {limit}] either; retry with a larger --interval"
    ))
}

fn describe_proof(proof: &ConstructionProof) -> String {
    match proof {
        ConstructionProof::Geometric {
            witness: w,
            lambda1,
            lambda2,
        } => format!(
            "from progressions around b={} and {}^{}*b with difference d={} (half-length {}), q*d={} in the same color; lambda1={lambda1}, lambda2={lambda2}",
            w.b,
            w.base,
            w.j,
            w.d,
            w.half_length,
            w.q * w.d
        ),
        ConstructionProof::Split { witness: w, lambda, .. } => format!(
            "from the progression around {} with difference d={} (half-length {}) and {} in the same color; lambda={lambda}",
            w.ap.center,
            w.ap.diff,
            w.ap.half_length,
            w.q + w.ap.diff
        ),
    }
}

fn generate(io: &mut Io<'_>, family_args: &FamilyArgs) -> Result<i32, CliError> {
    let spec = family_args.spec()?;
    let generated = spec.generate()?;
    say!(io.out, "{}", generated.equation.to_list_string());
    if generated.claim == RegularityClaim::AtLeastNMinusOne {
        say!(
            io.err,
            "warning: the base is composite; the equation is (n-1)-regular, but the p-adic argument that it is not n-regular needs a prime base"
        );
    }
    Ok(exit::SUCCESS)
}
