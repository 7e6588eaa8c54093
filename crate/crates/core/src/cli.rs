//! Command-line front end. [`run`] parses `argv`, dispatches to the library and returns the
//! process exit status: 0 on success, 1 when a check fails, 2 on a usage or input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::construction::construction_search;
use crate::analysis::theorem::DEFAULT_MAX_I;
use crate::analysis::{
    find_theorem_params, inflection_summary, product_reliability, sample_csv, verify_s_properties,
    ProductSpec, SearchBudget, DEFAULT_SAMPLE_DIGITS,
};
use crate::complete::{spanning_counts_complete, CompleteCache, CACHE_ENV};
use crate::error::{Error, Result};
use crate::graphs::{brute_force_spanning_counts, monte_carlo_reliability, SimpleGraph, MAX_BRUTE_FORCE_EDGES};
use crate::poly::rational::to_scientific;
use crate::poly::{from_spanning_form, parse_rational, render_rational, Rational};
use crate::verify::{run_suite, Suite};

#[derive(Debug, Parser)]
#[command(name = "relpoly", version, about = "Exact reliability polynomials of complete graphs and their products")]
pub struct Cli {
    /// Cache file for complete-graph polynomials, loaded before and saved after the command.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reliability polynomial of K_n.
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Basis::Power)]
        basis: Basis,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        out: Format,
    },
    /// Expanded reliability polynomial of a product spec such as `K3^2*K4`.
    Product {
        #[arg(long)]
        spec: ProductSpec,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        out: Format,
    },
    /// Inflection points of the product on (0, 1), with isolating intervals.
    Inflect {
        #[arg(long)]
        spec: ProductSpec,
        #[arg(long)]
        json: bool,
    },
    /// Table of g, g' or g'' on an even grid of [0, 1].
    Sample {
        #[arg(long)]
        spec: ProductSpec,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        deriv: u8,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, value_enum, default_value_t = SampleFormat::Csv)]
        out: SampleFormat,
        /// Significant digits per value.
        #[arg(long, default_value_t = DEFAULT_SAMPLE_DIGITS)]
        digits: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: SuiteChoice,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Endpoint and flatness checks for a building block `s` outside a window `(a, b)`.
    Sprops(SpropsArgs),
    /// Search for a product with at least `target` inflection points.
    Search {
        #[arg(long)]
        target: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Find (N, k, i) making K_(ik)^(N^i) satisfy the five sharpness conditions.
    TheoremParams {
        #[arg(long, value_parser = parse_exact)]
        a: Rational,
        #[arg(long, value_parser = parse_exact)]
        b: Rational,
        #[arg(long, value_parser = parse_exact)]
        eps: Rational,
        #[arg(long, default_value_t = DEFAULT_MAX_I)]
        max_i: u64,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate of a graph's reliability.
    Mc {
        /// JSON `{"vertices": v, "edges": [[u, w], ...]}` or one `u w` pair per line.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_exact)]
        q: Rational,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Inspect or clear a cache file.
    Cache {
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Debug, Args)]
pub struct SpropsArgs {
    #[arg(long)]
    spec: ProductSpec,
    #[arg(long, value_parser = parse_exact)]
    a: Rational,
    #[arg(long, value_parser = parse_exact)]
    b: Rational,
    #[arg(long, value_parser = parse_exact)]
    eps: Rational,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    transitions: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    max_distinct_degree: Option<usize>,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        let d = SearchBudget::default();
        SearchBudget {
            max_n: self.max_n.unwrap_or(d.max_n),
            transitions: self.transitions.unwrap_or(d.transitions),
            grid: self.grid.unwrap_or(d.grid),
            max_distinct_degree: self.max_distinct_degree.unwrap_or(d.max_distinct_degree),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Power,
    Spanning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SampleFormat {
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Show,
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteChoice {
    One(Suite),
    All,
}

fn parse_suite(s: &str) -> std::result::Result<SuiteChoice, String> {
    if s == "all" {
        return Ok(SuiteChoice::All);
    }
    s.parse().map(SuiteChoice::One).map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
        format!("expected one of {}, all", names.join(", "))
    })
}

fn parse_exact(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Parses `argv` (program name first) and runs the command against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Inconsistent(_) => 1,
                _ => 2,
            }
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn open_cache(path: Option<&Path>) -> Result<CompleteCache> {
    match path {
        Some(p) => CompleteCache::load(p),
        None => Ok(CompleteCache::new()),
    }
}

/// Runs a parsed command; `Ok(false)` means a check ran and failed.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    if let Command::Cache { path, action } = &cli.command {
        let path = path.as_deref().or(cli.cache.as_deref()).ok_or_else(|| {
            Error::Precondition(format!("cache needs --path or the {CACHE_ENV} environment variable"))
        })?;
        return cache_command(path, *action, out);
    }
    let cache = open_cache(cli.cache.as_deref())?;
    let before = cache.len();
    let result = dispatch(&cli.command, &cache, out)?;
    if let Some(p) = cli.cache.as_deref() {
        if cache.len() != before {
            cache.save(p)?;
        }
    }
    Ok(result)
}

fn cache_command(path: &Path, action: CacheAction, out: &mut dyn Write) -> Result<bool> {
    match action {
        CacheAction::Show => {
            let cache = CompleteCache::load(path)?;
            let mut text = format!("{}: {} entr{}\n", path.display(), cache.len(), if cache.len() == 1 { "y" } else { "ies" });
            for (n, p) in cache.entries() {
                text.push_str(&format!("  K{n}: degree {}\n", p.degree().unwrap_or(0)));
            }
            emit(out, &text)?;
        }
        CacheAction::Clear => {
            match std::fs::remove_file(path) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(source) => return Err(Error::Io { path: path.to_path_buf(), source }),
            }
            emit(out, &format!("cleared {}\n", path.display()))?;
        }
    }
    Ok(true)
}

fn dispatch(command: &Command, cache: &CompleteCache, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Complete { n, basis, out: format } => {
            let text = match (basis, format) {
                (Basis::Power, Format::Text) => cache.reliability(*n)?.to_text() + "\n",
                (Basis::Power, Format::Json) => json(&*cache.reliability(*n)?)?,
                (Basis::Spanning, f) => {
                    let s = spanning_counts_complete(*n, cache)?;
                    if *f == Format::Json {
                        json(&s)?
                    } else {
                        let counts: Vec<String> = s.counts().iter().map(render_rational).collect();
                        format!("m = {}, N_0..N_m = [{}]\n", s.m(), counts.join(", "))
                    }
                }
            };
            emit(out, &text)?;
            Ok(true)
        }
        Command::Product { spec, out: format } => {
            let p = product_reliability(spec, cache)?;
            emit(out, &if *format == Format::Json { json(&p)? } else { p.to_text() + "\n" })?;
            Ok(true)
        }
        Command::Inflect { spec, json: as_json } => {
            let s = inflection_summary(spec, cache)?;
            emit(out, &if *as_json { json(&s)? } else { s.to_text() })?;
            Ok(true)
        }
        Command::Sample { spec, deriv, points, out: SampleFormat::Csv, digits } => {
            emit(out, &sample_csv(spec, *deriv, *points, *digits, cache)?)?;
            Ok(true)
        }
        Command::Verify { suite, n_max, json: as_json } => {
            let suites: Vec<Suite> = match suite {
                SuiteChoice::One(s) => vec![*s],
                SuiteChoice::All => Suite::ALL.to_vec(),
            };
            let mut pass = true;
            let mut reports = Vec::new();
            for s in suites {
                let r = run_suite(s, *n_max, cache)?;
                pass &= r.passed();
                if !*as_json {
                    emit(out, &r.to_text())?;
                }
                reports.push(r);
            }
            if *as_json {
                emit(out, &json(&reports)?)?;
            }
            Ok(pass)
        }
        Command::Sprops(args) => {
            let r = verify_s_properties(&args.spec, (&args.a, &args.b), &args.eps, args.grid, cache)?;
            emit(out, &if args.json { json(&r)? } else { r.to_text() })?;
            Ok(r.all_pass())
        }
        Command::Search { target, budget, json: as_json } => {
            let state = construction_search(*target, cache, &budget.budget())?;
            emit(out, &if *as_json { json(&state)? } else { state.to_text() })?;
            Ok(state.reached)
        }
        Command::TheoremParams { a, b, eps, max_i, json: as_json } => {
            let params = find_theorem_params(a, b, eps, *max_i)?;
            emit(out, &if *as_json { json(&params)? } else { params.to_text() })?;
            Ok(params.found && params.separation_verified)
        }
        Command::Mc { graph, q, trials, seed, json: as_json } => {
            let text = std::fs::read_to_string(graph).map_err(|source| Error::Io { path: graph.clone(), source })?;
            let g = SimpleGraph::parse(&text)?;
            let est = monte_carlo_reliability(&g, q, *trials, *seed)?;
            let exact = if g.edge_count() <= MAX_BRUTE_FORCE_EDGES {
                Some(from_spanning_form(&brute_force_spanning_counts(&g)?).eval(q))
            } else {
                None
            };
            let report = McReport {
                within_4_se: exact.as_ref().map(|e| est.within(e, 4)),
                exact: exact.as_ref().map(|e| to_scientific(e, 20)),
                estimate: est,
            };
            if *as_json {
                emit(out, &json(&report)?)?;
            } else {
                let e = &report.estimate;
                let mut text = format!(
                    "estimate {} ({} / {} trials, seed {}, {})\n  standard error {}\n",
                    to_scientific(&e.estimate, 12),
                    e.successes,
                    e.trials,
                    e.seed,
                    e.generator,
                    e.std_error
                );
                if let (Some(x), Some(w)) = (&report.exact, report.within_4_se) {
                    text.push_str(&format!("  exact {x}, within 4 standard errors: {}\n", if w { "yes" } else { "no" }));
                }
                emit(out, &text)?;
            }
            Ok(true)
        }
        Command::Cache { .. } => unreachable!("handled before the cache is opened"),
    }
}

#[derive(Serialize)]
struct McReport {
    estimate: crate::graphs::MCEstimate,
    exact: Option<String>,
    within_4_se: Option<bool>,
}
