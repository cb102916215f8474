use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use wronski_core::criterion::{check_automorphism, CheckOptions, CriterionReport, Verdict};
use wronski_core::groebner::{invert_map, DEFAULT_STEP_BUDGET};
use wronski_core::mapzoo::{druzkowski_from_matrix, format_map, parse_druzkowski_matrix, parse_map_labeled};
use wronski_core::{Error, Polynomial, PolynomialMap};

use crate::report::ReportDocument;

pub const EXIT_AUTOMORPHISM: i32 = 0;
pub const EXIT_NOT_AUTOMORPHISM: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INPUT: i32 = 64;
/// An internal consistency check failed.
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "wronski", version, about = "Decide whether a polynomial map is an automorphism")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full criterion and report a verdict.
    Check {
        map: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Compute the wronskian entries without membership tests.
    Wronskians {
        map: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Compute the polynomial inverse of a map.
    Invert {
        map: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Generate a Drużkowski map file from a coefficient matrix file.
    Druzkowski {
        matrix: PathBuf,
        /// Output path; stdout if omitted.
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RunFlags {
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "WIDTH")]
    pub parallel: Option<usize>,
    /// Evaluate all n^3 entries instead of the reduced set.
    #[arg(long)]
    pub no_reduction: bool,
    /// Test every entry even after a membership failure.
    #[arg(long)]
    pub no_early_exit: bool,
    /// Reduction-step budget for the Gröbner phase.
    #[arg(long, value_name = "STEPS", default_value_t = DEFAULT_STEP_BUDGET)]
    pub budget: u64,
    /// Wall-clock limit for the Gröbner phase.
    #[arg(long, value_name = "SECS")]
    pub timeout: Option<f64>,
    /// Include per-phase timings in the JSON report.
    #[arg(long)]
    pub timings: bool,
    /// Suppress the per-phase log on stderr.
    #[arg(short, long)]
    pub quiet: bool,
}

impl RunFlags {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            early_exit: !self.no_early_exit,
            parallelism: self.parallel,
            no_reduction: self.no_reduction,
            budget_steps: self.budget,
            timeout: self.timeout.map(Duration::from_secs_f64),
            ..CheckOptions::default()
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Check { map, flags } => cmd_check(&map, &flags),
        Command::Wronskians { map, flags } => cmd_wronskians(&map, &flags),
        Command::Invert { map, flags } => cmd_invert(&map, &flags),
        Command::Druzkowski { matrix, out } => cmd_druzkowski(&matrix, out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn from_core(context: &Path, e: Error) -> Self {
        let code = match &e {
            Error::NotConstantJacobian(_) | Error::SingularJacobian => EXIT_PRECONDITION,
            e if e.is_budget() => EXIT_BUDGET,
            Error::Parse { .. }
            | Error::DuplicateComponent(_)
            | Error::MissingComponent(_)
            | Error::InvalidMatrix(_)
            | Error::NotSquare { .. } => EXIT_INPUT,
            _ => EXIT_INTERNAL,
        };
        Failure { code, message: format!("{}: {e}", context.display()) }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn load_map(path: &Path) -> Result<PolynomialMap, Failure> {
    let text = read(path)?;
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_map_labeled(&text, &label).map_err(|e| Failure::from_core(path, e))
}

fn log_phases(report: &CriterionReport, flags: &RunFlags) {
    if flags.quiet {
        return;
    }
    for (name, d) in report.timings.phases() {
        if !d.is_zero() {
            eprintln!("[{name}] {:.1} ms", d.as_secs_f64() * 1000.0);
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn f_text(p: &Polynomial) -> String {
    p.display_with("F").to_string()
}

fn human_table(report: &CriterionReport, with_membership: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "map: {} (n = {})", report.map_label, report.n);
    let _ = writeln!(out, "det J_F = {}", report.jacobian_det);
    if let Some(v) = report.verdict {
        let _ = writeln!(out, "verdict: {}", v.as_str());
    }
    let _ = writeln!(
        out,
        "entries: {} computed, {} by symmetry, {} by trace",
        report.computed_count, report.by_symmetry_count, report.by_trace_count
    );
    for e in &report.entries {
        let idx = e.index.to_string();
        let prov = e.index.provenance.as_str();
        let shown = match (&e.membership, with_membership) {
            (Some(m), true) => match &m.f_expression {
                Some(f) => format!("= {}", f_text(f)),
                None => format!("NOT IN Q[F]: {}", e.value),
            },
            (None, true) => format!("(undecided) {}", e.value),
            (_, false) => format!("= {}", e.value),
        };
        let _ = writeln!(out, "  {idx:<10} {prov:<12} {shown}");
    }
    if let Some(idx) = report.first_failure {
        let _ = writeln!(out, "first failing entry: {idx}");
    }
    if let Some(g) = &report.inverse {
        let _ = writeln!(out, "inverse:");
        for (i, gi) in g.iter().enumerate() {
            let _ = writeln!(out, "  G{} = {}", i + 1, gi.display_with("y"));
        }
    }
    out
}

fn cmd_check(path: &Path, flags: &RunFlags) -> Result<i32, Failure> {
    let map = load_map(path)?;
    let report = check_automorphism(&map, &flags.options()).map_err(|e| Failure::from_core(path, e))?;
    log_phases(&report, flags);
    if flags.json {
        print_json(&ReportDocument::from_report(&report, flags.timings));
    } else {
        print!("{}", human_table(&report, true));
    }
    let code = match report.verdict.expect("membership ran") {
        Verdict::Automorphism => EXIT_AUTOMORPHISM,
        Verdict::NotAutomorphism => {
            if let Some(idx) = report.first_failure {
                eprintln!("witness: {idx} is not a polynomial in F1..F{}", report.n);
            }
            EXIT_NOT_AUTOMORPHISM
        }
        Verdict::InconclusiveBudget => {
            eprintln!("budget exhausted before a verdict was reached");
            EXIT_BUDGET
        }
    };
    Ok(code)
}

fn cmd_wronskians(path: &Path, flags: &RunFlags) -> Result<i32, Failure> {
    let map = load_map(path)?;
    let options = CheckOptions { skip_membership: true, compute_inverse: false, ..flags.options() };
    let report = check_automorphism(&map, &options).map_err(|e| Failure::from_core(path, e))?;
    log_phases(&report, flags);
    let (symmetry, trace) = consistency_violations(&report);
    if !flags.quiet {
        eprintln!(
            "symmetry a^k_ij = a^i_kj: {}; trace sum_i a^k_ii = 0: {}",
            if symmetry.is_empty() { "ok" } else { "VIOLATED" },
            if trace.is_empty() { "ok" } else { "VIOLATED" },
        );
    }
    if flags.json {
        print_json(&ReportDocument::from_report(&report, flags.timings));
    } else {
        print!("{}", human_table(&report, false));
    }
    if !symmetry.is_empty() || !trace.is_empty() {
        eprintln!("error: inconsistent wronskian table: symmetry {symmetry:?}, trace {trace:?}");
        return Ok(EXIT_INTERNAL);
    }
    Ok(EXIT_AUTOMORPHISM)
}

/// Mirror pairs `(k, i, j)` with `a^k_ij != a^i_kj`, and the `k` whose trace
/// is nonzero (1-based).
pub fn consistency_violations(report: &CriterionReport) -> (Vec<(usize, usize, usize)>, Vec<usize>) {
    let n = report.n;
    let mut symmetry = Vec::new();
    for k in 0..n {
        for i in k + 1..n {
            for j in 0..n {
                if report.entry(k, i, j).value != report.entry(i, k, j).value {
                    symmetry.push((k + 1, i + 1, j + 1));
                }
            }
        }
    }
    let trace = (0..n)
        .filter(|&k| {
            let sum = (0..n).fold(Polynomial::zero(n), |acc, i| acc + &report.entry(k, i, i).value);
            !sum.is_zero()
        })
        .map(|k| k + 1)
        .collect();
    (symmetry, trace)
}

#[derive(Serialize)]
struct InverseDocument {
    schema_version: &'static str,
    map_label: String,
    n: usize,
    inverse: Option<Vec<String>>,
    verified: bool,
}

fn cmd_invert(path: &Path, flags: &RunFlags) -> Result<i32, Failure> {
    let map = load_map(path)?;
    let options = flags.options();
    let budget = options.budget();
    let inverse = options
        .install(|| invert_map(&map, None, &budget))
        .map_err(|e| Failure::from_core(path, e))?;
    let verified = match &inverse {
        Some(g) => verify_inverse(&map, g).map_err(|e| Failure::from_core(path, e))?,
        None => false,
    };
    if !flags.quiet {
        eprintln!("[groebner] {} reduction steps", budget.steps_used());
    }
    if flags.json {
        print_json(&InverseDocument {
            schema_version: crate::report::SCHEMA_VERSION,
            map_label: map.label().to_string(),
            n: map.n(),
            inverse: inverse.as_ref().map(|g| g.iter().map(|p| p.display_with("y").to_string()).collect()),
            verified,
        });
    } else if let Some(g) = &inverse {
        for (i, gi) in g.iter().enumerate() {
            println!("G{} = {}", i + 1, gi.display_with("y"));
        }
    }
    match inverse {
        None => {
            eprintln!("not invertible: some x_i is not a polynomial in F1..F{}", map.n());
            Ok(EXIT_NOT_AUTOMORPHISM)
        }
        Some(_) if !verified => {
            eprintln!("error: G(F) != x; the computed inverse failed verification");
            Ok(EXIT_INTERNAL)
        }
        Some(_) => Ok(EXIT_AUTOMORPHISM),
    }
}

/// `G_i(F_1, ..., F_n) = x_i` for every `i`.
pub fn verify_inverse(map: &PolynomialMap, inverse: &[Polynomial]) -> wronski_core::Result<bool> {
    for (i, g) in inverse.iter().enumerate() {
        if g.substitute(map.components())? != Polynomial::var(map.n(), i) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cmd_druzkowski(matrix: &Path, out: Option<&Path>) -> Result<i32, Failure> {
    let spec = parse_druzkowski_matrix(&read(matrix)?).map_err(|e| Failure::from_core(matrix, e))?;
    let d = druzkowski_from_matrix(&spec);
    let text = format_map(&d.map);
    match out {
        Some(p) => std::fs::write(p, &text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    eprintln!("rank(A) = {}", d.rank);
    eprintln!("A^2 = 0: {}", if d.squares_to_zero { "yes" } else { "no" });
    let det = d.map.jacobian().determinant().map_err(|e| Failure::from_core(matrix, e))?;
    match det.constant_value() {
        Some(c) => eprintln!("det J_F = {c}"),
        None => eprintln!("det J_F is not constant: {det}"),
    }
    Ok(0)
}
