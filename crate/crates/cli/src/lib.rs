//! `ksat`: generate, solve and analyze k-SAT instances and run scripted experiments.
//!
//! Exit codes follow the SAT-competition convention: 10 when a satisfying assignment is
//! printed, 20 when the exhaustive oracle proves unsatisfiability, 0 for any other
//! completed run, 1 for usage and I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ksat_core::analysis::{expected_good_count, good_variables};
use ksat_core::distributions::{
    sample_p, sample_r, sample_r_plus_with_fallback, DEFAULT_MAX_ATTEMPTS,
};
use ksat_core::harness::{
    dimacs_read, dimacs_write, model_line, run_experiment_csv, DimacsInstance, ExperimentConfig,
};
use ksat_core::oracle::{brute_force_sat, SatAnswer};
use ksat_core::solvers::{
    ppz_repeat, solve_random_ksat, uniform_sampling_solver, BudgetPolicy, SolveOutcome,
};
use ksat_core::{eval_formula, Assignment, Error, RandomStream};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_DONE: i32 = 0;
pub const EXIT_ERROR: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "ksat", version, about = "Random and planted k-SAT laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a formula and write it as DIMACS.
    Gen(GenArgs),
    /// Solve a DIMACS file and print a certificate.
    Solve(SolveArgs),
    /// Report the good variables of a file carrying a planted assignment.
    Analyze(AnalyzeArgs),
    /// Run an experiment config and write CSV.
    Exp(ExpArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dist {
    /// R(n,k,m): uniform clauses.
    Random,
    /// P(n,k,m): clauses satisfied by a hidden uniform assignment.
    Planted,
    /// R⁺(n,k,m): uniform conditioned on satisfiable (n ≤ 30).
    Rplus,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    dist: Dist,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rejection draws before `rplus` falls back to planted reweighting.
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(id = "solver", multiple = false)]
struct SolverChoice {
    /// Repeated Simple-PPZ.
    #[arg(long, group = "solver")]
    ppz: bool,
    /// Uniform assignment sampling.
    #[arg(long, group = "solver")]
    sample: bool,
    /// Exhaustive search (n ≤ 30).
    #[arg(long, group = "solver")]
    oracle: bool,
    /// Density-based dispatch with the trial budget from the policy flags (default).
    #[arg(long, group = "solver")]
    auto: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    file: PathBuf,
    #[command(flatten)]
    solver: SolverChoice,
    /// Trials for --ppz and --sample.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    poly_factor: Option<f64>,
    /// Largest trial budget --auto may use.
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    sampling_slack: Option<f64>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    file: PathBuf,
}

#[derive(Args, Debug)]
struct ExpArgs {
    config: PathBuf,
    /// Overrides the config's output path; `-` for stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct CliError(String);

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<i32, CliError>;

/// Parses `argv` (program name first) and runs the command with the process's stdio.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_DONE
            };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a, out),
        Command::Solve(a) => solve(a, out),
        Command::Analyze(a) => analyze(a, out),
        Command::Exp(a) => exp(a, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(err, "ksat: {msg}");
            EXIT_ERROR
        }
    }
}

fn read_instance(path: &Path) -> Result<(String, DimacsInstance), CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let inst = dimacs_read(&text, None)?;
    Ok((text, inst))
}

fn write_target(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).map_err(|e| CliError(format!("{}: {e}", p.display())))
        }
        _ => Ok(out.write_all(text.as_bytes())?),
    }
}

fn gen(a: GenArgs, out: &mut dyn Write) -> CliResult {
    let mut rng = RandomStream::new(a.seed, 0).rng();
    let text = match a.dist {
        Dist::Random => dimacs_write(&sample_r(a.n, a.k, a.m, &mut rng)?, None),
        Dist::Planted => {
            let inst = sample_p(a.n, a.k, a.m, &mut rng)?;
            dimacs_write(&inst.formula, Some(&inst.sigma))
        }
        Dist::Rplus => dimacs_write(
            &sample_r_plus_with_fallback(a.n, a.k, a.m, &mut rng, a.max_attempts)?,
            None,
        ),
    };
    write_target(a.out.as_deref(), &text, out)?;
    Ok(EXIT_DONE)
}

fn policy(a: &SolveArgs) -> BudgetPolicy {
    let d = BudgetPolicy::default();
    BudgetPolicy {
        gamma: a.gamma.unwrap_or(d.gamma),
        poly_factor: a.poly_factor.unwrap_or(d.poly_factor),
        cap: a.cap.unwrap_or(d.cap),
        sampling_slack: a.sampling_slack.unwrap_or(d.sampling_slack),
    }
}

/// Prints a certificate after re-parsing the input text and re-checking the model.
fn emit_model(text: &str, model: &Assignment, out: &mut dyn Write) -> CliResult {
    let fresh = dimacs_read(text, None)?;
    if !eval_formula(&fresh.formula, model)? {
        return Err(CliError(
            "internal error: solver returned a non-model".into(),
        ));
    }
    writeln!(out, "s SATISFIABLE")?;
    writeln!(out, "{}", model_line(model))?;
    Ok(EXIT_SAT)
}

fn emit_outcome(text: &str, outcome: &SolveOutcome, out: &mut dyn Write) -> CliResult {
    writeln!(out, "c trials_used {}", outcome.trials_used)?;
    match outcome.result.assignment() {
        Some(model) => emit_model(text, model, out),
        None => {
            writeln!(out, "s UNKNOWN")?;
            Ok(EXIT_DONE)
        }
    }
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> CliResult {
    let (text, inst) = read_instance(&a.file)?;
    let f = &inst.formula;
    let stream = RandomStream::new(a.seed, 0);
    let s = &a.solver;
    if s.oracle {
        return match brute_force_sat(f)? {
            SatAnswer::Satisfiable(model) => emit_model(&text, &model, out),
            SatAnswer::Unsatisfiable => {
                writeln!(out, "s UNSATISFIABLE")?;
                Ok(EXIT_UNSAT)
            }
        };
    }
    if s.ppz {
        return emit_outcome(&text, &ppz_repeat(f, a.trials, &stream)?, out);
    }
    if s.sample {
        return emit_outcome(&text, &uniform_sampling_solver(f, a.trials, &stream)?, out);
    }
    let d = solve_random_ksat(f, &policy(&a), &stream)?;
    writeln!(out, "c strategy {}", d.strategy.name())?;
    writeln!(out, "c budget {}", d.budget.trials)?;
    emit_outcome(&text, &d.outcome, out)
}

fn analyze(a: AnalyzeArgs, out: &mut dyn Write) -> CliResult {
    let (_, inst) = read_instance(&a.file)?;
    let sigma = inst
        .planted
        .ok_or_else(|| CliError(format!("{}: no \"c planted\" line", a.file.display())))?;
    let f = &inst.formula;
    let report = good_variables(f, &sigma);
    let (n, m) = (f.num_vars(), f.num_clauses());
    writeln!(out, "n {n}")?;
    writeln!(out, "m {m}")?;
    match f.width() {
        Some(k) => writeln!(out, "k {k}")?,
        None => writeln!(out, "k mixed")?,
    }
    writeln!(out, "satisfied {}", eval_formula(f, &sigma)?)?;
    writeln!(out, "good_count {}", report.count())?;
    writeln!(out, "good_fraction {}", report.fraction())?;
    if let Some(k) = f.width().filter(|&k| k >= 1 && k <= n) {
        writeln!(out, "expected_good_count {}", expected_good_count(n, k, m)?)?;
    }
    let good: Vec<String> = report.good_set().iter().map(usize::to_string).collect();
    writeln!(out, "good {}", good.join(" "))?;
    for (v, c) in report.witnesses() {
        writeln!(out, "witness {v} {c}")?;
    }
    Ok(EXIT_DONE)
}

fn exp(a: ExpArgs, out: &mut dyn Write) -> CliResult {
    let config = ExperimentConfig::load(&a.config)
        .map_err(|e| CliError(format!("{}: {e}", a.config.display())))?;
    let target = a.out.clone().or_else(|| config.output.clone());
    let mut buf = Vec::new();
    run_experiment_csv(&config, &mut buf)?;
    write_target(
        target.as_deref(),
        std::str::from_utf8(&buf).expect("csv is utf-8"),
        out,
    )?;
    Ok(EXIT_DONE)
}
