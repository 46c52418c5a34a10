use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tbb::csvio::{self, CsvError};
use tbb::gradcheck::check_gradient;
use tbb::{run_suite, solve};
use tbb_core::bench::{default_tau_grid, perf_profile, Metric};
use tbb_core::linesearch::LineSearchConfig;
use tbb_core::problems::{self, by_name};
use tbb_core::solver::{SolverConfig, Status, TolMode};
use tbb_core::stepsize::SafeguardConfig;
use tbb_core::{Problem, RateReport, StepSizeRule};

const EXIT_NOT_CONVERGED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "tbb", version, about = "Two- and three-point spectral gradient solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize one problem and print `status iters f_final gnorm time_s`
    Solve {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "tbb1p")]
        rule: StepSizeRule,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the iteration trace as CSV
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Append rate diagnostics to the trace (needs a known minimizer)
        #[arg(long, requires = "trace")]
        diagnose: bool,
    },
    /// Run every problem with every rule and write a records CSV
    Bench {
        /// Comma-separated names; defaults to the whole collection
        #[arg(long, value_delimiter = ',')]
        problems: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Comma-separated rules; defaults to all six
        #[arg(long, value_delimiter = ',')]
        rules: Vec<StepSizeRule>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute a performance profile from a records CSV
    Profile {
        #[arg(long = "in")]
        input: PathBuf,
        /// iters, f_evals, g_evals or time
        #[arg(long, default_value = "iters")]
        metric: Metric,
        #[arg(long)]
        out: PathBuf,
        /// Also write the per-problem ratio matrix
        #[arg(long)]
        ratios: Option<PathBuf>,
    },
    /// Compare the analytic gradient with central differences
    CheckGrad {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        n: usize,
        /// Random points besides x0
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the collection as `name,dim_constraint`
    ListProblems,
}

#[derive(Clone, Copy, ValueEnum)]
enum TolModeArg {
    Rel,
    Abs,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "rel")]
    tol_mode: TolModeArg,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Relaxation factor θ; 0 gives the plain generalized Armijo test
    #[arg(long, default_value_t = 1.0)]
    relax: f64,
    #[arg(long, default_value_t = 0.32)]
    mu1: f64,
    #[arg(long, default_value_t = 0.32)]
    mu2: f64,
    #[arg(long, default_value_t = 0.76)]
    omega: f64,
    #[arg(long, default_value_t = 60)]
    max_backtracks: u32,
    #[arg(long, default_value_t = 0.006)]
    alpha_min: f64,
    #[arg(long, default_value_t = 100.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 0.52)]
    sigma1: f64,
    #[arg(long, default_value_t = 1.2)]
    sigma2: f64,
    /// Initial step ᾱ0
    #[arg(long, default_value_t = 1.0)]
    alpha0: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Wall-clock budget in seconds
    #[arg(long, default_value_t = 600.0)]
    max_time: f64,
}

impl SolverArgs {
    fn config(&self, rule: StepSizeRule) -> SolverConfig {
        let ls = LineSearchConfig::default();
        SolverConfig {
            rule,
            safeguard: SafeguardConfig {
                alpha_min: self.alpha_min,
                alpha_max: self.alpha_max,
                sigma1: self.sigma1,
                sigma2: self.sigma2,
            },
            linesearch: LineSearchConfig {
                mu1: self.mu1,
                mu2: self.mu2,
                omega: self.omega,
                relax_factor: self.relax,
                max_backtracks: self.max_backtracks,
                gamma2: self.omega,
                ..ls
            },
            tol: self.tol,
            tol_mode: match self.tol_mode {
                TolModeArg::Rel => TolMode::Relative,
                TolModeArg::Abs => TolMode::Absolute,
            },
            max_iters: self.max_iters,
            max_time_seconds: self.max_time,
            alpha0: self.alpha0,
            keep_iterates: false,
        }
    }
}

/// An error message plus the exit code it maps to.
struct Failure(u8, String);

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

impl From<CsvError> for Failure {
    fn from(e: CsvError) -> Self {
        Failure(EXIT_IO, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Solve { problem, n, rule, solver, trace, diagnose } => {
            let p = by_name(&problem, n).map_err(Failure::usage)?;
            let cfg = SolverConfig { keep_iterates: diagnose, ..solver.config(rule) };
            let r = solve(&p, &cfg).map_err(Failure::usage)?;
            println!(
                "{} {} {:e} {:e} {:.6}",
                r.status,
                r.iters(),
                r.f_final,
                r.gnorm_final,
                r.wall_time_seconds
            );
            if let Some(path) = &trace {
                csvio::write_trace(path, &r.trace)?;
                if diagnose {
                    match RateReport::from_run(&p, &r) {
                        Ok(report) => csvio::append_diagnostics(path, &report)?,
                        Err(e) => eprintln!("warning: no diagnostics: {e}"),
                    }
                }
            }
            Ok(if r.status == Status::Converged { 0 } else { EXIT_NOT_CONVERGED })
        }
        Command::Bench { problems: names, n, rules, solver, out } => {
            let set = bench_problems(&names, n)?;
            let rules = if rules.is_empty() { StepSizeRule::ALL.to_vec() } else { rules };
            let base = solver.config(StepSizeRule::Tbb1Prime);
            let records = run_suite(&set, &rules, &base).map_err(Failure::usage)?;
            csvio::write_records(&out, &records)?;
            Ok(0)
        }
        Command::Profile { input, metric, out, ratios } => {
            let records = csvio::read_records(&input)?;
            let profile = perf_profile(&records, metric, &default_tau_grid())
                .map_err(|e| Failure(EXIT_IO, format!("{}: {e}", input.display())))?;
            csvio::write_profile(&out, &profile)?;
            if let Some(path) = &ratios {
                csvio::write_ratios(path, &profile)?;
            }
            Ok(0)
        }
        Command::CheckGrad { problem, n, points, seed } => {
            let p = by_name(&problem, n).map_err(Failure::usage)?;
            let check = check_gradient(&p, points, seed).map_err(Failure::usage)?;
            println!("{} {} max_rel_err {:e}", p.name(), p.dim(), check.max_rel_err);
            Ok(if check.passed() { 0 } else { EXIT_NOT_CONVERGED })
        }
        Command::ListProblems => {
            let mut out = io::stdout().lock();
            let listed = writeln!(out, "name,dim_constraint").and_then(|_| {
                problems::catalog()
                    .iter()
                    .try_for_each(|e| writeln!(out, "{},{}", e.name, e.rule))
            });
            match listed {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure(EXIT_IO, e.to_string())),
                _ => Ok(0),
            }
        }
    }
}

fn bench_problems(names: &[String], n: usize) -> Result<Vec<Problem>, Failure> {
    if names.is_empty() {
        for entry in problems::catalog().iter().filter(|e| !e.rule.admits(n)) {
            eprintln!("skipping {}: n = {n} is not {}", entry.name, entry.rule);
        }
        return problems::standard_collection(n).map_err(Failure::usage);
    }
    names.iter().map(|name| by_name(name, n).map_err(Failure::usage)).collect()
}
