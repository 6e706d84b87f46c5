use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bipolar_fre::resolution::DEFAULT_MAX_ADMISSIBLE;
use bipolar_fre::EPS;
use bipolar_fre_cli::{parse_problem, report, CliError, Outcome, PipelineOptions};
use clap::{Args, Parser, Subcommand};

/// Solve bipolar fuzzy relational equations `A⁺ φ x ∨ A⁻ φ (1 − x) = b`.
///
/// Reports are JSON. Exit status: 0 success, 1 error, 2 infeasible.
#[derive(Parser)]
#[command(name = "bfre", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the feasible region as a union of boxes.
    Feasible(Target),
    /// Apply the reduction rules and report the reduced problem.
    Simplify {
        #[command(flatten)]
        target: Target,
        /// Include the log of every rule firing.
        #[arg(long)]
        explain: bool,
    },
    /// Minimize the problem's objective over the feasible region.
    Solve(Target),
    /// Cross-check the region and optimum against a brute-force grid.
    Verify {
        #[command(flatten)]
        target: Target,
        /// Spacing of the regular grid points added to the breakpoints.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Seed for sampling grids too large to sweep.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a t-norm at one point.
    TnormEval {
        /// Catalog name, e.g. `product` or `dubois_prade`.
        name: String,
        x: f64,
        y: f64,
        #[arg(long, allow_hyphen_values = true)]
        param: Option<f64>,
        /// Also solve `φ(x, t) = y` for `t`.
        #[arg(long)]
        solve: bool,
    },
}

#[derive(Args)]
struct Target {
    /// Problem file (JSON).
    problem: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Tolerance for interval comparisons.
    #[arg(long, default_value_t = EPS)]
    tol: f64,
    /// Maximum number of admissible functions to enumerate.
    #[arg(long, default_value_t = DEFAULT_MAX_ADMISSIBLE)]
    max_e: u64,
    /// Skip the reduction rules.
    #[arg(long)]
    no_simplify: bool,
}

impl Target {
    fn options(&self) -> PipelineOptions {
        PipelineOptions { tol: self.tol, max_e: self.max_e, simplify: !self.no_simplify }
    }
}

fn write_report(outcome: &Outcome, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, &outcome.report).map_err(|source| CliError::Io { path: path.to_owned(), source }),
        None => {
            print!("{}", outcome.report);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let (outcome, output, consistent) = match cli.command {
        Command::Feasible(t) => (report::feasible(&parse_problem(&t.problem)?, t.options())?, t.output, true),
        Command::Solve(t) => (report::solve(&parse_problem(&t.problem)?, t.options())?, t.output, true),
        Command::Simplify { target: t, explain } => {
            (report::simplify(&parse_problem(&t.problem)?, t.options(), explain)?, t.output, true)
        }
        Command::Verify { target: t, step, seed } => {
            let (outcome, consistent) = report::verify(&parse_problem(&t.problem)?, t.options(), step, seed)?;
            (outcome, t.output, consistent)
        }
        Command::TnormEval { name, x, y, param, solve } => (report::tnorm_eval(&name, param, x, y, solve)?, None, true),
    };
    write_report(&outcome, output.as_deref())?;
    if !consistent {
        eprintln!("error: the computed region disagrees with the grid oracle");
        return Ok(1);
    }
    Ok(outcome.status.exit_code())
}

fn main() -> ExitCode {
    // Clap uses status 2 for usage errors, which here means "infeasible".
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
