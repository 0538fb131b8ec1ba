//! `aj`: command-line driver for cycle construction, verification, flows,
//! de Rham dimensions and point selection.
//!
//! Exit status: 0 when the result verifies, 1 when a verification fails,
//! 2 on invalid input or a pipeline error.

mod commands;
mod config;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::{FormsRequest, Verdict};
use config::{parse_curve_arg, parse_fixture_points, parse_target_arg, read_json, RunConfig};

#[derive(Parser)]
#[command(name = "aj", version, about = "Exact infinitesimal Abel-Jacobi computations on hyperelliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a cycle whose class is (dh_1, .., dh_g) and report the check.
    Construct(RunArgs),
    /// Recompute a construct report from its embedded inputs.
    Verify {
        /// Report file; stdin when absent or `-`.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve and verify a flow problem given as JSON.
    Flow {
        /// Problem file; stdin when absent or `-`.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimensions and basis of Omega^p of Q[t_1..t_N]/m^M.
    FormsInfo {
        #[arg(long = "vars", default_value_t = 1)]
        vars: usize,
        #[arg(long = "order", default_value_t = 3)]
        order: usize,
        /// Form degree p.
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Read {vars, order, degree} from stdin.
        #[arg(long)]
        stdin: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find rational points and a certified selection of g of them.
    Points(RunArgs),
    /// Compare fast paths with the reference oracles.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Curve JSON file (`*.json`, or `-` for stdin) or coefficients of s(x),
    /// lowest degree first, e.g. `1,0,0,1`.
    #[arg(long)]
    curve: Option<String>,
    /// Build the curve through these points: `x:y,x:y,..`.
    #[arg(long)]
    fixture_points: Option<String>,
    /// Genus for --fixture-points; defaults to the number of points.
    #[arg(long)]
    genus: Option<usize>,
    /// Target JSON file, or `;`-separated polynomials in t1..tN, e.g. `t1; 2*t1^2 - t2`.
    #[arg(long)]
    target: Option<String>,
    #[arg(long = "vars", default_value_t = 1)]
    vars: usize,
    #[arg(long = "order", default_value_t = 3)]
    order: usize,
    /// Height bound for the rational point search.
    #[arg(long, default_value_t = 5)]
    bound: u64,
    /// Seed for the order in which points are offered to selection.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// 0-based rows whose deleted minors must be nonzero (points only);
    /// all rows by default.
    #[arg(long, value_delimiter = ',')]
    required: Option<Vec<usize>>,
    /// Read a RunConfig JSON from stdin instead of flags.
    #[arg(long)]
    stdin: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        if self.stdin {
            return read_json(None);
        }
        Ok(RunConfig {
            curve: self.curve.as_deref().map(parse_curve_arg).transpose()?,
            fixture_points: self.fixture_points.as_deref().map(parse_fixture_points).transpose()?,
            genus: self.genus,
            target: self
                .target
                .as_deref()
                .map(|t| parse_target_arg(t, self.vars, self.order))
                .transpose()?,
            vars: self.vars,
            order: self.order,
            bound: self.bound,
            seed: self.seed,
            required: self.required.clone(),
        })
    }
}

fn run(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Command::Construct(args) => commands::construct(&args.config()?, args.out.as_deref()),
        Command::Points(args) => commands::points(&args.config()?, args.out.as_deref()),
        Command::Verify { report, out } => commands::verify(&read_json(report.as_deref())?, out.as_deref()),
        Command::Flow { problem, out } => commands::flow(&read_json(problem.as_deref())?, out.as_deref()),
        Command::FormsInfo {
            vars,
            order,
            degree,
            stdin,
            out,
        } => {
            let req = if stdin {
                read_json(None)?
            } else {
                FormsRequest { vars, order, degree }
            };
            commands::forms_info(req, out.as_deref())
        }
        Command::Selftest { seed, out } => {
            let report = selftest::run(seed);
            for c in &report.checks {
                eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            commands::emit(&report, out.as_deref())?;
            Ok(Verdict::from_bool(report.all_pass))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
