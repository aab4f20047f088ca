//! Front end for `arith-lg`: problem files, subcommands and the acceptance
//! suite.

pub mod acceptance;
pub mod commands;
pub mod error;
pub mod problem;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use arith_lg_core::{EnumConfig, DEFAULT_BUDGET};

use commands::{Outcome, PointArgs};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "arith-lg", version, about = "Exact exponential sums, Frobenius data and connection checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Number of partitions (and worker threads) for enumerations.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Maximum number of torus points per enumeration.
    #[arg(long, global = true, env = "ARITH_LG_BUDGET")]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct PointOpts {
    /// Problem file.
    pub file: PathBuf,
    /// The parameter tau, as an element literal.
    #[arg(long)]
    pub tau: Option<String>,
    /// Deformation parameters, comma separated; zero by default.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Read tau and x in this extension degree of the problem's field.
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
}

impl PointOpts {
    fn point(&self) -> PointArgs {
        PointArgs {
            tau: self.tau.clone(),
            x: self.x.clone(),
            degree: self.degree,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton polyhedron of f: vertices, facets, convenience, volume.
    AnalyzePolytope { file: PathBuf },
    /// Search for degenerate faces of F_x and count critical points.
    CheckNondegenerate {
        #[command(flatten)]
        point: PointOpts,
        /// Search extensions of degree up to this.
        #[arg(long, default_value_t = 1)]
        max_k: usize,
    },
    /// The exponential sum over the degree-k extension, with its bound.
    Expsum {
        #[command(flatten)]
        point: PointOpts,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Use the inverse character.
        #[arg(long)]
        inverse: bool,
    },
    /// Characteristic polynomial of Frobenius at (tau, x).
    Frobenius {
        #[command(flatten)]
        point: PointOpts,
    },
    /// L-function of the family in tau at x.
    LFunction {
        #[command(flatten)]
        point: PointOpts,
        /// Number of traces; at least 2 (rank + 1), which is the default.
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Curvature, Poincaré rank and restrictions of a connection file.
    VerifyConnection { file: PathBuf },
    /// The six flatness conditions (and metric conditions) of a tuple file.
    VerifyFts { file: PathBuf },
    /// Monodromy filtration of a nilpotent matrix file.
    Monodromy { file: PathBuf },
    /// Run the acceptance suite.
    Acceptance,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(path.display().to_string(), e))
}

fn load_problem(path: &PathBuf) -> Result<problem::Problem, CliError> {
    let text = read(path)?;
    problem::parse_problem(&text).map_err(|e| match e {
        CliError::Input { path: p, message } => CliError::Input {
            path: format!("{}: {p}", path.display()),
            message,
        },
        other => other,
    })
}

/// Budget precedence: `--budget`, then `ARITH_LG_BUDGET`, then the
/// problem file, then the default.
fn config(global: &GlobalArgs, problem_budget: Option<u64>) -> EnumConfig {
    let budget = global.budget.or(problem_budget).unwrap_or(DEFAULT_BUDGET);
    let config = EnumConfig::with_budget(budget);
    match global.threads {
        Some(t) => config.with_partitions(t),
        None => config,
    }
}

/// Runs one command; `Ok` carries a completed verdict.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::AnalyzePolytope { file } => commands::analyze_polytope(&load_problem(file)?),
        Command::CheckNondegenerate { point, max_k } => {
            let p = load_problem(&point.file)?;
            commands::check_nondegenerate_cmd(&p, &point.point(), (*max_k).max(1), &config(g, p.budget))
        }
        Command::Expsum { point, k, inverse } => {
            let p = load_problem(&point.file)?;
            commands::expsum_cmd(&p, &point.point(), (*k).max(1), *inverse, &config(g, p.budget))
        }
        Command::Frobenius { point } => {
            let p = load_problem(&point.file)?;
            commands::frobenius_cmd(&p, &point.point(), &config(g, p.budget))
        }
        Command::LFunction { point, kmax } => {
            let p = load_problem(&point.file)?;
            commands::l_function_cmd(&p, &point.point(), *kmax, &config(g, p.budget))
        }
        Command::VerifyConnection { file } => commands::verify_connection_cmd(&read(file)?),
        Command::VerifyFts { file } => commands::verify_fts_cmd(&read(file)?),
        Command::Monodromy { file } => commands::monodromy_cmd(&read(file)?),
        Command::Acceptance => {
            let summary = acceptance::run_all(&config(g, None));
            Ok(Outcome {
                passed: summary.passed,
                report: serde_json::to_value(&summary).expect("serializes"),
                text: summary.lines(),
            })
        }
    }
}

/// Runs the command, prints its report and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    if let Some(t) = cli.global.threads {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    match execute(cli) {
        Ok(outcome) => {
            if cli.global.json {
                let doc = serde_json::json!({ "passed": outcome.passed, "report": outcome.report });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
            } else {
                println!("{}", outcome.text);
            }
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            if cli.global.json {
                let kind = match e {
                    CliError::Input { .. } => "input",
                    CliError::Budget(_) => "budget",
                    CliError::CrossCheck(_) => "cross_check",
                };
                let doc = match &e {
                    CliError::Input { path, message } => {
                        serde_json::json!({ "error": kind, "path": path, "message": message })
                    }
                    other => serde_json::json!({ "error": kind, "message": other.to_string() }),
                };
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
            } else {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
