//! `mpkit` — batch driver for matched-projection experiments.
//!
//! Subcommands: `generate` (write random idempotent matrix files),
//! `match` (compute m(Q) by one or all formulas), `verify` (run the
//! identity checklist over files or a generated campaign).
//!
//! Exit codes: 0 all passed, 1 verification failure, 2 input/validation
//! error.

mod config;
mod files;
mod generate;
mod match_cmd;
mod verify_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CampaignConfig, RankPolicy};
use match_cmd::{FormulaChoice, MatchRequest};
use mpkit::matched::Formula;
use mpkit::Tolerances;
use verify_cmd::VerifyRequest;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    /// Input or configuration problem (exit 2).
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    /// Verification failure (exit 1).
    pub fn failure(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "mpkit",
    version,
    about = "Matched projections of idempotent matrices: generation, computation, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random idempotents as JSON matrix files
    Generate {
        /// Output directory
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        campaign: CampaignArgs,
    },
    /// Compute the matched projection of an idempotent matrix file
    Match {
        /// Input matrix file (JSON {rows, cols, entries})
        input: PathBuf,
        /// Formula to evaluate: original|qstar|q|symmetric|block|all
        #[arg(long, default_value = "all", value_parser = parse_formula)]
        formula: FormulaChoice,
        /// Directory for the result file (defaults to the input's directory)
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Print the result JSON to stdout
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tolerances: ToleranceArgs,
    },
    /// Verify the identity checklist over matrix files or a random campaign
    Verify {
        /// Matrix files to verify; omit to run a generated campaign
        inputs: Vec<PathBuf>,
        /// Directory for per-input report files
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Print reports and summary as JSON to stdout
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        campaign: CampaignArgs,
    },
}

#[derive(Args)]
struct CampaignArgs {
    /// Matrix sizes, comma separated
    #[arg(long, value_delimiter = ',', default_value = "4,8")]
    sizes: Vec<usize>,
    /// Target skews (||A||), comma separated
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    skews: Vec<f64>,
    /// Trials per (size, skew) cell
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Base seed (default: MPKIT_SEED or 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Rank policy: "random" or an explicit comma-separated list
    #[arg(long, default_value = "random", value_parser = clap::value_parser!(RankPolicy))]
    ranks: RankPolicy,
    #[command(flatten)]
    tolerances: ToleranceArgs,
}

#[derive(Args)]
struct ToleranceArgs {
    /// Identity-check residual bound (default 1e-8)
    #[arg(long = "tol-id", value_name = "X")]
    tol_id: Option<f64>,
    /// Relative pseudoinverse cutoff (default max(rows, cols) * eps)
    #[arg(long = "tol-pinv", value_name = "X")]
    tol_pinv: Option<f64>,
}

impl ToleranceArgs {
    fn build(&self) -> Result<Tolerances, CliError> {
        let mut tol = Tolerances::default();
        if let Some(id) = self.tol_id {
            tol.tol_id = id;
        }
        if let Some(p) = self.tol_pinv {
            tol.tol_pinv = Some(p);
        }
        tol.validate()
            .map_err(|e| CliError::input(format!("invalid config: {e}")))?;
        Ok(tol)
    }
}

impl CampaignArgs {
    fn build(&self) -> Result<CampaignConfig, CliError> {
        let cfg = CampaignConfig {
            sizes: self.sizes.clone(),
            ranks: self.ranks.clone(),
            skews: self.skews.clone(),
            trials_per_cell: self.trials,
            seed: resolve_seed(self.seed)?,
            tolerances: self.tolerances.build()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_formula(s: &str) -> Result<FormulaChoice, String> {
    if s == "all" {
        return Ok(FormulaChoice::All);
    }
    s.parse::<Formula>().map(FormulaChoice::One)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("MPKIT_SEED") {
        Ok(text) => text.parse().map_err(|_| {
            CliError::input(format!(
                "MPKIT_SEED must be an unsigned integer, got '{text}'"
            ))
        }),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { out, campaign } => {
            let cfg = campaign.build()?;
            let count = generate::run(&cfg, &out)?;
            println!("wrote {count} matrix files to {}", out.display());
            Ok(())
        }
        Command::Match {
            input,
            formula,
            out,
            json,
            tolerances,
        } => match_cmd::run(&MatchRequest {
            input,
            formula,
            out_dir: out,
            json,
            tolerances: tolerances.build()?,
        }),
        Command::Verify {
            inputs,
            out,
            json,
            campaign,
        } => verify_cmd::run(&VerifyRequest {
            inputs,
            campaign: campaign.build()?,
            out_dir: out,
            json,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
