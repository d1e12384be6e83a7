//! `fairaudit`: demographic fairness audit of biometric matchers from
//! disaggregated FMR/FNMR tables.

mod commands;
mod error;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fairaudit::{FmrScale, Measure};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fairaudit",
    version,
    about = "Fairness audit over disaggregated face recognition error rates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Omit generation timestamps from reports and plots.
    #[arg(long, global = true)]
    pub no_timestamps: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the data criteria and report IR-incalculable records.
    Validate(ValidateArgs),
    /// Per-algorithm measure values at one risk weight.
    Score(ScoreArgs),
    /// Sweep a measure over a grid of risk weights.
    Sweep(SweepArgs),
    /// FFMC scorecard for all three measures.
    Ffmc(FfmcArgs),
    /// Accuracy/fairness Pareto frontier.
    Pareto(ParetoArgs),
    /// Full audit bundle written to --out.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    Wide,
    Long,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Table,
    Report,
    Plots,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input CSV file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "wide")]
    pub format: Layout,
    #[arg(long, default_value = "linear", value_parser = parse_scale)]
    pub fmr_scale: FmrScale,
    /// Row-label prefix of FMR rows in the wide layout.
    #[arg(long, default_value = "fmr:")]
    pub fmr_prefix: String,
    /// Row-label prefix of FNMR rows in the wide layout.
    #[arg(long, default_value = "fnmr:")]
    pub fnmr_prefix: String,
    /// Wide layout without prefixes: first half of the rows FMR, second half FNMR.
    #[arg(long)]
    pub positional_rows: bool,
    /// `group,count` CSV of mated-comparison counts applied to every record.
    #[arg(long)]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Directory for output files; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// What to emit (repeatable or comma separated).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub emit: Vec<Emit>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "garbe", value_parser = parse_measure)]
    pub measure: Measure,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "garbe", value_parser = parse_measure)]
    pub measure: Measure,
    /// Inclusive `start:stop:step`.
    #[arg(long, default_value = "0:1:0.01")]
    pub grid: String,
    /// Histogram bins for the distribution panel.
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FfmcArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "0:1:0.01")]
    pub grid: String,
    /// FFMC.1 pass band for the median crossover, `lo:hi`.
    #[arg(long, default_value = "0.2:0.8")]
    pub band: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ParetoArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "garbe", value_parser = parse_measure)]
    pub measure: Measure,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Also list efficient algorithms with total FNMR below this value.
    #[arg(long)]
    pub inset_fnmr: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value = "0:1:0.01")]
    pub grid: String,
    #[arg(long, default_value = "0.2:0.8")]
    pub band: String,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    #[arg(long)]
    pub inset_fnmr: Option<f64>,
    /// Output directory (required).
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse()
}

fn parse_scale(s: &str) -> Result<FmrScale, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                CliError::BAD_ARGS
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fairaudit: {e}");
            ExitCode::from(e.code())
        }
    }
}
