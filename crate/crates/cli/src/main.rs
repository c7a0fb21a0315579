use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod evolve;
mod gbt;
mod generate;
mod metrics;
mod run;
mod tools;

/// Failure classes mapped to process exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, missing inputs, unreadable configuration.
    Config(anyhow::Error),
    /// A pipeline stage failed on valid inputs.
    Stage(anyhow::Error),
}

pub type CmdResult = Result<(), Failure>;

pub fn config_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Config(e.into())
}

pub fn stage_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Stage(e.into())
}

#[derive(Parser)]
#[command(
    name = "cocrystal",
    version,
    about = "Coformer screening for tabletability"
)]
struct Cli {
    /// Repeat for more log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train or evaluate the gradient-boosted property models.
    Gbt {
        #[command(subcommand)]
        command: gbt::GbtCommand,
    },
    /// Run the full screening pipeline for one drug.
    Run(run::RunArgs),
    /// Sample candidate coformers from a corpus.
    Generate(generate::GenerateArgs),
    /// Optimize a population against the property models.
    Evolve(evolve::EvolveArgs),
    /// Validity, novelty and target counts for a generated batch.
    Metrics(metrics::MetricsArgs),
    /// Apply the MW, rotatable-bond and heavy-atom limits to a SMILES file.
    Prefilter(tools::PrefilterArgs),
    /// Count SA fragments over a corpus.
    SaTable(tools::SaTableArgs),
    /// Per-molecule descriptor table.
    Descriptors(tools::DescriptorArgs),
    /// Pair feature matrix for a dataset.
    Features(tools::FeatureArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match cli.command {
        Command::Gbt { command } => gbt::run(command),
        Command::Run(a) => run::run(a),
        Command::Generate(a) => generate::run(a),
        Command::Evolve(a) => evolve::run(a),
        Command::Metrics(a) => metrics::run(a),
        Command::Prefilter(a) => tools::prefilter_cmd(a),
        Command::SaTable(a) => tools::sa_table(a),
        Command::Descriptors(a) => tools::descriptors(a),
        Command::Features(a) => tools::features(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Stage(e)) => {
            eprintln!("stage failure: {e:#}");
            ExitCode::from(2)
        }
    }
}
