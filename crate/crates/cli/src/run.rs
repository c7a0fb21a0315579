use std::path::PathBuf;

use clap::Args;
use cocrystal_core::pipeline::{
    run_pipeline, GeneratorMethod, PipelineConfig, PipelineError, Ranker,
};

use crate::{config_err, stage_err, CmdResult, Failure};

#[derive(Args)]
pub struct RunArgs {
    /// Pipeline TOML; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    drug: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    models: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    batch_size: Option<usize>,
    /// Screen this candidate file instead of generating.
    #[arg(long)]
    candidates: Option<PathBuf>,
    /// full, validation or three characters of 0/1/*.
    #[arg(long)]
    mask: Option<String>,
    #[arg(long)]
    no_evolve: bool,
    #[arg(long)]
    evolve_failures_only: bool,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    prefilter: bool,
    /// Train the models into the model directory first.
    #[arg(long)]
    train: bool,
    /// Rank by this score file instead of the stub heuristic.
    #[arg(long)]
    scores: Option<PathBuf>,
}

fn classify(e: PipelineError) -> Failure {
    if e.exit_code() == 1 {
        config_err(e)
    } else {
        stage_err(e)
    }
}

pub fn run(args: RunArgs) -> CmdResult {
    let mut c = match &args.config {
        Some(p) => PipelineConfig::load(p).map_err(classify)?,
        None => PipelineConfig::default(),
    };
    if let Some(v) = args.drug {
        c.drug_smiles = v;
    }
    if let Some(v) = args.out {
        c.output_dir = v;
    }
    if let Some(v) = args.models {
        c.model_dir = v;
    }
    if let Some(v) = args.seed {
        c.seed = v;
    }
    if let Some(v) = args.batch_size {
        c.batch_size = v;
    }
    if let Some(v) = args.candidates {
        c.generator.method = GeneratorMethod::File;
        c.generator.candidates = Some(v);
    }
    if let Some(v) = args.mask {
        c.mask = v;
    }
    if let Some(v) = args.iterations {
        c.evolution.max_iterations = v;
    }
    if let Some(v) = args.population {
        c.evolution.population_size = v;
    }
    c.evolve &= !args.no_evolve;
    c.evolve_failures_only |= args.evolve_failures_only;
    c.prefilter |= args.prefilter;
    c.train |= args.train;
    if let Some(v) = args.scores {
        c.ranker = Ranker::External { scores: v };
    }
    let outcome = run_pipeline(&c).map_err(classify)?;
    print!("{}", outcome.summary(&c));
    println!("report: {}", c.output_dir.join("report.csv").display());
    Ok(())
}
