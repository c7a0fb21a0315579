use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use cocrystal_core::evolve::{run_evolution, EvolutionConfig, ModelObjective, Scheme};
use cocrystal_core::gbt::PropertyModels;
use cocrystal_core::metrics::mann_whitney;
use cocrystal_core::parse_smiles;

use crate::metrics::{canonical_set, read_lines};
use crate::{config_err, stage_err, CmdResult};

#[derive(Args)]
pub struct EvolveArgs {
    /// Initial population, one SMILES per line.
    #[arg(long)]
    init: PathBuf,
    #[arg(long)]
    models: PathBuf,
    #[arg(long)]
    drug: String,
    /// TOML evolution settings; defaults when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Training corpus for the novelty count.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
}

pub fn run(args: EvolveArgs) -> CmdResult {
    let mut config = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading {}", p.display()))
                .map_err(config_err)?;
            EvolutionConfig::from_toml(&text).map_err(config_err)?
        }
        None => EvolutionConfig::default(),
    };
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(s) = args.scheme {
        config.scheme = s;
    }
    if let Some(n) = args.iterations {
        config.max_iterations = n;
    }
    if let Some(n) = args.population {
        config.population_size = n;
    }
    let initial = read_lines(&args.init)?;
    let training = match &args.corpus {
        Some(p) => canonical_set(&read_lines(p)?),
        None => Default::default(),
    };
    let models = PropertyModels::load_dir(&args.models).map_err(config_err)?;
    let drug = parse_smiles(&args.drug)
        .with_context(|| format!("drug {:?}", args.drug))
        .map_err(config_err)?;
    let objective = ModelObjective::new(&models, &drug);
    let report = run_evolution(&initial, &config, &objective, &training).map_err(stage_err)?;
    report.write_dir(&args.out).map_err(stage_err)?;
    let first = &report.stats[0];
    let last = report.stats.last().expect("at least the initial entry");
    println!(
        "scheme: {} iterations: {}{}",
        config.scheme,
        report.iterations,
        if report.timed_out { " (timed out)" } else { "" }
    );
    for (k, name) in ["f1 (1 - p_u)", "f2 (1 - p_o)", "f3 (p_h)"]
        .iter()
        .enumerate()
    {
        println!(
            "median {name}: {:.4} -> {:.4}",
            first.median[k], last.median[k]
        );
    }
    let mw = mann_whitney(&report.final_f3(), &report.initial_f3());
    println!(
        "f3 decrease: U={:.1} one-sided p={:.3e}{}",
        mw.u,
        mw.p_greater,
        if mw.exact { " (exact)" } else { "" }
    );
    println!(
        "hypervolume: {:.6} -> {:.6}",
        first.hypervolume, last.hypervolume
    );
    println!(
        "archive: {} novelty: {:.3} sa<=3: {}",
        report.archive.len(),
        report.novelty,
        report.sa_filtered.len()
    );
    Ok(())
}
