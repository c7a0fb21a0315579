use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use cocrystal_core::gbt::PropertyModels;
use cocrystal_core::metrics::{compute_metrics_with_models, GenerationMetrics, LabelMask};
use cocrystal_core::molgraph::{canonicalize, read_smiles_lines};
use cocrystal_core::parse_smiles;

use crate::{config_err, stage_err, CmdResult};

#[derive(Args)]
pub struct MetricsArgs {
    /// Generated SMILES, one per line.
    #[arg(long)]
    batch: PathBuf,
    /// Training corpus for novelty.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    models: PathBuf,
    /// Drug the candidates are profiled against.
    #[arg(long)]
    drug: String,
    /// full, validation or three characters of 0/1/*.
    #[arg(long, default_value = "full")]
    mask: LabelMask,
    /// Append a CSV row (with a header for a new file) here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the target SMILES here.
    #[arg(long)]
    target: Option<PathBuf>,
}

pub fn read_lines(path: &Path) -> Result<Vec<String>, crate::Failure> {
    fs::read_to_string(path)
        .map(|t| read_smiles_lines(&t))
        .with_context(|| format!("reading {}", path.display()))
        .map_err(config_err)
}

pub fn canonical_set(lines: &[String]) -> HashSet<String> {
    lines
        .iter()
        .filter_map(|s| parse_smiles(s).ok().map(|m| canonicalize(&m)))
        .collect()
}

pub fn run(args: MetricsArgs) -> CmdResult {
    let batch = read_lines(&args.batch)?;
    let training = canonical_set(&read_lines(&args.corpus)?);
    let models = PropertyModels::load_dir(&args.models).map_err(config_err)?;
    let drug = parse_smiles(&args.drug)
        .with_context(|| format!("drug {:?}", args.drug))
        .map_err(config_err)?;
    let m = compute_metrics_with_models(&batch, &training, &models, &drug, args.mask);
    print!("{}", m.to_key_values());
    if let Some(p) = &args.csv {
        let mut text = if p.exists() {
            fs::read_to_string(p).map_err(stage_err)?
        } else {
            format!("{}\n", GenerationMetrics::csv_header())
        };
        text.push_str(&format!("{}\n", m.csv_row()));
        fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(stage_err)?;
    }
    if let Some(p) = &args.target {
        let body: String = m.target.iter().map(|s| format!("{s}\n")).collect();
        fs::write(p, body)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(stage_err)?;
    }
    Ok(())
}
