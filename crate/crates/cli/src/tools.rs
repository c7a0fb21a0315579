use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use cocrystal_core::dataset::{featurize, load_dataset};
use cocrystal_core::descriptors::{
    compute_descriptors, descriptor_manifest, sa_score_with, FragmentTable, DESCRIPTOR_NAMES,
};
use cocrystal_core::parse_smiles;
use cocrystal_core::pipeline::prefilter;

use crate::metrics::read_lines;
use crate::{config_err, stage_err, CmdResult};

fn emit(out: &Option<PathBuf>, text: String) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(stage_err),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Args)]
pub struct PrefilterArgs {
    /// SMILES file to screen.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Keeps lines with MW < 600, at most 9 rotatable bonds and at most 39
/// heavy atoms; unparsable lines are dropped.
pub fn prefilter_cmd(args: PrefilterArgs) -> CmdResult {
    let lines = read_lines(&args.input)?;
    let kept: Vec<&String> = lines
        .iter()
        .filter(|s| parse_smiles(s).is_ok_and(|m| prefilter(&m)))
        .collect();
    log::info!("prefilter kept {} of {}", kept.len(), lines.len());
    emit(&args.out, kept.iter().map(|s| format!("{s}\n")).collect())
}

#[derive(Args)]
pub struct SaTableArgs {
    /// Corpus to count fragments over.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Score these SMILES against the new table and print them.
    #[arg(long)]
    score: Vec<String>,
}

pub fn sa_table(args: SaTableArgs) -> CmdResult {
    let mols: Vec<_> = read_lines(&args.corpus)?
        .iter()
        .filter_map(|s| parse_smiles(s).ok())
        .collect();
    let table = FragmentTable::train(&mols);
    fs::write(&args.out, table.to_text())
        .with_context(|| format!("writing {}", args.out.display()))
        .map_err(stage_err)?;
    println!("molecules: {} fragments: {}", mols.len(), table.len());
    for s in &args.score {
        let m = parse_smiles(s)
            .with_context(|| format!("{s:?}"))
            .map_err(config_err)?;
        println!("{s}\t{}", sa_score_with(&m, &table));
    }
    Ok(())
}

#[derive(Args)]
pub struct DescriptorArgs {
    /// Molecules given on the command line.
    smiles: Vec<String>,
    /// Or a SMILES file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Print the catalog instead.
    #[arg(long)]
    manifest: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn descriptors(args: DescriptorArgs) -> CmdResult {
    if args.manifest {
        return emit(&args.out, descriptor_manifest());
    }
    let mut items = args.smiles.clone();
    if let Some(p) = &args.input {
        items.extend(read_lines(p)?);
    }
    if items.is_empty() {
        return Err(config_err(anyhow::anyhow!("no molecules given")));
    }
    let mut text = format!("smiles\t{}\n", DESCRIPTOR_NAMES.join("\t"));
    for s in &items {
        let m = parse_smiles(s)
            .with_context(|| format!("{s:?}"))
            .map_err(stage_err)?;
        let d = compute_descriptors(&m);
        let vals: Vec<String> = d.values().iter().map(|v| format!("{v:.6}")).collect();
        text.push_str(&format!("{s}\t{}\n", vals.join("\t")));
    }
    emit(&args.out, text)
}

#[derive(Args)]
pub struct FeatureArgs {
    /// Pair dataset CSV.
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Also write "index<TAB>name" column lines here.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

pub fn features(args: FeatureArgs) -> CmdResult {
    let d = load_dataset(&args.data).map_err(config_err)?;
    for r in &d.rejected {
        log::warn!("skipped line {}: {}", r.line, r.reason);
    }
    let x = featurize(&d.records).map_err(stage_err)?;
    let file = fs::File::create(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))
        .map_err(stage_err)?;
    x.write_csv(file).map_err(stage_err)?;
    if let Some(p) = &args.manifest {
        fs::write(p, x.manifest())
            .with_context(|| format!("writing {}", p.display()))
            .map_err(stage_err)?;
    }
    println!("rows: {} columns: {}", x.n_rows(), x.n_cols());
    Ok(())
}
