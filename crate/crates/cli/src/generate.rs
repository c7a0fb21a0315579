use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use cocrystal_core::generator::{sample_and_perturb, MarkovModel, Sampling, MAX_LEN};
use cocrystal_core::molgraph::read_smiles_lines;

use crate::{config_err, stage_err, CmdResult};

#[derive(Clone, Copy, ValueEnum)]
pub enum Method {
    Markov,
    Perturb,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    /// Reject tokens that cannot lead to a well-formed string.
    Syntax,
    /// Sample the raw transition counts.
    Free,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Method::Markov)]
    method: Method,
    /// Training corpus, one SMILES per line.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(short, long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Syntax)]
    mode: Mode,
    /// Most mutations per perturbed molecule.
    #[arg(long, default_value_t = 3)]
    max_perturbations: usize,
    /// Also write "smiles<TAB>source" lines here.
    #[arg(long)]
    provenance: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: GenerateArgs) -> CmdResult {
    let text = fs::read_to_string(&args.corpus)
        .with_context(|| format!("reading {}", args.corpus.display()))
        .map_err(config_err)?;
    let corpus = read_smiles_lines(&text);
    let batch = match args.method {
        Method::Markov => {
            let mode = match args.mode {
                Mode::Syntax => Sampling::Syntax,
                Mode::Free => Sampling::Free,
            };
            MarkovModel::fit(&corpus)
                .map_err(config_err)?
                .generate_with(args.n, args.seed, MAX_LEN, mode)
        }
        Method::Perturb => sample_and_perturb(
            &corpus,
            args.n,
            1..=args.max_perturbations.max(1),
            args.seed,
        )
        .map_err(config_err)?,
    };
    let body: String = batch.produced.iter().map(|s| format!("{s}\n")).collect();
    match &args.out {
        Some(p) => fs::write(p, body)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(stage_err)?,
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(stage_err)?,
    }
    if let Some(p) = &args.provenance {
        let table: String = batch
            .produced
            .iter()
            .zip(&batch.provenance)
            .map(|(s, t)| format!("{s}\t{t}\n"))
            .collect();
        fs::write(p, table)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(stage_err)?;
    }
    Ok(())
}
