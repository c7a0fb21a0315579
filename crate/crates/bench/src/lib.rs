//! Shared inputs for the benchmarks.

use cocrystal_core::molgraph::read_smiles_lines;
use cocrystal_core::{parse_smiles, Molecule};

pub const CORPUS: &str = include_str!("../../../data/coformers.smi");

/// The first `n` corpus strings.
pub fn corpus_strings(n: usize) -> Vec<String> {
    read_smiles_lines(CORPUS).into_iter().take(n).collect()
}

pub fn corpus_molecules(n: usize) -> Vec<Molecule> {
    corpus_strings(n)
        .iter()
        .map(|s| parse_smiles(s).expect("corpus parses"))
        .collect()
}
