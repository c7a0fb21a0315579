//! Candidate coformer sources: a token Markov chain fitted on a corpus and
//! a corpus sampler that perturbs picks with random mutations.

mod markov;

use std::ops::RangeInclusive;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use markov::{MarkovModel, Sampling, BEGIN, END, MAX_LEN, ORDER};

use crate::evolve::{mutate, Constraints};
use crate::molgraph::parse_smiles;
use crate::rng::stream;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("the corpus is empty")]
    EmptyCorpus,
    #[error("model line {line} malformed: {text:?}")]
    Format { line: usize, text: String },
    #[error("inconsistent model: {0}")]
    Model(String),
}

/// Raw generator output. Invalid strings stay in the batch.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenerationBatch {
    pub requested: usize,
    pub produced: Vec<String>,
    /// Generator tag per item.
    pub provenance: Vec<String>,
}

impl GenerationBatch {
    pub fn len(&self) -> usize {
        self.produced.len()
    }

    pub fn is_empty(&self) -> bool {
        self.produced.is_empty()
    }

    pub fn from_strings(items: Vec<String>, tag: &str) -> Self {
        GenerationBatch {
            requested: items.len(),
            provenance: vec![tag.to_string(); items.len()],
            produced: items,
        }
    }
}

/// Draws `n` corpus entries uniformly and applies a number of mutations
/// drawn from `perturbations` to each. Unperturbed picks are returned as
/// written in the corpus; perturbed ones in canonical form.
pub fn sample_and_perturb<S: AsRef<str> + Sync>(
    corpus: &[S],
    n: usize,
    perturbations: RangeInclusive<usize>,
    seed: u64,
) -> Result<GenerationBatch, GeneratorError> {
    if corpus.is_empty() {
        return Err(GeneratorError::EmptyCorpus);
    }
    let constraints = Constraints::default();
    let items: Vec<(String, String)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, &[6, i as u64]);
            let pick = corpus[rng.gen_range(0..corpus.len())].as_ref();
            let k = rng.gen_range(perturbations.clone());
            if k == 0 {
                return (pick.to_string(), "corpus".to_string());
            }
            match parse_smiles(pick) {
                Ok(mut m) => {
                    for _ in 0..k {
                        m = mutate(&m, &constraints, &mut rng).molecule;
                    }
                    (m.to_smiles(), format!("perturb:{k}"))
                }
                Err(_) => (pick.to_string(), "corpus".to_string()),
            }
        })
        .collect();
    let (produced, provenance) = items.into_iter().unzip();
    Ok(GenerationBatch {
        requested: n,
        produced,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::validate_smiles;

    const CORPUS: [&str; 4] = [
        "OC(=O)c1ccccc1",
        "NC(N)=O",
        "O=C(O)C=CC(=O)O",
        "Oc1ccc(O)cc1",
    ];

    #[test]
    fn unperturbed_is_subset() {
        let b = sample_and_perturb(&CORPUS, 50, 0..=0, 1).unwrap();
        assert_eq!(b.len(), 50);
        assert!(b.produced.iter().all(|s| CORPUS.contains(&s.as_str())));
    }

    #[test]
    fn perturbed_outputs_validate() {
        let b = sample_and_perturb(&CORPUS, 100, 1..=3, 2).unwrap();
        for s in &b.produced {
            assert!(validate_smiles(s).1.is_empty(), "{s}");
        }
        assert_eq!(b, sample_and_perturb(&CORPUS, 100, 1..=3, 2).unwrap());
        assert!(sample_and_perturb::<&str>(&[], 1, 1..=3, 0).is_err());
    }
}
