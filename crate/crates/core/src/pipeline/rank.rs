//! Candidate ranking: a hydrogen-bond complementarity stub or scores
//! supplied from outside.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Candidate, RankedCandidate};
use crate::descriptors::{hba_count, hbd_count};
use crate::molgraph::{canonicalize, Molecule};

pub const STUB_BANNER: &str =
    "stub ranker: scores are min(HBD_drug, HBA_coformer) + min(HBA_drug, HBD_coformer), \
     not a co-crystallization model";

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum Ranker {
    #[default]
    Stub,
    /// Scores keyed by SMILES, one `smiles,score` (or tab-separated) line
    /// each.
    External { scores: PathBuf },
}

/// Hydrogen-bond complementarity between drug and coformer.
pub fn stub_score(drug: &Molecule, coformer: &Molecule) -> f64 {
    (hbd_count(drug).min(hba_count(coformer)) + hba_count(drug).min(hbd_count(coformer))) as f64
}

/// Parses a score table, keying entries by canonical SMILES. A first line
/// whose score does not parse is taken as a header.
pub fn external_scores(text: &str) -> Result<HashMap<String, f64>, String> {
    let mut out = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(2, [',', '\t']);
        let smiles = parts.next().unwrap_or("").trim();
        let score = parts
            .next()
            .map(str::trim)
            .and_then(|s| s.parse::<f64>().ok());
        let Some(score) = score else {
            if n == 0 {
                continue;
            }
            return Err(format!("score line {}: {line:?}", n + 1));
        };
        let m = crate::parse_smiles(smiles)
            .map_err(|e| format!("score line {}: {smiles:?}: {e}", n + 1))?;
        out.insert(canonicalize(&m), score);
    }
    Ok(out)
}

pub fn read_scores(path: &Path) -> Result<HashMap<String, f64>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    external_scores(&text)
}

/// Scores and sorts candidates, best first. With `scores` the table is
/// used and missing candidates go last; otherwise [`stub_score`]. Ties are
/// broken by canonical SMILES.
pub fn rank_candidates(
    drug: &Molecule,
    candidates: Vec<Candidate>,
    scores: Option<&HashMap<String, f64>>,
) -> Vec<RankedCandidate> {
    let mut ranked: Vec<RankedCandidate> = candidates
        .into_iter()
        .map(|c| {
            let rank_score = match scores {
                Some(table) => table.get(&c.smiles).copied(),
                None => crate::parse_smiles(&c.smiles)
                    .ok()
                    .map(|m| stub_score(drug, &m)),
            };
            RankedCandidate {
                candidate: c,
                rank_score,
            }
        })
        .collect();
    ranked.sort_by(|a, b| {
        let by_score = match (a.rank_score, b.rank_score) {
            (Some(x), Some(y)) => y.total_cmp(&x),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        by_score.then_with(|| a.candidate.smiles.cmp(&b.candidate.smiles))
    });
    ranked
}
