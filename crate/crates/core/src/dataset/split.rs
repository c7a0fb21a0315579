use std::collections::HashMap;

use rand::seq::SliceRandom;

use super::{CocrystalRecord, DatasetError};
use crate::descriptors::{morgan_fingerprint, tanimoto, Fingerprint};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitMode {
    /// Seeded shuffle of records.
    Random,
    /// Whole clusters of similar coformers (leader clustering on ECFP4 at
    /// the given Tanimoto similarity) go to the same side.
    Tanimoto { similarity: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub mode: SplitMode,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            seed: 0,
            mode: SplitMode::Random,
        }
    }
}

/// Train and test record indices. In random mode
/// |train| = round(train_fraction * n) exactly.
pub fn split(
    records: &[CocrystalRecord],
    spec: &SplitSpec,
) -> Result<(Vec<usize>, Vec<usize>), DatasetError> {
    let n = records.len();
    if n < 10 {
        return Err(DatasetError::TooFewRecords { need: 10, got: n });
    }
    let mut rng = stream(spec.seed, &[1]);
    let n_train = (spec.train_fraction * n as f64).round() as usize;
    match spec.mode {
        SplitMode::Random => {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            let mut test = idx.split_off(n_train);
            idx.sort_unstable();
            test.sort_unstable();
            Ok((idx, test))
        }
        SplitMode::Tanimoto { similarity } => {
            let mut keys: Vec<&str> = Vec::new();
            let mut groups: HashMap<&str, Vec<usize>> = HashMap::new();
            for (i, r) in records.iter().enumerate() {
                groups
                    .entry(r.smiles_b.as_str())
                    .or_insert_with(|| {
                        keys.push(r.smiles_b.as_str());
                        Vec::new()
                    })
                    .push(i);
            }
            keys.shuffle(&mut rng);
            let fps: Vec<Fingerprint> = keys
                .iter()
                .map(|k| morgan_fingerprint(&records[groups[k][0]].mol_b))
                .collect();
            let mut leaders: Vec<usize> = Vec::new();
            let mut clusters: Vec<Vec<usize>> = Vec::new();
            for (u, fp) in fps.iter().enumerate() {
                let home = leaders
                    .iter()
                    .position(|&l| tanimoto(fp, &fps[l]).unwrap_or(0.0) >= similarity);
                match home {
                    Some(c) => clusters[c].extend(&groups[keys[u]]),
                    None => {
                        leaders.push(u);
                        clusters.push(groups[keys[u]].clone());
                    }
                }
            }
            let mut train = Vec::new();
            let mut test = Vec::new();
            for c in clusters {
                if test.len() < n - n_train {
                    test.extend(c);
                } else {
                    train.extend(c);
                }
            }
            train.sort_unstable();
            test.sort_unstable();
            Ok((train, test))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    fn records(n: usize) -> Vec<CocrystalRecord> {
        let smiles = [
            "CCO",
            "CCN",
            "c1ccccc1O",
            "OC(=O)C=CC(=O)O",
            "NC(N)=O",
            "CCCCCC",
        ];
        (0..n)
            .map(|i| {
                let b = smiles[i % smiles.len()];
                CocrystalRecord {
                    smiles_a: "CC(=O)O".into(),
                    smiles_b: b.into(),
                    mol_a: parse_smiles("CC(=O)O").unwrap(),
                    mol_b: parse_smiles(b).unwrap(),
                    labels: [i % 2 == 0, false, true],
                }
            })
            .collect()
    }

    #[test]
    fn sizes_and_disjointness() {
        let (train, test) = split(&records(10), &SplitSpec::default()).unwrap();
        assert_eq!((train.len(), test.len()), (8, 2));
        assert!(train.iter().all(|i| !test.contains(i)));
        assert!(split(&records(9), &SplitSpec::default()).is_err());
    }

    #[test]
    fn seeds() {
        let recs = records(40);
        let spec = |seed| SplitSpec {
            seed,
            ..SplitSpec::default()
        };
        assert_eq!(
            split(&recs, &spec(3)).unwrap(),
            split(&recs, &spec(3)).unwrap()
        );
        let splits: Vec<_> = (0..5).map(|s| split(&recs, &spec(s)).unwrap().1).collect();
        for a in 0..5 {
            for b in a + 1..5 {
                assert_ne!(splits[a], splits[b]);
            }
        }
    }

    #[test]
    fn similarity_groups_stay_together() {
        let recs = records(60);
        let spec = SplitSpec {
            mode: SplitMode::Tanimoto { similarity: 0.99 },
            ..SplitSpec::default()
        };
        let (train, test) = split(&recs, &spec).unwrap();
        assert_eq!(train.len() + test.len(), 60);
        for &t in &test {
            assert!(train.iter().all(|&i| recs[i].smiles_b != recs[t].smiles_b));
        }
    }
}
