//! Synthetic accessibility score (Ertl & Schuffenhauer scheme) with a
//! fragment table trained on a local corpus.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use super::fingerprint::morgan_environments;
use super::topology::{bridgehead_count, spiro_count};
use super::DescriptorError;
use crate::molgraph::Molecule;

/// Candidates with an SA score at or below this count as synthesizable.
pub const SA_THRESHOLD: f64 = 3.0;

const UNKNOWN_FRAGMENT: f64 = -4.0;
const RAW_MIN: f64 = -4.0;
const RAW_MAX: f64 = 2.5;
/// Places log10 per-molecule fragment frequencies on the scale of the
/// published fragment table (occurrence-weighted mean offset over the
/// fragments both tables share).
const FREQUENCY_OFFSET: f64 = 2.35;

/// A score in [1, 10]; lower is easier to synthesize.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SaScore(f64);

impl SaScore {
    pub fn new(v: f64) -> Self {
        SaScore(v.clamp(1.0, 10.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for SaScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3}", self.0)
    }
}

/// Radius-2 environment counts and the derived log-frequency scores.
#[derive(Debug, Clone, Default)]
pub struct FragmentTable {
    molecules: u64,
    counts: HashMap<u32, u64>,
    scores: HashMap<u32, f64>,
}

impl FragmentTable {
    pub fn from_counts(molecules: u64, counts: HashMap<u32, u64>) -> Self {
        let n = molecules.max(1) as f64;
        let scores = counts
            .iter()
            .map(|(&k, &c)| (k, (c as f64 / n).log10() + FREQUENCY_OFFSET))
            .collect();
        FragmentTable {
            molecules,
            counts,
            scores,
        }
    }

    pub fn train<'a>(corpus: impl IntoIterator<Item = &'a Molecule>) -> Self {
        let mut counts: HashMap<u32, u64> = HashMap::new();
        let mut molecules = 0;
        for m in corpus {
            molecules += 1;
            for e in morgan_environments(m, 2) {
                *counts.entry(e.id).or_default() += 1;
            }
        }
        FragmentTable::from_counts(molecules, counts)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn score(&self, id: u32) -> f64 {
        self.scores.get(&id).copied().unwrap_or(UNKNOWN_FRAGMENT)
    }

    /// "env_hash<TAB>count" lines sorted by hash, after a comment line
    /// recording the corpus size.
    pub fn to_text(&self) -> String {
        let mut keys: Vec<&u32> = self.counts.keys().collect();
        keys.sort();
        let mut out = format!("# molecules\t{}\n", self.molecules);
        for k in keys {
            out.push_str(&format!("{k}\t{}\n", self.counts[k]));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, DescriptorError> {
        let mut counts = HashMap::new();
        let mut molecules = 0;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("# molecules\t") {
                molecules = rest
                    .parse()
                    .map_err(|_| DescriptorError::Table(n + 1, line.to_string()))?;
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let parsed = (|| {
                let k: u32 = parts.next()?.parse().ok()?;
                let v: u64 = parts.next()?.parse().ok()?;
                Some((k, v))
            })();
            let (k, v) = parsed.ok_or_else(|| DescriptorError::Table(n + 1, line.to_string()))?;
            counts.insert(k, v);
        }
        if molecules == 0 {
            return Err(DescriptorError::Table(0, "missing molecule count".into()));
        }
        Ok(FragmentTable::from_counts(molecules, counts))
    }

    /// The table trained on the shipped coformer corpus.
    pub fn shipped() -> &'static FragmentTable {
        static TABLE: OnceLock<FragmentTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            FragmentTable::from_text(include_str!("../../data/sa_fragments.tsv"))
                .expect("shipped fragment table parses")
        })
    }
}

/// SA score against the shipped fragment table.
pub fn sa_score(m: &Molecule) -> SaScore {
    sa_score_with(m, FragmentTable::shipped())
}

/// The additive terms behind an SA score, before rescaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaBreakdown {
    pub fragment: f64,
    pub size_penalty: f64,
    pub spiro_penalty: f64,
    pub bridge_penalty: f64,
    pub macrocycle_penalty: f64,
}

impl SaBreakdown {
    pub fn raw(&self) -> f64 {
        self.fragment
            - self.size_penalty
            - self.spiro_penalty
            - self.bridge_penalty
            - self.macrocycle_penalty
    }

    pub fn score(&self) -> SaScore {
        let mut score = 11.0 - (self.raw() - RAW_MIN + 1.0) / (RAW_MAX - RAW_MIN) * 9.0;
        if score > 8.0 {
            score = 8.0 + (score + 1.0 - 9.0).ln();
        }
        SaScore::new(score)
    }
}

pub fn sa_breakdown(m: &Molecule, table: &FragmentTable) -> SaBreakdown {
    let envs = morgan_environments(m, 2);
    let fragment = if envs.is_empty() {
        UNKNOWN_FRAGMENT
    } else {
        envs.iter().map(|e| table.score(e.id)).sum::<f64>() / envs.len() as f64
    };
    let n = m.heavy_atom_count() as f64;
    SaBreakdown {
        fragment,
        size_penalty: n.powf(1.005) - n,
        // stereo is not represented, so that penalty is always zero
        spiro_penalty: (spiro_count(m) as f64 + 1.0).log10(),
        bridge_penalty: (bridgehead_count(m) as f64 + 1.0).log10(),
        macrocycle_penalty: if m.rings().iter().any(|r| r.len() > 8) {
            2f64.log10()
        } else {
            0.0
        },
    }
}

pub fn sa_score_with(m: &Molecule, table: &FragmentTable) -> SaScore {
    sa_breakdown(m, table).score()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    #[test]
    fn table_text_round_trip() {
        let mols: Vec<Molecule> = ["CCO", "CCN", "c1ccccc1O"]
            .iter()
            .map(|s| parse_smiles(s).unwrap())
            .collect();
        let t = FragmentTable::train(&mols);
        let back = FragmentTable::from_text(&t.to_text()).unwrap();
        assert_eq!(back.to_text(), t.to_text());
        assert!(FragmentTable::from_text("12\tx\n").is_err());
    }

    #[test]
    fn bounded() {
        let empty = FragmentTable::default();
        for s in ["C", "CCO", "C1CC2CCC1C2", "c1ccc2ccccc2c1"] {
            let v = sa_score_with(&parse_smiles(s).unwrap(), &empty).value();
            assert!((1.0..=10.0).contains(&v));
        }
    }
}
