//! Generation-quality counters and rank statistics.

mod stats;

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

pub use stats::{
    holm_adjust, mann_whitney, mann_whitney_one_sided, midranks, rank_sum_distribution,
    MannWhitney, EXACT_LIMIT,
};

use crate::descriptors::{diversity, morgan_fingerprint, sa_score, SA_THRESHOLD};
use crate::gbt::PropertyModels;
use crate::molgraph::{canonicalize, validate_smiles, Molecule};

/// Required label per task (u, o, h); `None` leaves the task unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelMask(pub [Option<bool>; 3]);

impl LabelMask {
    /// Unobstructed planes and orthogonal planes present, no H-bond bridging.
    pub const FULL: LabelMask = LabelMask([Some(true), Some(true), Some(false)]);
    /// The two tabletability parameters only: u=1, h=0.
    pub const VALIDATION: LabelMask = LabelMask([Some(true), None, Some(false)]);

    pub fn matches(&self, labels: [bool; 3]) -> bool {
        self.0
            .iter()
            .zip(labels)
            .all(|(want, got)| want.is_none_or(|w| w == got))
    }
}

impl Default for LabelMask {
    fn default() -> Self {
        LabelMask::FULL
    }
}

impl fmt::Display for LabelMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for want in self.0 {
            f.write_str(match want {
                Some(true) => "1",
                Some(false) => "0",
                None => "*",
            })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for LabelMask {
    type Err = String;

    /// Three characters from `0`, `1` and `*`, or the names `full` and
    /// `validation`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => return Ok(LabelMask::FULL),
            "validation" => return Ok(LabelMask::VALIDATION),
            _ => {}
        }
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 3 {
            return Err(format!("label mask {s:?} must have three positions"));
        }
        let mut mask = [None; 3];
        for (slot, c) in mask.iter_mut().zip(chars) {
            *slot = match c {
                '1' => Some(true),
                '0' => Some(false),
                '*' => None,
                _ => return Err(format!("label mask {s:?}: unexpected {c:?}")),
            };
        }
        Ok(LabelMask(mask))
    }
}

/// `100 * num / den` with a single rounding; zero when `den` is zero.
pub fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        (100 * num) as f64 / den as f64
    }
}

/// Counters over one generated batch: generated, valid, duplicates, novel,
/// on-target and synthesizable on-target.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GenerationMetrics {
    pub g: usize,
    pub v: usize,
    pub d: usize,
    pub n: usize,
    pub c: usize,
    pub s: usize,
    pub validity_pct: f64,
    pub duplicates_pct: f64,
    /// N over V.
    pub novelty_pct: f64,
    /// N over the unique valid count V - D.
    pub novelty_unique_pct: f64,
    pub target_pct: f64,
    /// Undefined for fewer than two target molecules.
    pub diversity_of_target: Option<f64>,
    /// Canonical SMILES of the S set, sorted.
    pub target: Vec<String>,
}

impl GenerationMetrics {
    pub fn from_counts(g: usize, v: usize, d: usize, n: usize, c: usize, s: usize) -> Self {
        GenerationMetrics {
            g,
            v,
            d,
            n,
            c,
            s,
            validity_pct: percent(v, g),
            duplicates_pct: percent(d, v),
            novelty_pct: percent(n, v),
            novelty_unique_pct: percent(n, v - d),
            target_pct: percent(s, g),
            diversity_of_target: None,
            target: Vec::new(),
        }
    }

    pub fn unique_valid(&self) -> usize {
        self.v - self.d
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("generated", self.g.to_string()),
            ("valid", self.v.to_string()),
            ("duplicates", self.d.to_string()),
            ("unique_valid", self.unique_valid().to_string()),
            ("novel", self.n.to_string()),
            ("on_target", self.c.to_string()),
            ("synthesizable", self.s.to_string()),
            ("validity_pct", format!("{:.2}", self.validity_pct)),
            ("duplicates_pct", format!("{:.2}", self.duplicates_pct)),
            ("novelty_pct", format!("{:.2}", self.novelty_pct)),
            (
                "novelty_unique_pct",
                format!("{:.2}", self.novelty_unique_pct),
            ),
            ("target_pct", format!("{:.2}", self.target_pct)),
            (
                "diversity_of_target",
                self.diversity_of_target
                    .map_or_else(|| "NA".to_string(), |d| format!("{d:.4}")),
            ),
        ]
    }

    /// One `key=value` line per field.
    pub fn to_key_values(&self) -> String {
        self.fields()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn csv_header() -> String {
        GenerationMetrics::default()
            .fields()
            .into_iter()
            .map(|(k, _)| k)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn csv_row(&self) -> String {
        self.fields()
            .into_iter()
            .map(|(_, v)| v)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Mean pairwise Tanimoto distance of the given SMILES; `None` below two
/// molecules or if one fails to parse.
pub fn diversity_of_target(smiles: &[String]) -> Option<f64> {
    let fps: Option<Vec<_>> = smiles
        .iter()
        .map(|s| crate::parse_smiles(s).ok().map(|m| morgan_fingerprint(&m)))
        .collect();
    diversity(&fps?).ok()
}

/// Counts a batch. `labels` returns the thresholded (u, o, h) labels of a
/// candidate, or `None` when it cannot be profiled; `training` holds
/// canonical SMILES.
pub fn compute_metrics<F>(
    batch: &[String],
    training: &HashSet<String>,
    labels: F,
    mask: LabelMask,
) -> GenerationMetrics
where
    F: Fn(&Molecule) -> Option<[bool; 3]> + Sync,
{
    let canonical: Vec<Option<(String, Molecule)>> = batch
        .par_iter()
        .map(|s| match validate_smiles(s) {
            (Some(m), report) if report.is_valid() && m.num_atoms() > 0 => {
                Some((canonicalize(&m), m))
            }
            _ => None,
        })
        .collect();
    let mut unique: HashMap<&str, &Molecule> = HashMap::new();
    let mut v = 0;
    for (smi, m) in canonical.iter().flatten() {
        v += 1;
        unique.entry(smi.as_str()).or_insert(m);
    }
    let d = v - unique.len();
    let mut novel: Vec<(&str, &Molecule)> = unique
        .into_iter()
        .filter(|(s, _)| !training.contains(*s))
        .collect();
    novel.sort_by_key(|(s, _)| *s);
    let judged: Vec<(bool, bool)> = novel
        .par_iter()
        .map(|(_, m)| match labels(m) {
            Some(l) if mask.matches(l) => (true, sa_score(m).value() <= SA_THRESHOLD),
            _ => (false, false),
        })
        .collect();
    let c = judged.iter().filter(|j| j.0).count();
    let target: Vec<String> = novel
        .iter()
        .zip(&judged)
        .filter(|(_, j)| j.1)
        .map(|((s, _), _)| s.to_string())
        .collect();
    let mut out = GenerationMetrics::from_counts(batch.len(), v, d, novel.len(), c, target.len());
    out.diversity_of_target = diversity_of_target(&target);
    out.target = target;
    out
}

/// [`compute_metrics`] with labels from trained models against `drug`.
pub fn compute_metrics_with_models(
    batch: &[String],
    training: &HashSet<String>,
    models: &PropertyModels,
    drug: &Molecule,
    mask: LabelMask,
) -> GenerationMetrics {
    let drug_desc = crate::descriptors::compute_descriptors(drug);
    compute_metrics(
        batch,
        training,
        |m| {
            models
                .profile_descriptors(&drug_desc, &crate::descriptors::compute_descriptors(m))
                .ok()
                .map(|p| p.labels)
        },
        mask,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn exact_percentages() {
        let m = GenerationMetrics::from_counts(10000, 9457, 0, 0, 0, 563);
        assert_eq!(m.validity_pct, 94.57);
        assert_eq!(m.target_pct, 5.63);
        assert_eq!(GenerationMetrics::default().validity_pct, 0.0);
    }

    #[test]
    fn hand_counted_batch() {
        let batch = strings(&["CCO", "OCC", "C(", "c1ccccc1", "CCN", "Xx", "CC.O"]);
        let training: HashSet<String> = [canonicalize(&crate::parse_smiles("CCN").unwrap())]
            .into_iter()
            .collect();
        let m = compute_metrics(
            &batch,
            &training,
            |_| Some([true, true, false]),
            LabelMask::FULL,
        );
        // valid: CCO, OCC, benzene, CCN, the two-fragment CC.O
        assert_eq!((m.g, m.v, m.d, m.n), (7, 5, 1, 3));
        assert_eq!(m.c, 3);
        assert_eq!(m.validity_pct, percent(5, 7));
        assert_eq!(m.novelty_pct, 60.0);
        assert_eq!(m.novelty_unique_pct, 75.0);
        assert!(m.s <= m.c && m.s == m.target.len());
    }

    #[test]
    fn corpus_against_itself_has_no_novelty() {
        let batch = strings(&["CCO", "c1ccncc1", "O=C(O)C=CC(=O)O"]);
        let training = batch
            .iter()
            .map(|s| canonicalize(&crate::parse_smiles(s).unwrap()))
            .collect();
        let m = compute_metrics(&batch, &training, |_| Some([true; 3]), LabelMask::FULL);
        assert_eq!(m.n, 0);
        assert_eq!(m.novelty_pct, 0.0);
    }

    #[test]
    fn empty_batch() {
        let m = compute_metrics(&[], &HashSet::new(), |_| None, LabelMask::FULL);
        assert_eq!(m, GenerationMetrics::default());
    }

    #[test]
    fn masks() {
        assert!(LabelMask::FULL.matches([true, true, false]));
        assert!(!LabelMask::FULL.matches([true, false, false]));
        assert!(LabelMask::VALIDATION.matches([true, false, false]));
        assert_eq!("1*0".parse::<LabelMask>().unwrap(), LabelMask::VALIDATION);
        assert_eq!(LabelMask::FULL.to_string(), "110");
        assert!("11".parse::<LabelMask>().is_err());
    }

    #[test]
    fn target_diversity() {
        assert_eq!(diversity_of_target(&strings(&["CCO", "CCO"])), Some(0.0));
        assert_eq!(diversity_of_target(&strings(&["CCO"])), None);
    }

    #[test]
    fn report_shapes() {
        let m = GenerationMetrics::from_counts(4, 2, 0, 1, 1, 1);
        assert!(m.to_key_values().contains("validity_pct=50.00\n"));
        assert!(m.to_key_values().contains("diversity_of_target=NA\n"));
        assert_eq!(
            GenerationMetrics::csv_header().split(',').count(),
            m.csv_row().split(',').count()
        );
    }
}
