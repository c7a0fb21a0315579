//! End-to-end screening run: generate, validate, profile, evolve, filter
//! and rank coformer candidates for one drug.

mod rank;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use rank::{external_scores, rank_candidates, read_scores, stub_score, Ranker, STUB_BANNER};

use crate::dataset::{featurize, load_dataset, split, SplitSpec, Task};
use crate::descriptors::{
    compute_descriptors, molecular_weight, rotatable_bond_count, sa_score, SA_THRESHOLD,
};
use crate::evolve::{run_evolution, EvolutionConfig, ModelObjective};
use crate::gbt::{fit_task, GridSearchSpec, PropertyModels, PropertyProfile, TaskConfig};
use crate::generator::{sample_and_perturb, GenerationBatch, MarkovModel, MAX_LEN};
use crate::metrics::LabelMask;
use crate::molgraph::{canonicalize, read_smiles_lines, validate_smiles, Molecule};

const LOCK_NAME: &str = ".cocrystal.lock";
/// Mutations applied to each pick in `perturb` generation.
const PERTURBATIONS: std::ops::RangeInclusive<usize> = 1..=3;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("stage {stage}: {message}")]
    Stage { stage: Stage, message: String },
    #[error("output directory {0} is locked by another run")]
    Locked(PathBuf),
}

impl PipelineError {
    /// 1 for configuration problems, 2 for everything that fails later.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Config(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Train,
    Generate,
    Validate,
    Profile,
    Evolve,
    Filter,
    Rank,
    Report,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Train => "train",
            Stage::Generate => "generate",
            Stage::Validate => "validate",
            Stage::Profile => "profile",
            Stage::Evolve => "evolve",
            Stage::Filter => "filter",
            Stage::Rank => "rank",
            Stage::Report => "report",
        })
    }
}

fn stage_err(stage: Stage) -> impl Fn(String) -> PipelineError {
    move |message| PipelineError::Stage { stage, message }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorMethod {
    #[default]
    Markov,
    Perturb,
    /// Read candidates from `generator.candidates` instead of generating.
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorSection {
    pub method: GeneratorMethod,
    pub corpus: PathBuf,
    pub candidates: Option<PathBuf>,
}

impl Default for GeneratorSection {
    fn default() -> Self {
        GeneratorSection {
            method: GeneratorMethod::Markov,
            corpus: PathBuf::from("data/coformers.smi"),
            candidates: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub data: PathBuf,
    pub grid: usize,
}

impl Default for TrainSection {
    fn default() -> Self {
        TrainSection {
            data: PathBuf::from("data/cocrystals.csv"),
            grid: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub drug_smiles: String,
    pub output_dir: PathBuf,
    pub model_dir: PathBuf,
    pub batch_size: usize,
    pub seed: u64,
    /// Label mask as `full`, `validation` or three characters of 0/1/*.
    pub mask: String,
    pub evolve: bool,
    /// Evolve only the candidates that fail the filter.
    pub evolve_failures_only: bool,
    /// Drop candidates with MW >= 600, more than 9 rotatable bonds or more
    /// than 39 heavy atoms before profiling.
    pub prefilter: bool,
    /// Retrain the models into `model_dir` before the run.
    pub train: bool,
    pub generator: GeneratorSection,
    pub ranker: Ranker,
    pub training: TrainSection,
    pub evolution: EvolutionConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            drug_smiles: String::new(),
            output_dir: PathBuf::from("out"),
            model_dir: PathBuf::from("models"),
            batch_size: 10_000,
            seed: 0,
            mask: "full".to_string(),
            evolve: true,
            evolve_failures_only: false,
            prefilter: false,
            train: false,
            generator: GeneratorSection::default(),
            ranker: Ranker::Stub,
            training: TrainSection::default(),
            evolution: EvolutionConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        PipelineConfig::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("pipeline config serializes")
    }

    pub fn label_mask(&self) -> Result<LabelMask, PipelineError> {
        self.mask.parse().map_err(PipelineError::Config)
    }

    pub fn drug(&self) -> Result<Molecule, PipelineError> {
        crate::parse_smiles(&self.drug_smiles)
            .map_err(|e| PipelineError::Config(format!("drug {:?}: {e}", self.drug_smiles)))
    }

    /// Checks values and that every input path exists.
    pub fn check(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        self.drug()?;
        self.label_mask()?;
        self.evolution
            .check()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        let exists = |p: &Path, what: &str| {
            if p.exists() {
                Ok(())
            } else {
                Err(PipelineError::Config(format!(
                    "{what} {} not found",
                    p.display()
                )))
            }
        };
        match self.generator.method {
            GeneratorMethod::File => match &self.generator.candidates {
                Some(p) => exists(p, "candidate file")?,
                None => return bad("generator.method = \"file\" needs generator.candidates".into()),
            },
            _ => exists(&self.generator.corpus, "corpus")?,
        }
        if self.train {
            exists(&self.training.data, "training data")?;
        } else {
            for t in ["u", "o", "h"] {
                exists(&self.model_dir.join(format!("{t}.gbt")), "model")?;
            }
        }
        if let Ranker::External { scores } = &self.ranker {
            exists(scores, "score file")?;
        }
        if self.evolve {
            exists(&self.generator.corpus, "corpus")?;
        }
        Ok(())
    }
}

/// Where a candidate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Generated,
    Optimized,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Generated => "generated",
            Provenance::Optimized => "optimized",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Canonical SMILES.
    pub smiles: String,
    pub profile: PropertyProfile,
    pub sa: f64,
    pub provenance: Provenance,
}

impl Candidate {
    pub fn labels_text(&self) -> String {
        self.profile
            .labels
            .iter()
            .map(|&l| if l { '1' } else { '0' })
            .collect()
    }

    pub fn passes(&self, mask: LabelMask) -> bool {
        mask.matches(self.profile.labels) && self.sa <= SA_THRESHOLD
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedCandidate {
    pub candidate: Candidate,
    /// `None` when an external score file has no entry for the candidate.
    pub rank_score: Option<f64>,
}

/// Candidates matching `mask` with SA at or below the threshold, in input
/// order.
pub fn filter_candidates(candidates: &[Candidate], mask: LabelMask) -> Vec<Candidate> {
    candidates
        .iter()
        .filter(|c| c.passes(mask))
        .cloned()
        .collect()
}

/// Selection rule for external candidate corpora: MW below 600, at most 9
/// rotatable bonds and at most 39 heavy atoms.
pub fn prefilter(m: &Molecule) -> bool {
    molecular_weight(m) < 600.0 && rotatable_bond_count(m) <= 9 && m.heavy_atom_count() <= 39
}

/// Fits the three property models on `data` with a grid of `grid` tuples.
pub fn train_models(data: &Path, grid: usize, seed: u64) -> Result<PropertyModels, String> {
    let d = load_dataset(data).map_err(|e| e.to_string())?;
    let x = featurize(&d.records).map_err(|e| e.to_string())?;
    let spec = SplitSpec {
        seed,
        ..SplitSpec::default()
    };
    let (train, test) = split(&d.records, &spec).map_err(|e| e.to_string())?;
    let mut fitted = Vec::new();
    for task in [Task::Unobstructed, Task::Orthogonal, Task::HBondBridging] {
        let config = TaskConfig::new(
            task,
            GridSearchSpec {
                n_samples: grid,
                seed,
                ..GridSearchSpec::default()
            },
            seed,
        );
        let fit =
            fit_task(&x, &d.labels(task), &train, &test, &config).map_err(|e| e.to_string())?;
        fitted.push(fit.model);
    }
    let h = fitted.pop().expect("three models");
    let o = fitted.pop().expect("three models");
    let u = fitted.pop().expect("three models");
    PropertyModels::new(u, o, h).map_err(|e| e.to_string())
}

/// Summary of one run; the full record is in the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub generated: usize,
    pub valid: usize,
    pub unique: usize,
    pub prefiltered_out: usize,
    pub evolved: Option<usize>,
    pub profiled: usize,
    pub ranked: Vec<RankedCandidate>,
    pub warnings: Vec<String>,
}

/// Removes the lock file when the run ends, however it ends.
struct Lock(PathBuf);

impl Lock {
    fn acquire(dir: &Path) -> Result<Lock, PipelineError> {
        let path = dir.join(LOCK_NAME);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(Lock(path)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(PipelineError::Locked(dir.to_path_buf()))
            }
            Err(e) => Err(PipelineError::Config(format!("{}: {e}", path.display()))),
        }
    }
}

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn write(dir: &Path, name: &str, text: &str, stage: Stage) -> Result<(), PipelineError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| stage_err(stage)(format!("{}: {e}", path.display())))
}

fn read_lines(path: &Path, stage: Stage) -> Result<Vec<String>, PipelineError> {
    fs::read_to_string(path)
        .map(|t| read_smiles_lines(&t))
        .map_err(|e| stage_err(stage)(format!("{}: {e}", path.display())))
}

fn generate(config: &PipelineConfig) -> Result<GenerationBatch, PipelineError> {
    let fail = stage_err(Stage::Generate);
    Ok(match config.generator.method {
        GeneratorMethod::File => {
            let path = config.generator.candidates.as_ref().expect("checked");
            GenerationBatch::from_strings(read_lines(path, Stage::Generate)?, "file")
        }
        GeneratorMethod::Markov => {
            let corpus = read_lines(&config.generator.corpus, Stage::Generate)?;
            MarkovModel::fit(&corpus)
                .map_err(|e| fail(e.to_string()))?
                .generate(config.batch_size, config.seed, MAX_LEN)
        }
        GeneratorMethod::Perturb => {
            let corpus = read_lines(&config.generator.corpus, Stage::Generate)?;
            sample_and_perturb(&corpus, config.batch_size, PERTURBATIONS, config.seed)
                .map_err(|e| fail(e.to_string()))?
        }
    })
}

fn profile_all(
    items: &[(String, Molecule)],
    models: &PropertyModels,
    drug: &Molecule,
    provenance: Provenance,
) -> Result<Vec<Candidate>, PipelineError> {
    let drug_desc = compute_descriptors(drug);
    items
        .par_iter()
        .map(|(smiles, m)| {
            let profile = models
                .profile_descriptors(&drug_desc, &compute_descriptors(m))
                .map_err(|e| stage_err(Stage::Profile)(format!("{smiles}: {e}")))?;
            Ok(Candidate {
                smiles: smiles.clone(),
                profile,
                sa: sa_score(m).value(),
                provenance,
            })
        })
        .collect()
}

fn candidate_table(candidates: &[Candidate], mask: LabelMask) -> String {
    let mut out = String::from("smiles\tp_u\tp_o\tp_h\tlabels\tsa\tprovenance\tpasses\n");
    for c in candidates {
        out.push_str(&format!(
            "{}\t{:.6}\t{:.6}\t{:.6}\t{}\t{:.4}\t{}\t{}\n",
            c.smiles,
            c.profile.p_u,
            c.profile.p_o,
            c.profile.p_h,
            c.labels_text(),
            c.sa,
            c.provenance,
            c.passes(mask)
        ));
    }
    out
}

/// The ranked report as CSV. A stub-ranked report starts with a comment
/// line carrying [`STUB_BANNER`].
pub fn report_csv(ranked: &[RankedCandidate], ranker: &Ranker) -> String {
    let mut out = String::new();
    if matches!(ranker, Ranker::Stub) {
        out.push_str(&format!("# {STUB_BANNER}\n"));
    }
    out.push_str("smiles,p_u,p_o,p_h,labels,sa,rank_score,provenance\n");
    for r in ranked {
        let c = &r.candidate;
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{},{:.4},{},{}\n",
            c.smiles,
            c.profile.p_u,
            c.profile.p_o,
            c.profile.p_h,
            c.labels_text(),
            c.sa,
            r.rank_score
                .map_or_else(|| "NA".to_string(), |s| format!("{s:.4}")),
            c.provenance
        ));
    }
    out
}

/// Runs every stage and writes its artifacts under `config.output_dir`:
/// generated.tsv, validated.tsv, profiles.tsv, evolution/ (when enabled),
/// candidates.tsv, report.csv, summary.txt and the resolved config.toml.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutcome, PipelineError> {
    config.check()?;
    let drug = config.drug()?;
    let mask = config.label_mask()?;
    let out = &config.output_dir;
    fs::create_dir_all(out)
        .map_err(|e| PipelineError::Config(format!("{}: {e}", out.display())))?;
    let _lock = Lock::acquire(out)?;
    write(out, "config.toml", &config.to_toml(), Stage::Report)?;
    let mut warnings = Vec::new();

    let models = if config.train {
        let models = train_models(&config.training.data, config.training.grid, config.seed)
            .map_err(stage_err(Stage::Train))?;
        models
            .save_dir(&config.model_dir)
            .map_err(|e| stage_err(Stage::Train)(e.to_string()))?;
        models
    } else {
        PropertyModels::load_dir(&config.model_dir)
            .map_err(|e| PipelineError::Config(e.to_string()))?
    };

    let batch = generate(config)?;
    let mut text = String::from("index\tsmiles\tsource\n");
    for (i, (s, p)) in batch.produced.iter().zip(&batch.provenance).enumerate() {
        text.push_str(&format!("{i}\t{s}\t{p}\n"));
    }
    write(out, "generated.tsv", &text, Stage::Generate)?;

    let checked: Vec<Option<(String, Molecule)>> = batch
        .produced
        .par_iter()
        .map(|s| match validate_smiles(s) {
            (Some(m), r) if r.is_valid() && m.num_atoms() > 0 => Some((canonicalize(&m), m)),
            _ => None,
        })
        .collect();
    let mut seen = HashSet::new();
    let mut unique: Vec<(String, Molecule)> = Vec::new();
    let mut prefiltered_out = 0;
    let mut valid = 0;
    let mut text = String::from("index\tcanonical\tstatus\n");
    for (i, item) in checked.into_iter().enumerate() {
        let status = match item {
            None => {
                text.push_str(&format!("{i}\t\tinvalid\n"));
                continue;
            }
            Some((canon, _)) if seen.contains(&canon) => {
                valid += 1;
                text.push_str(&format!("{i}\t{canon}\tduplicate\n"));
                continue;
            }
            Some((canon, m)) => {
                valid += 1;
                seen.insert(canon.clone());
                let status = if config.prefilter && !prefilter(&m) {
                    prefiltered_out += 1;
                    "prefiltered"
                } else {
                    unique.push((canon.clone(), m));
                    "kept"
                };
                (canon, status)
            }
        };
        text.push_str(&format!("{i}\t{}\t{}\n", status.0, status.1));
    }
    write(out, "validated.tsv", &text, Stage::Validate)?;
    if unique.is_empty() {
        warnings.push(format!(
            "no valid candidates among {} generated",
            batch.len()
        ));
    }

    let mut candidates = profile_all(&unique, &models, &drug, Provenance::Generated)?;
    write(
        out,
        "profiles.tsv",
        &candidate_table(&candidates, mask),
        Stage::Profile,
    )?;

    let mut evolved = None;
    if config.evolve && !unique.is_empty() {
        let initial: Vec<String> = candidates
            .iter()
            .filter(|c| !config.evolve_failures_only || !c.passes(mask))
            .map(|c| c.smiles.clone())
            .collect();
        if initial.is_empty() {
            warnings.push("no candidates left to evolve".to_string());
        } else {
            let training: HashSet<String> = read_lines(&config.generator.corpus, Stage::Evolve)?
                .iter()
                .filter_map(|s| crate::parse_smiles(s).ok().map(|m| canonicalize(&m)))
                .collect();
            let mut evo = config.evolution.clone();
            evo.seed = config.seed;
            let objective = ModelObjective::new(&models, &drug);
            let report = run_evolution(&initial, &evo, &objective, &training)
                .map_err(|e| stage_err(Stage::Evolve)(e.to_string()))?;
            report
                .write_dir(out.join("evolution"))
                .map_err(|e| stage_err(Stage::Evolve)(e.to_string()))?;
            if report.timed_out {
                warnings.push(format!(
                    "evolution timed out after {} iterations",
                    report.iterations
                ));
            }
            let known: HashSet<&str> = candidates.iter().map(|c| c.smiles.as_str()).collect();
            let mut fresh: Vec<(String, Molecule)> = Vec::new();
            let mut added = HashSet::new();
            for ind in &report.population {
                if ind.fitness.feasible
                    && !known.contains(ind.smiles.as_str())
                    && added.insert(ind.smiles.clone())
                {
                    fresh.push((ind.smiles.clone(), ind.molecule.clone()));
                }
            }
            evolved = Some(fresh.len());
            candidates.extend(profile_all(&fresh, &models, &drug, Provenance::Optimized)?);
        }
    }
    write(
        out,
        "candidates.tsv",
        &candidate_table(&candidates, mask),
        Stage::Filter,
    )?;

    let kept = filter_candidates(&candidates, mask);
    let scores: Option<HashMap<String, f64>> = match &config.ranker {
        Ranker::Stub => None,
        Ranker::External { scores } => Some(read_scores(scores).map_err(stage_err(Stage::Rank))?),
    };
    let ranked = rank_candidates(&drug, kept, scores.as_ref());
    write(
        out,
        "report.csv",
        &report_csv(&ranked, &config.ranker),
        Stage::Report,
    )?;

    let outcome = PipelineOutcome {
        generated: batch.len(),
        valid,
        unique: unique.len() + prefiltered_out,
        prefiltered_out,
        evolved,
        profiled: candidates.len(),
        ranked,
        warnings,
    };
    write(out, "summary.txt", &outcome.summary(config), Stage::Report)?;
    for w in &outcome.warnings {
        log::warn!("{w}");
    }
    Ok(outcome)
}

impl PipelineOutcome {
    /// Human-readable run summary.
    pub fn summary(&self, config: &PipelineConfig) -> String {
        let mut s = String::new();
        if matches!(config.ranker, Ranker::Stub) {
            s.push_str(&format!("{STUB_BANNER}\n\n"));
        }
        s.push_str(&format!("drug: {}\n", config.drug_smiles));
        s.push_str(&format!("mask: {} (sa <= {SA_THRESHOLD})\n", config.mask));
        s.push_str(&format!("generated: {}\n", self.generated));
        s.push_str(&format!("valid: {}\n", self.valid));
        s.push_str(&format!("unique valid: {}\n", self.unique));
        if config.prefilter {
            s.push_str(&format!("removed by prefilter: {}\n", self.prefiltered_out));
        }
        match self.evolved {
            Some(n) => s.push_str(&format!("new from evolution: {n}\n")),
            None => s.push_str("evolution: skipped\n"),
        }
        s.push_str(&format!("profiled: {}\n", self.profiled));
        s.push_str(&format!("reported: {}\n", self.ranked.len()));
        for (i, r) in self.ranked.iter().take(10).enumerate() {
            s.push_str(&format!(
                "{:>3}. {} score={} labels={} sa={:.2}\n",
                i + 1,
                r.candidate.smiles,
                r.rank_score
                    .map_or_else(|| "NA".to_string(), |v| format!("{v:.2}")),
                r.candidate.labels_text(),
                r.candidate.sa
            ));
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn candidate(smiles: &str, labels: [bool; 3], sa: f64) -> Candidate {
        Candidate {
            smiles: smiles.to_string(),
            profile: PropertyProfile {
                p_u: 0.5,
                p_o: 0.5,
                p_h: 0.5,
                labels,
            },
            sa,
            provenance: Provenance::Generated,
        }
    }

    #[test]
    fn filter_semantics() {
        let full = candidate("CCO", [true, true, false], 2.1);
        assert_eq!(filter_candidates(&[full.clone()], LabelMask::FULL), [full]);
        let no_o = candidate("CCN", [true, false, false], 2.1);
        assert!(filter_candidates(&[no_o.clone()], LabelMask::FULL).is_empty());
        assert_eq!(
            filter_candidates(&[no_o.clone()], LabelMask::VALIDATION),
            [no_o]
        );
        let edge = candidate("CCC", [true, true, false], 3.0);
        assert_eq!(filter_candidates(&[edge.clone()], LabelMask::FULL), [edge]);
        assert!(!candidate("CCC", [true, true, false], 3.0001).passes(LabelMask::FULL));
    }

    #[test]
    fn stub_ranking() {
        let drug = crate::parse_smiles("CC").unwrap();
        let ranked = rank_candidates(
            &drug,
            vec![
                candidate("OCCO", [true; 3], 1.0),
                candidate("CCO", [true; 3], 1.0),
            ],
            None,
        );
        // a drug without donors or acceptors scores zero everywhere
        assert!(ranked.iter().all(|r| r.rank_score == Some(0.0)));
        assert_eq!(ranked[0].candidate.smiles, "CCO");
        let acid = crate::parse_smiles("OC(=O)c1ccccc1").unwrap();
        let amine = crate::parse_smiles("NCC").unwrap();
        assert_eq!(stub_score(&acid, &amine), 2.0);
    }

    #[test]
    fn external_ranking() {
        let drug = crate::parse_smiles("CC").unwrap();
        let table = external_scores("smiles,score\nOCC,46.70\nc1ccccc1,12.5\n").unwrap();
        let pool = vec![
            candidate("c1ccccc1", [true; 3], 1.0),
            candidate("CCN", [true; 3], 1.0),
            candidate("CCO", [true; 3], 1.0),
        ];
        let ranked = rank_candidates(&drug, pool, Some(&table));
        let order: Vec<&str> = ranked.iter().map(|r| r.candidate.smiles.as_str()).collect();
        assert_eq!(order, ["CCO", "c1ccccc1", "CCN"]);
        assert_eq!(ranked[0].rank_score, Some(46.70));
        assert_eq!(ranked[2].rank_score, None);
        assert!(external_scores("CCO,1\nCCN,x\n").is_err());
    }

    #[test]
    fn prefilter_limits() {
        assert!(prefilter(&crate::parse_smiles("O=C(O)C=CC(=O)O").unwrap()));
        let long = format!("C{}O", "C".repeat(12));
        assert!(!prefilter(&crate::parse_smiles(&long).unwrap()));
    }

    #[test]
    fn config_round_trip() {
        let mut c = PipelineConfig {
            drug_smiles: "CC".into(),
            ..PipelineConfig::default()
        };
        c.ranker = Ranker::External {
            scores: "s.csv".into(),
        };
        let back = PipelineConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert!(PipelineConfig::from_toml("bogus = 1").is_err());
        let e = PipelineConfig::default().check().unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn report_banner() {
        let r = vec![RankedCandidate {
            candidate: candidate("CCO", [true, true, false], 2.0),
            rank_score: None,
        }];
        let stub = report_csv(&r, &Ranker::Stub);
        assert!(stub.starts_with("# stub ranker"));
        let ext = report_csv(&r, &Ranker::External { scores: "x".into() });
        assert_eq!(
            ext,
            "smiles,p_u,p_o,p_h,labels,sa,rank_score,provenance\n\
             CCO,0.500000,0.500000,0.500000,110,2.0000,NA,generated\n"
        );
    }
}
