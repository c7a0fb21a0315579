use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::scores::BinaryScores;
use super::{train, GbtError, GbtParams};
use crate::dataset::FeatureMatrix;
use crate::rng::{derive_seed, stream};

/// Training rows plus, optionally, the same rows with the A and B
/// coformer columns exchanged. Mirror rows join every training fold
/// alongside their originals and never enter validation.
#[derive(Debug, Clone)]
pub struct TrainingSet {
    pub x: FeatureMatrix,
    pub y: Vec<bool>,
    pub mirror: Option<FeatureMatrix>,
}

impl TrainingSet {
    pub fn new(x: FeatureMatrix, y: Vec<bool>) -> Self {
        TrainingSet { x, y, mirror: None }
    }

    /// Rows `idx` (and their mirrors) as one training matrix.
    pub fn rows(&self, idx: &[usize]) -> Result<(FeatureMatrix, Vec<bool>), GbtError> {
        let mut x = self.x.select_rows(idx);
        let mut y: Vec<bool> = idx.iter().map(|&i| self.y[i]).collect();
        if let Some(m) = &self.mirror {
            x = x.vstack(&m.select_rows(idx))?;
            y.extend_from_within(..);
        }
        Ok((x, y))
    }

    pub fn fit(&self, params: &GbtParams) -> Result<super::GbtModel, GbtError> {
        let all: Vec<usize> = (0..self.y.len()).collect();
        let (x, y) = self.rows(&all)?;
        train(&x, &y, params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpace {
    /// Sampled log-uniformly.
    pub learning_rate: (f64, f64),
    pub n_estimators: (usize, usize),
    pub subsample: (f64, f64),
    pub max_depth: (usize, usize),
}

impl Default for ParamSpace {
    fn default() -> Self {
        ParamSpace {
            learning_rate: (0.01, 0.3),
            n_estimators: (50, 500),
            subsample: (0.5, 1.0),
            max_depth: (2, 8),
        }
    }
}

impl ParamSpace {
    pub fn sample(&self, rng: &mut impl Rng) -> GbtParams {
        let (lo, hi) = self.learning_rate;
        let learning_rate = if lo == hi {
            lo
        } else {
            rng.gen_range(lo.ln()..=hi.ln()).exp()
        };
        let (slo, shi) = self.subsample;
        GbtParams {
            learning_rate,
            n_estimators: rng.gen_range(self.n_estimators.0..=self.n_estimators.1),
            subsample: if slo == shi {
                slo
            } else {
                rng.gen_range(slo..=shi)
            },
            max_depth: rng.gen_range(self.max_depth.0..=self.max_depth.1),
            ..GbtParams::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSearchSpec {
    pub n_samples: usize,
    pub folds: usize,
    pub seed: u64,
    pub space: ParamSpace,
}

impl Default for GridSearchSpec {
    fn default() -> Self {
        GridSearchSpec {
            n_samples: 500,
            folds: 10,
            seed: 0,
            space: ParamSpace::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldMetrics {
    pub accuracy: f64,
    pub f1: f64,
    pub macro_f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateResult {
    pub params: GbtParams,
    pub folds: Vec<FoldMetrics>,
    pub mean_f1: f64,
    pub mean_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub candidates: Vec<CandidateResult>,
    pub best: usize,
    /// Out-of-fold probabilities of the best candidate, one per row.
    pub oof: Vec<f64>,
}

impl CvReport {
    pub fn best_params(&self) -> GbtParams {
        self.candidates[self.best].params
    }

    /// One row per (candidate, fold).
    pub fn to_tsv(&self) -> String {
        let mut s = String::from(
            "candidate\tlearning_rate\tn_estimators\tsubsample\tmax_depth\tfold\taccuracy\tf1\tmacro_f1\n",
        );
        for (c, r) in self.candidates.iter().enumerate() {
            for (k, f) in r.folds.iter().enumerate() {
                let p = &r.params;
                writeln!(
                    s,
                    "{c}\t{:.6}\t{}\t{:.4}\t{}\t{k}\t{:.6}\t{:.6}\t{:.6}",
                    p.learning_rate,
                    p.n_estimators,
                    p.subsample,
                    p.max_depth,
                    f.accuracy,
                    f.f1,
                    f.macro_f1
                )
                .unwrap();
            }
        }
        s
    }
}

/// Fold number for every row. Each class is shuffled and dealt round-robin,
/// so every fold's positive count is within one of its proportional share.
pub fn stratified_folds(y: &[bool], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = stream(seed, &[2]);
    let mut pos: Vec<usize> = (0..y.len()).filter(|&i| y[i]).collect();
    let mut neg: Vec<usize> = (0..y.len()).filter(|&i| !y[i]).collect();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut fold = vec![0; y.len()];
    for (j, &i) in pos.iter().chain(&neg).enumerate() {
        fold[i] = j % k;
    }
    fold
}

/// Samples `n_samples` parameter tuples and cross-validates each.
pub fn random_grid_search(
    data: &TrainingSet,
    spec: &GridSearchSpec,
) -> Result<(GbtParams, CvReport), GbtError> {
    let mut rng = stream(spec.seed, &[3]);
    let candidates: Vec<GbtParams> = (0..spec.n_samples)
        .map(|_| spec.space.sample(&mut rng))
        .collect();
    let report = search_candidates(data, &candidates, spec.folds, spec.seed)?;
    Ok((report.best_params(), report))
}

/// Stratified k-fold evaluation of explicit candidates; the winner has the
/// highest mean positive-class F1, then the highest mean accuracy. Each
/// candidate gets its own training seed derived from `seed`.
pub fn search_candidates(
    data: &TrainingSet,
    candidates: &[GbtParams],
    folds: usize,
    seed: u64,
) -> Result<CvReport, GbtError> {
    let n = data.y.len();
    let pos = data.y.iter().filter(|&&t| t).count();
    if folds < 2 || n < folds || pos < folds || n - pos < folds {
        return Err(GbtError::TooFewRows { rows: n, folds });
    }
    if candidates.is_empty() {
        return Err(GbtError::Param("no candidates".into()));
    }
    let assignment = stratified_folds(&data.y, folds, seed);
    let split: Vec<(Vec<usize>, Vec<usize>)> = (0..folds)
        .map(|f| (0..n).partition(|&i| assignment[i] != f))
        .collect();
    let candidates: Vec<GbtParams> = candidates
        .iter()
        .enumerate()
        .map(|(c, p)| GbtParams {
            seed: derive_seed(seed, &[4, c as u64]),
            ..*p
        })
        .collect();
    let jobs: Vec<(usize, usize)> = (0..candidates.len())
        .flat_map(|c| (0..folds).map(move |f| (c, f)))
        .collect();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let outputs: Vec<(FoldMetrics, Vec<f64>)> = jobs
        .par_iter()
        .map(|&(c, f)| {
            let (train_idx, val_idx) = &split[f];
            let (x, y) = data.rows(train_idx)?;
            let params = GbtParams {
                seed: derive_seed(candidates[c].seed, &[f as u64]),
                ..candidates[c]
            };
            let model = train(&x, &y, &params)?;
            let val = data.x.select_rows(val_idx);
            let prob = model.predict_matrix(&val)?;
            let truth: Vec<bool> = val_idx.iter().map(|&i| data.y[i]).collect();
            let s = BinaryScores::at_threshold(&prob, &truth, 0.5);
            let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            if k.is_multiple_of(folds) {
                log::debug!(
                    "cross-validated {}/{} candidates",
                    k / folds,
                    candidates.len()
                );
            }
            Ok((
                FoldMetrics {
                    accuracy: s.accuracy(),
                    f1: s.f1(),
                    macro_f1: s.macro_f1(),
                },
                prob,
            ))
        })
        .collect::<Result<_, GbtError>>()?;
    let mut results = Vec::with_capacity(candidates.len());
    for (c, params) in candidates.iter().enumerate() {
        let folds_m: Vec<FoldMetrics> = (0..folds).map(|f| outputs[c * folds + f].0).collect();
        let mean = |g: fn(&FoldMetrics) -> f64| folds_m.iter().map(g).sum::<f64>() / folds as f64;
        results.push(CandidateResult {
            params: *params,
            mean_f1: mean(|m| m.f1),
            mean_accuracy: mean(|m| m.accuracy),
            folds: folds_m,
        });
    }
    let mut best = 0;
    for (c, r) in results.iter().enumerate() {
        let b = &results[best];
        if r.mean_f1 > b.mean_f1 || r.mean_f1 == b.mean_f1 && r.mean_accuracy > b.mean_accuracy {
            best = c;
        }
    }
    let mut oof = vec![0.0; n];
    for (f, (_, val_idx)) in split.iter().enumerate() {
        for (&i, &p) in val_idx.iter().zip(&outputs[best * folds + f].1) {
            oof[i] = p;
        }
    }
    Ok(CvReport {
        candidates: results,
        best,
        oof,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn data(n: usize) -> TrainingSet {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for _ in 0..n {
            let a: f64 = rng.gen_range(-1.0..1.0);
            y.push(a + rng.gen_range(-0.5..0.5) > 0.3);
            rows.push(vec![a, rng.gen()]);
        }
        TrainingSet::new(
            FeatureMatrix::from_rows(vec!["a".into(), "b".into()], &rows).unwrap(),
            y,
        )
    }

    #[test]
    fn folds_are_stratified_partitions() {
        let d = data(233);
        let k = 10;
        let fold = stratified_folds(&d.y, k, 1);
        let rate = d.y.iter().filter(|&&t| t).count() as f64 / d.y.len() as f64;
        for f in 0..k {
            let members: Vec<usize> = (0..d.y.len()).filter(|&i| fold[i] == f).collect();
            let pos = members.iter().filter(|&&i| d.y[i]).count() as f64;
            assert!((pos - rate * members.len() as f64).abs() <= 1.0);
        }
        assert!(fold.iter().all(|&f| f < k));
    }

    #[test]
    fn single_candidate_wins() {
        let d = data(120);
        let space = ParamSpace {
            learning_rate: (0.05, 0.05),
            n_estimators: (20, 20),
            subsample: (1.0, 1.0),
            max_depth: (2, 2),
        };
        let spec = GridSearchSpec {
            n_samples: 1,
            folds: 5,
            seed: 3,
            space,
        };
        let (best, report) = random_grid_search(&d, &spec).unwrap();
        assert_eq!(
            (
                best.learning_rate,
                best.n_estimators,
                best.subsample,
                best.max_depth
            ),
            (0.05, 20, 1.0, 2)
        );
        assert_eq!(report.candidates[0].folds.len(), 5);
        assert_eq!(report.oof.len(), 120);
        assert!(report.oof.iter().all(|&p| p > 0.0 && p < 1.0));
    }

    #[test]
    fn search_is_deterministic() {
        let d = data(150);
        let spec = GridSearchSpec {
            n_samples: 3,
            folds: 3,
            seed: 4,
            space: ParamSpace {
                n_estimators: (5, 30),
                ..ParamSpace::default()
            },
        };
        assert_eq!(
            random_grid_search(&d, &spec).unwrap(),
            random_grid_search(&d, &spec).unwrap()
        );
    }

    #[test]
    fn too_few_rows() {
        let d = data(8);
        assert!(search_candidates(&d, &[GbtParams::default()], 10, 0).is_err());
    }

    #[test]
    fn sampled_params_in_range() {
        let space = ParamSpace::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..500 {
            let p = space.sample(&mut rng);
            assert!((0.01..=0.3).contains(&p.learning_rate));
            assert!((50..=500).contains(&p.n_estimators));
            assert!((0.5..=1.0).contains(&p.subsample));
            assert!((2..=8).contains(&p.max_depth));
        }
    }
}
