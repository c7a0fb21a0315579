use std::path::Path;

use super::scores::BinaryScores;
use super::search::{random_grid_search, CvReport, GridSearchSpec, TrainingSet};
use super::threshold::{tune_threshold, ThresholdChoice};
use super::{GbtError, GbtModel};
use crate::dataset::{
    engineer_features, pair_feature_names, select_features, DatasetError, FeatureMatrix, Selection,
    Task,
};
use crate::descriptors::{compute_descriptors, DescriptorVector};
use crate::molgraph::Molecule;

/// Calibrated probabilities for the three plasticity properties and the
/// labels obtained from each model's stored threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyProfile {
    pub p_u: f64,
    pub p_o: f64,
    pub p_h: f64,
    pub labels: [bool; 3],
}

impl PropertyProfile {
    pub fn from_probabilities(p: [f64; 3], thresholds: [f64; 3]) -> Self {
        PropertyProfile {
            p_u: p[0],
            p_o: p[1],
            p_h: p[2],
            labels: [0, 1, 2].map(|k| p[k] >= thresholds[k]),
        }
    }

    pub fn probability(&self, task: Task) -> f64 {
        [self.p_u, self.p_o, self.p_h][task.index()]
    }

    pub fn label(&self, task: Task) -> bool {
        self.labels[task.index()]
    }
}

/// The three task models with their columns resolved against the pair
/// feature layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyModels {
    models: [GbtModel; 3],
    columns: [Vec<usize>; 3],
}

fn resolve(model: &GbtModel) -> Result<Vec<usize>, GbtError> {
    let names = pair_feature_names();
    model
        .manifest
        .iter()
        .map(|m| {
            names
                .iter()
                .position(|n| n == m)
                .ok_or_else(|| DatasetError::Shape(format!("unknown pair feature {m:?}")).into())
        })
        .collect()
}

impl PropertyModels {
    pub fn new(u: GbtModel, o: GbtModel, h: GbtModel) -> Result<Self, GbtError> {
        let columns = [resolve(&u)?, resolve(&o)?, resolve(&h)?];
        Ok(PropertyModels {
            models: [u, o, h],
            columns,
        })
    }

    pub fn model(&self, task: Task) -> &GbtModel {
        &self.models[task.index()]
    }

    fn file(dir: &Path, task: Task) -> std::path::PathBuf {
        dir.join(format!("{}.gbt", task.code()))
    }

    /// Reads `u.gbt`, `o.gbt` and `h.gbt` from a directory.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, GbtError> {
        let dir = dir.as_ref();
        let [u, o, h] = Task::ALL;
        PropertyModels::new(
            GbtModel::load(Self::file(dir, u))?,
            GbtModel::load(Self::file(dir, o))?,
            GbtModel::load(Self::file(dir, h))?,
        )
    }

    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<(), GbtError> {
        std::fs::create_dir_all(dir.as_ref())?;
        for t in Task::ALL {
            self.model(t).save(Self::file(dir.as_ref(), t))?;
        }
        Ok(())
    }

    pub fn thresholds(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.models[k].threshold)
    }

    /// Profile of a drug (position A) paired with a coformer (position B).
    pub fn profile_descriptors(
        &self,
        drug: &DescriptorVector,
        coformer: &DescriptorVector,
    ) -> Result<PropertyProfile, GbtError> {
        let pair = engineer_features(drug, coformer);
        let mut p = [0.0; 3];
        for k in 0..3 {
            let x: Vec<f64> = self.columns[k].iter().map(|&j| pair.values()[j]).collect();
            p[k] = self.models[k].predict_proba(&x)?;
        }
        Ok(PropertyProfile::from_probabilities(p, self.thresholds()))
    }

    pub fn profile(
        &self,
        drug: &Molecule,
        coformer: &Molecule,
    ) -> Result<PropertyProfile, GbtError> {
        self.profile_descriptors(&compute_descriptors(drug), &compute_descriptors(coformer))
    }
}

pub fn predict_profile(
    models: &PropertyModels,
    drug: &Molecule,
    coformer: &Molecule,
) -> Result<PropertyProfile, GbtError> {
    models.profile(drug, coformer)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskConfig {
    pub task: Task,
    pub grid: GridSearchSpec,
    /// Number of features kept by selection.
    pub k: usize,
    /// Replace the 0.5 decision threshold with the precision = recall point
    /// of the out-of-fold predictions.
    pub tune_threshold: bool,
    pub seed: u64,
}

impl TaskConfig {
    /// Threshold tuning is applied to the minority-class orthogonal task.
    pub fn new(task: Task, grid: GridSearchSpec, seed: u64) -> Self {
        TaskConfig {
            task,
            grid,
            k: task.selected_features(),
            tune_threshold: task == Task::Orthogonal,
            seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TaskFit {
    pub model: GbtModel,
    pub selection: Selection,
    pub report: CvReport,
    /// Precision = recall point of the out-of-fold predictions.
    pub tuned: ThresholdChoice,
    pub oof_default: BinaryScores,
    pub oof_tuned: BinaryScores,
    pub test_default: BinaryScores,
    pub test_tuned: BinaryScores,
}

/// Selection, grid search, threshold tuning and a final fit on the
/// training rows, then a single evaluation on the test rows. When the
/// selection keeps per-coformer columns every training row is also used
/// with A and B exchanged.
pub fn fit_task(
    features: &FeatureMatrix,
    labels: &[bool],
    train_idx: &[usize],
    test_idx: &[usize],
    config: &TaskConfig,
) -> Result<TaskFit, GbtError> {
    let x_train = features.select_rows(train_idx);
    let y_train: Vec<bool> = train_idx.iter().map(|&i| labels[i]).collect();
    let selection = select_features(&x_train, &y_train, config.k, config.seed)?;
    log::info!(
        "{}: kept {} of {} columns ({} constant, {} correlated)",
        config.task,
        selection.indices.len(),
        features.n_cols(),
        selection.constant.len(),
        selection.correlated.len()
    );
    let mirror = selection
        .uses_raw_columns()
        .then(|| x_train.swapped().select_columns(&selection.indices));
    let data = TrainingSet {
        x: x_train.select_columns(&selection.indices),
        y: y_train.clone(),
        mirror,
    };
    let (best, report) = random_grid_search(&data, &config.grid)?;
    log::info!(
        "{}: best lr={:.4} trees={} subsample={:.3} depth={} cv f1={:.4} acc={:.4}",
        config.task,
        best.learning_rate,
        best.n_estimators,
        best.subsample,
        best.max_depth,
        report.candidates[report.best].mean_f1,
        report.candidates[report.best].mean_accuracy
    );
    let tuned = tune_threshold(&report.oof, &y_train);
    let mut model = data.fit(&best)?;
    model.task = config.task.column().to_string();
    if config.tune_threshold {
        model.threshold = tuned.threshold;
    }
    let x_test = features
        .select_rows(test_idx)
        .select_columns(&selection.indices);
    let y_test: Vec<bool> = test_idx.iter().map(|&i| labels[i]).collect();
    let prob = model.predict_matrix(&x_test)?;
    Ok(TaskFit {
        oof_default: BinaryScores::at_threshold(&report.oof, &y_train, 0.5),
        oof_tuned: BinaryScores::at_threshold(&report.oof, &y_train, tuned.threshold),
        test_default: BinaryScores::at_threshold(&prob, &y_test, 0.5),
        test_tuned: BinaryScores::at_threshold(&prob, &y_test, tuned.threshold),
        model,
        selection,
        report,
        tuned,
    })
}
