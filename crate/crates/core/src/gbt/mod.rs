//! Gradient-boosted decision trees for binary classification.

mod io;
mod profile;
mod scores;
mod search;
mod threshold;
mod train;

use thiserror::Error;

pub use profile::{
    fit_task, predict_profile, PropertyModels, PropertyProfile, TaskConfig, TaskFit,
};
pub use scores::BinaryScores;
pub use search::{
    random_grid_search, search_candidates, stratified_folds, CandidateResult, CvReport,
    FoldMetrics, GridSearchSpec, ParamSpace, TrainingSet,
};
pub use threshold::{tune_threshold, ThresholdChoice};
pub use train::{train, train_detailed, Trained};

use crate::dataset::{DatasetError, FeatureMatrix};

#[derive(Debug, Error)]
pub enum GbtError {
    #[error("labels contain a single class")]
    SingleClass,
    #[error("{rows} rows but {labels} labels")]
    LabelCount { rows: usize, labels: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("expected {expected} features, got {got}")]
    Manifest { expected: usize, got: usize },
    #[error("model file line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("too few rows ({rows}) for {folds} folds")]
    TooFewRows { rows: usize, folds: usize },
    #[error(transparent)]
    Data(#[from] DatasetError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbtParams {
    pub learning_rate: f64,
    pub n_estimators: usize,
    pub subsample: f64,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub seed: u64,
}

impl Default for GbtParams {
    fn default() -> Self {
        GbtParams {
            learning_rate: 0.1,
            n_estimators: 100,
            subsample: 1.0,
            max_depth: 3,
            min_samples_leaf: 1,
            seed: 0,
        }
    }
}

impl GbtParams {
    fn check(&self) -> Result<(), GbtError> {
        let bad = |m: &str| Err(GbtError::Param(m.to_string()));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return bad("subsample must be in (0, 1]");
        }
        if self.max_depth == 0 {
            return bad("max_depth must be at least 1");
        }
        if self.min_samples_leaf == 0 {
            return bad("min_samples_leaf must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf(f64),
}

/// Regression tree stored as a node array; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf(value: f64) -> Tree {
        Tree {
            nodes: vec![Node::Leaf(value)],
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let mut k = 0;
        loop {
            match self.nodes[k] {
                Node::Leaf(v) => return v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => k = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, k: usize) -> usize {
            match t.nodes[k] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
            }
        }
        go(self, 0)
    }
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Margins beyond this would round the probability to exactly 0 or 1.
const MAX_MARGIN: f64 = 30.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GbtModel {
    pub trees: Vec<Tree>,
    pub learning_rate: f64,
    /// Prior log-odds of the positive class.
    pub base_score: f64,
    pub threshold: f64,
    /// Feature names, in the order `predict_proba` expects them.
    pub manifest: Vec<String>,
    /// Free-form label such as the task name.
    pub task: String,
    /// Hyperparameters the model was trained with, when known.
    pub params: Option<GbtParams>,
}

impl GbtModel {
    pub fn margin(&self, x: &[f64]) -> Result<f64, GbtError> {
        if x.len() != self.manifest.len() {
            return Err(GbtError::Manifest {
                expected: self.manifest.len(),
                got: x.len(),
            });
        }
        let sum: f64 = self.trees.iter().map(|t| t.evaluate(x)).sum();
        Ok(self.base_score + self.learning_rate * sum)
    }

    /// Probability of the positive class, strictly inside (0, 1).
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64, GbtError> {
        Ok(sigmoid(self.margin(x)?.clamp(-MAX_MARGIN, MAX_MARGIN)))
    }

    pub fn predict_label(&self, x: &[f64]) -> Result<bool, GbtError> {
        Ok(self.predict_proba(x)? >= self.threshold)
    }

    /// Probabilities for every row; columns are matched to the manifest by
    /// name, so wider matrices are accepted.
    pub fn predict_matrix(&self, x: &FeatureMatrix) -> Result<Vec<f64>, GbtError> {
        let aligned = if x.names() == self.manifest.as_slice() {
            x.clone()
        } else {
            x.select_named(&self.manifest)?
        };
        (0..aligned.n_rows())
            .map(|i| self.predict_proba(aligned.row(i)))
            .collect()
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(trees: Vec<Tree>, base: f64) -> GbtModel {
        GbtModel {
            trees,
            learning_rate: 1.0,
            base_score: base,
            threshold: 0.5,
            manifest: vec!["x".into(), "y".into()],
            task: "test".into(),
            params: None,
        }
    }

    #[test]
    fn single_zero_leaf_is_even() {
        let m = model(vec![Tree::leaf(0.0)], 0.0);
        assert_eq!(m.predict_proba(&[1.0, 2.0]).unwrap(), 0.5);
        assert!(m.predict_proba(&[1.0]).is_err());
    }

    #[test]
    fn right_branching_is_monotone() {
        let t = Tree {
            nodes: vec![
                Node::Split {
                    feature: 0,
                    threshold: 1.0,
                    left: 1,
                    right: 2,
                },
                Node::Leaf(0.2),
                Node::Leaf(0.9),
            ],
        };
        let m = model(vec![t], 0.0);
        let mut last = 0.0;
        for k in 0..40 {
            let p = m.predict_proba(&[-1.0 + 0.1 * k as f64, 0.0]).unwrap();
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn probabilities_stay_open() {
        let m = model(vec![Tree::leaf(1e6)], 0.0);
        let p = m.predict_proba(&[0.0, 0.0]).unwrap();
        assert!(p < 1.0 && p > 0.5);
        let m = model(vec![Tree::leaf(-1e6)], 0.0);
        assert!(m.predict_proba(&[0.0, 0.0]).unwrap() > 0.0);
    }
}
