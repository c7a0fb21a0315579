use std::path::PathBuf;

use anyhow::Context;
use clap::Subcommand;
use cocrystal_core::dataset::{featurize, load_dataset, split, SplitSpec, Task};
use cocrystal_core::gbt::{fit_task, BinaryScores, GbtModel, GridSearchSpec, TaskConfig};

use crate::{config_err, stage_err, CmdResult};

#[derive(Subcommand)]
pub enum GbtCommand {
    /// Select features, grid-search hyperparameters and fit one task model.
    Train {
        /// u (unobstructed), o (orthogonal) or h (h_bond_bridging).
        #[arg(long)]
        task: Task,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Random parameter tuples to cross-validate.
        #[arg(long, default_value_t = 500)]
        grid: usize,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        /// Seed for the train/test split, folds, sampling and subsampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep the 0.5 threshold even for the orthogonal task.
        #[arg(long)]
        no_tune: bool,
        /// Write per-fold cross-validation metrics here.
        #[arg(long)]
        cv_report: Option<PathBuf>,
    },
    /// Score a trained model on the held-out split (or every row).
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Split seed used when the model was trained.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluate on all rows instead of the test split.
        #[arg(long)]
        all: bool,
    },
}

fn print_scores(label: &str, s: &BinaryScores) {
    println!(
        "{label}: accuracy={:.4} precision={:.4} recall={:.4} f1={:.4} macro_f1={:.4}",
        s.accuracy(),
        s.precision(),
        s.recall(),
        s.f1(),
        s.macro_f1()
    );
}

pub fn run(cmd: GbtCommand) -> CmdResult {
    match cmd {
        GbtCommand::Train {
            task,
            data,
            out,
            grid,
            folds,
            seed,
            no_tune,
            cv_report,
        } => {
            let d = load_dataset(&data).map_err(config_err)?;
            let x = featurize(&d.records).map_err(stage_err)?;
            let spec = SplitSpec {
                seed,
                ..SplitSpec::default()
            };
            let (train, test) = split(&d.records, &spec).map_err(stage_err)?;
            let mut config = TaskConfig::new(
                task,
                GridSearchSpec {
                    n_samples: grid,
                    folds,
                    seed,
                    ..GridSearchSpec::default()
                },
                seed,
            );
            config.tune_threshold &= !no_tune;
            let fit = fit_task(&x, &d.labels(task), &train, &test, &config).map_err(stage_err)?;
            fit.model
                .save(&out)
                .with_context(|| format!("writing {}", out.display()))
                .map_err(stage_err)?;
            if let Some(path) = cv_report {
                std::fs::write(&path, fit.report.to_tsv())
                    .with_context(|| format!("writing {}", path.display()))
                    .map_err(stage_err)?;
            }
            let p = fit.report.best_params();
            println!("task: {task}");
            println!("features: {}", fit.selection.names.join(","));
            println!(
                "best: learning_rate={:.5} n_estimators={} subsample={:.4} max_depth={}",
                p.learning_rate, p.n_estimators, p.subsample, p.max_depth
            );
            let best = &fit.report.candidates[fit.report.best];
            println!(
                "cv: f1={:.4} accuracy={:.4}",
                best.mean_f1, best.mean_accuracy
            );
            println!(
                "threshold: {:.4} (out-of-fold precision={:.4} recall={:.4}){}",
                fit.tuned.threshold,
                fit.tuned.precision,
                fit.tuned.recall,
                if config.tune_threshold {
                    ""
                } else {
                    " not applied"
                }
            );
            print_scores("test@0.5", &fit.test_default);
            print_scores("test@tuned", &fit.test_tuned);
            Ok(())
        }
        GbtCommand::Eval {
            model,
            data,
            seed,
            all,
        } => {
            let m = GbtModel::load(&model)
                .with_context(|| format!("reading {}", model.display()))
                .map_err(config_err)?;
            let task: Task = m.task.parse().map_err(config_err)?;
            let d = load_dataset(&data).map_err(config_err)?;
            let x = featurize(&d.records).map_err(stage_err)?;
            let rows: Vec<usize> = if all {
                (0..d.records.len()).collect()
            } else {
                let spec = SplitSpec {
                    seed,
                    ..SplitSpec::default()
                };
                split(&d.records, &spec).map_err(stage_err)?.1
            };
            let prob = m.predict_matrix(&x.select_rows(&rows)).map_err(stage_err)?;
            let labels = d.labels(task);
            let truth: Vec<bool> = rows.iter().map(|&i| labels[i]).collect();
            println!("task: {task} rows: {}", rows.len());
            print_scores("@0.5", &BinaryScores::at_threshold(&prob, &truth, 0.5));
            print_scores(
                &format!("@{:.4}", m.threshold),
                &BinaryScores::at_threshold(&prob, &truth, m.threshold),
            );
            Ok(())
        }
    }
}
