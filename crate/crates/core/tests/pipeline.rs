use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use cocrystal_core::metrics::LabelMask;
use cocrystal_core::molgraph::canonicalize;
use cocrystal_core::parse_smiles;
use cocrystal_core::pipeline::{run_pipeline, GeneratorMethod, PipelineConfig, PipelineError};

const DRUG: &str = "O=[N+]([O-])OCCNC(=O)c1cccnc1";

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn config(out: &Path) -> PipelineConfig {
    let mut c = PipelineConfig {
        drug_smiles: DRUG.to_string(),
        output_dir: out.to_path_buf(),
        model_dir: root().join("models"),
        batch_size: 300,
        seed: 11,
        mask: "validation".to_string(),
        ..PipelineConfig::default()
    };
    c.generator.corpus = root().join("data/coformers.smi");
    c.evolution.population_size = 20;
    c.evolution.max_iterations = 5;
    c
}

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(files(&path));
        } else {
            out.push(path);
        }
    }
    out.sort();
    out
}

fn tsv(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

fn report_rows(dir: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(dir.join("report.csv"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn same_seed_gives_identical_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run_pipeline(&config(&a)).unwrap();
    run_pipeline(&config(&b)).unwrap();
    let (fa, fb) = (files(&a), files(&b));
    let rel = |d: &Path, f: &[PathBuf]| -> Vec<PathBuf> {
        f.iter()
            .map(|p| p.strip_prefix(d).unwrap().to_path_buf())
            .collect()
    };
    assert_eq!(rel(&a, &fa), rel(&b, &fb));
    assert!(fa.iter().any(|p| p.ends_with("evolution/final.smi")));
    for (x, y) in fa.iter().zip(&fb) {
        let (tx, ty) = (
            fs::read_to_string(x).unwrap(),
            fs::read_to_string(y).unwrap(),
        );
        if x.ends_with("config.toml") {
            let strip = |t: &str| -> String {
                t.lines()
                    .filter(|l| !l.starts_with("output_dir"))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            assert_eq!(strip(&tx), strip(&ty));
        } else {
            assert_eq!(tx, ty, "{}", x.display());
        }
    }
}

#[test]
fn report_respects_filter_and_is_traceable() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let outcome = run_pipeline(&config(&out)).unwrap();
    let mask: LabelMask = "validation".parse().unwrap();
    let rows = report_rows(&out);
    assert_eq!(rows.len(), outcome.ranked.len());
    assert!(!rows.is_empty(), "nothing passed the filter");

    let generated: HashMap<String, String> = tsv(&out.join("generated.tsv"))
        .into_iter()
        .map(|r| (r[0].clone(), r[1].clone()))
        .collect();
    let kept: HashMap<String, String> = tsv(&out.join("validated.tsv"))
        .into_iter()
        .filter(|r| r[2] == "kept")
        .map(|r| (r[1].clone(), r[0].clone()))
        .collect();
    let candidates: HashMap<String, Vec<String>> = tsv(&out.join("candidates.tsv"))
        .into_iter()
        .map(|r| (r[0].clone(), r))
        .collect();
    let passing: HashSet<&String> = candidates
        .values()
        .filter(|r| r[7] == "true")
        .map(|r| &r[0])
        .collect();
    let final_population: HashSet<String> = fs::read_to_string(out.join("evolution/final.smi"))
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect();

    assert_eq!(passing.len(), rows.len());
    for row in &rows {
        let smiles = &row[0];
        let labels: Vec<bool> = row[4].chars().map(|c| c == '1').collect();
        assert!(mask.matches([labels[0], labels[1], labels[2]]), "{smiles}");
        assert!(row[5].parse::<f64>().unwrap() <= 3.0, "{smiles}");
        assert!(passing.contains(smiles));
        assert_eq!(candidates[smiles][6], row[7]);
        match row[7].as_str() {
            "generated" => {
                let index = &kept[smiles];
                let raw = &generated[index];
                assert_eq!(&canonicalize(&parse_smiles(raw).unwrap()), smiles);
            }
            "optimized" => {
                assert!(final_population.contains(smiles), "{smiles}");
                assert!(!kept.contains_key(smiles));
            }
            other => panic!("unknown provenance {other}"),
        }
    }
}

#[test]
fn empty_batch_finishes_with_a_warning() {
    let tmp = tempfile::tempdir().unwrap();
    let list = tmp.path().join("bad.smi");
    fs::write(&list, "C1CC\nnot_a_molecule\nc1cccc1\n").unwrap();
    let mut c = config(&tmp.path().join("run"));
    c.generator.method = GeneratorMethod::File;
    c.generator.candidates = Some(list);
    let outcome = run_pipeline(&c).unwrap();
    assert_eq!(outcome.generated, 3);
    assert_eq!(outcome.valid, 0);
    assert!(outcome.ranked.is_empty());
    assert!(!outcome.warnings.is_empty());
    assert!(report_rows(&c.output_dir).is_empty());
}

#[test]
fn locked_directory_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    fs::create_dir_all(&out).unwrap();
    fs::write(out.join(".cocrystal.lock"), "").unwrap();
    let err = run_pipeline(&config(&out)).unwrap_err();
    assert!(matches!(err, PipelineError::Locked(_)));
    assert_eq!(err.exit_code(), 2);
    assert!(!out.join("report.csv").exists());

    fs::remove_file(out.join(".cocrystal.lock")).unwrap();
    let mut c = config(&out);
    c.evolve = false;
    run_pipeline(&c).unwrap();
    assert!(!out.join(".cocrystal.lock").exists());
}

#[test]
fn bad_config_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = config(&tmp.path().join("run"));
    c.mask = "1x0".to_string();
    assert_eq!(run_pipeline(&c).unwrap_err().exit_code(), 1);
    let mut c = config(&tmp.path().join("run"));
    c.drug_smiles = "C1CC".to_string();
    assert_eq!(run_pipeline(&c).unwrap_err().exit_code(), 1);
}
