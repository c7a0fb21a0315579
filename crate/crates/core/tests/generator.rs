use std::collections::{BTreeMap, HashSet};

use cocrystal_core::generator::{
    sample_and_perturb, MarkovModel, Sampling, BEGIN, END, MAX_LEN, ORDER,
};
use cocrystal_core::molgraph::{canonicalize, read_smiles_lines, tokenize, validate_smiles};

fn corpus() -> Vec<String> {
    read_smiles_lines(include_str!("../../../data/coformers.smi"))
}

fn valid(s: &str) -> bool {
    matches!(validate_smiles(s), (Some(m), r) if r.is_valid() && m.num_atoms() > 0)
}

#[test]
fn markov_validity_on_shipped_corpus() {
    let model = MarkovModel::fit(&corpus()).unwrap();
    let batch = model.generate(10_000, 0, MAX_LEN);
    assert_eq!(batch.len(), 10_000);
    let ok = batch.produced.iter().filter(|s| valid(s)).count();
    assert!(ok as f64 / 10_000.0 >= 0.95, "validity {ok}/10000");
}

#[test]
fn markov_is_deterministic() {
    let model = MarkovModel::fit(&corpus()).unwrap();
    let a = model.generate(500, 7, MAX_LEN);
    let b = model.generate(500, 7, MAX_LEN);
    assert_eq!(a, b);
    assert_ne!(a.produced, model.generate(500, 8, MAX_LEN).produced);
}

#[test]
fn free_sampling_follows_transition_table() {
    let model = MarkovModel::fit(&corpus()).unwrap();
    let batch = model.generate_with(100_000, 3, MAX_LEN, Sampling::Free);
    let mut seen: BTreeMap<Vec<String>, BTreeMap<String, u64>> = BTreeMap::new();
    for s in &batch.produced {
        let tokens = tokenize(s);
        let finished = tokens.len() < MAX_LEN;
        let mut ctx = vec![BEGIN.to_string(); ORDER];
        let ends = finished.then(|| END.to_string());
        for t in tokens.into_iter().chain(ends) {
            *seen
                .entry(ctx.clone())
                .or_default()
                .entry(t.clone())
                .or_default() += 1;
            ctx.remove(0);
            ctx.push(t);
        }
    }
    let mut checked = 0;
    for (ctx, next) in &seen {
        let total: u64 = next.values().sum();
        if total < 10_000 {
            continue;
        }
        let refs: Vec<&str> = ctx.iter().map(String::as_str).collect();
        let expected = model.distribution(&refs);
        let mut tv = 0.0;
        let mut keys: HashSet<&str> = next.keys().map(String::as_str).collect();
        keys.extend(expected.iter().map(|(t, _)| t.as_str()));
        for k in keys {
            let p = expected.iter().find(|(t, _)| t == k).map_or(0.0, |e| e.1);
            let q = next.get(k).map_or(0.0, |&c| c as f64 / total as f64);
            tv += (p - q).abs() / 2.0;
        }
        assert!(
            tv <= 0.02,
            "context {ctx:?}: total variation {tv:.4} over {total}"
        );
        checked += 1;
    }
    assert!(checked >= 5, "only {checked} frequent contexts");
}

#[test]
fn perturbation_produces_novel_valid_molecules() {
    let corpus = corpus();
    let known: HashSet<String> = corpus
        .iter()
        .filter_map(|s| validate_smiles(s).0.map(|m| canonicalize(&m)))
        .collect();
    let batch = sample_and_perturb(&corpus, 200, 1..=3, 11).unwrap();
    assert_eq!(batch.len(), 200);
    let novel = batch
        .produced
        .iter()
        .filter(|s| !known.contains(*s))
        .count();
    assert!(novel > 0);
    assert!(batch.produced.iter().all(|s| valid(s)));
    assert_eq!(batch, sample_and_perturb(&corpus, 200, 1..=3, 11).unwrap());
}
