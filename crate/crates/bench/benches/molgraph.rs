use std::hint::black_box;

use cocrystal_bench::{corpus_molecules, corpus_strings};
use cocrystal_core::descriptors::{compute_descriptors, morgan_fingerprint, sa_score, tanimoto};
use cocrystal_core::molgraph::canonicalize;
use cocrystal_core::parse_smiles;
use criterion::{criterion_group, criterion_main, Criterion};

fn molgraph(c: &mut Criterion) {
    let strings = corpus_strings(200);
    let mols = corpus_molecules(200);
    c.bench_function("parse_200", |b| {
        b.iter(|| {
            strings
                .iter()
                .map(|s| parse_smiles(black_box(s)).unwrap().num_atoms())
                .sum::<usize>()
        })
    });
    c.bench_function("canonicalize_200", |b| {
        b.iter(|| {
            mols.iter()
                .map(|m| canonicalize(black_box(m)).len())
                .sum::<usize>()
        })
    });
    c.bench_function("descriptors_200", |b| {
        b.iter(|| {
            mols.iter()
                .map(|m| compute_descriptors(black_box(m))[0])
                .sum::<f64>()
        })
    });
    c.bench_function("sa_score_200", |b| {
        b.iter(|| {
            mols.iter()
                .map(|m| sa_score(black_box(m)).value())
                .sum::<f64>()
        })
    });
    let fps: Vec<_> = mols.iter().map(morgan_fingerprint).collect();
    c.bench_function("tanimoto_all_pairs_200", |b| {
        b.iter(|| {
            let mut total = 0.0;
            for x in &fps {
                for y in &fps {
                    total += tanimoto(black_box(x), black_box(y)).unwrap();
                }
            }
            total
        })
    });
}

criterion_group!(benches, molgraph);
criterion_main!(benches);
