use std::collections::{BTreeSet, HashMap, VecDeque};

use cocrystal_core::descriptors::*;
use cocrystal_core::molgraph::{parse_smiles, read_smiles_lines, Molecule};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus() -> Vec<String> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/coformers.smi");
    read_smiles_lines(&std::fs::read_to_string(path).unwrap())
}

fn mol(s: &str) -> Molecule {
    parse_smiles(s).unwrap()
}

#[test]
fn agrees_with_reference_toolkit() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/rdkit_descriptors.tsv"
    );
    let text = std::fs::read_to_string(path).unwrap();
    let mut logp_err = Vec::new();
    let mut mr_err = Vec::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split('\t').collect();
        let num = |k: usize| f[k].parse::<f64>().unwrap();
        let d = compute_descriptors(&mol(f[0]));
        let g = |n: &str| d.get(n).unwrap();
        assert!((g("molecular_weight") - num(1)).abs() < 0.03, "{}", f[0]);
        assert_eq!(g("hbd_count"), num(2), "hbd {}", f[0]);
        assert_eq!(g("hba_count"), num(3), "hba {}", f[0]);
        assert!((g("tpsa") - num(4)).abs() < 0.01, "tpsa {}", f[0]);
        assert_eq!(g("rotatable_bond_count"), num(5), "rot {}", f[0]);
        assert_eq!(g("ring_count"), num(6), "rings {}", f[0]);
        assert_eq!(g("aromatic_ring_count"), num(7), "arom {}", f[0]);
        assert!((g("fraction_csp3") - num(8)).abs() < 1e-5, "fsp3 {}", f[0]);
        logp_err.push((g("wildman_crippen_logp") - num(9)).abs());
        mr_err.push((g("wildman_crippen_mr") - num(10)).abs());
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!(mean(&logp_err) < 0.05, "logp MAE {}", mean(&logp_err));
    assert!(mean(&mr_err) < 0.1, "mr MAE {}", mean(&mr_err));
}

#[test]
fn descriptors_ignore_atom_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in corpus().iter().step_by(20) {
        let m = mol(s);
        let d = compute_descriptors(&m);
        let mut order: Vec<usize> = (0..m.num_atoms()).collect();
        order.shuffle(&mut rng);
        let p = compute_descriptors(&m.permuted(&order));
        for i in 0..DESCRIPTOR_COUNT {
            assert!((d[i] - p[i]).abs() < 1e-9, "{s} {}", DESCRIPTOR_NAMES[i]);
        }
        assert_eq!(
            morgan_fingerprint(&m),
            morgan_fingerprint(&m.permuted(&order))
        );
    }
}

/// Environment identifiers rebuilt from scratch: ids by direct recursion,
/// bond sets by breadth-first distance from the center.
fn oracle_fingerprint(m: &Molecule) -> Fingerprint {
    fn combine(seed: u32, v: u32) -> u32 {
        seed ^ v
            .wrapping_add(0x9e37_79b9)
            .wrapping_add(seed << 6)
            .wrapping_add(seed >> 2)
    }
    fn id(m: &Molecule, atom: usize, r: u32) -> u32 {
        if r == 0 {
            let a = m.atom(atom);
            return [
                a.element.atomic_number() as u32,
                m.degree(atom) as u32,
                a.h_count as u32,
                a.charge as i32 as u32,
                m.is_ring_atom(atom) as u32,
            ]
            .iter()
            .fold(0, |h, &v| combine(h, v));
        }
        let mut nb: Vec<(u32, u32)> = m
            .neighbors(atom)
            .iter()
            .map(|&(j, bi)| (m.bond(bi).order.code() as u32, id(m, j, r - 1)))
            .collect();
        nb.sort_unstable();
        nb.iter()
            .fold(combine(r, id(m, atom, r - 1)), |h, &(b, x)| {
                combine(combine(h, b), x)
            })
    }
    fn bond_set(m: &Molecule, atom: usize, r: usize) -> BTreeSet<usize> {
        let mut dist = vec![usize::MAX; m.num_atoms()];
        dist[atom] = 0;
        let mut q = VecDeque::from([atom]);
        while let Some(u) = q.pop_front() {
            for &(v, _) in m.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        (0..m.bonds().len())
            .filter(|&b| dist[m.bond(b).a].min(dist[m.bond(b).b]) < r)
            .collect()
    }
    let n = m.num_atoms();
    let mut bits: Vec<usize> = (0..n).map(|a| id(m, a, 0) as usize % FP_WIDTH).collect();
    let mut seen: Vec<BTreeSet<usize>> = Vec::new();
    let mut alive = vec![true; n];
    for r in 1..=2 {
        let mut layer: HashMap<BTreeSet<usize>, (u32, usize)> = HashMap::new();
        for a in (0..n).filter(|&a| alive[a]) {
            let set = bond_set(m, a, r);
            let x = id(m, a, r as u32);
            layer
                .entry(set)
                .and_modify(|e| {
                    if x < e.0 {
                        *e = (x, a)
                    }
                })
                .or_insert((x, a));
        }
        let mut keep = vec![false; n];
        for (set, (x, a)) in layer {
            if !seen.contains(&set) {
                bits.push(x as usize % FP_WIDTH);
                keep[a] = true;
                seen.push(set);
            }
        }
        alive = keep;
    }
    Fingerprint::from_bits(FP_WIDTH, bits)
}

#[test]
fn fingerprint_matches_independent_recomputation() {
    let caffeine = mol("CN1C=NC2=C1C(=O)N(C(=O)N2C)C");
    let fp = morgan_fingerprint(&caffeine);
    assert_eq!(tanimoto(&fp, &oracle_fingerprint(&caffeine)).unwrap(), 1.0);
    for s in corpus().iter().step_by(15) {
        let m = mol(s);
        assert_eq!(morgan_fingerprint(&m), oracle_fingerprint(&m), "{s}");
    }
}

#[test]
fn fingerprint_depends_only_on_canonical_form() {
    for s in corpus().iter().step_by(25) {
        let m = mol(s);
        let again = mol(&m.to_smiles());
        assert_eq!(morgan_fingerprint(&m), morgan_fingerprint(&again), "{s}");
    }
}

#[test]
fn ethanol_sa_near_reference() {
    // reference implementation with its published fragment table: 1.980
    let sa = sa_score(&mol("CCO")).value();
    assert!(sa <= 3.0, "{sa}");
    assert!((sa - 1.980).abs() <= 1.0, "{sa}");
}

#[test]
fn alkane_size_penalty_is_monotone() {
    let table = FragmentTable::shipped();
    let chains: Vec<SaBreakdown> = (2..=40)
        .map(|n| sa_breakdown(&mol(&"C".repeat(n)), table))
        .collect();
    for w in chains.windows(2) {
        assert!(w[1].size_penalty > w[0].size_penalty);
    }
    // once the chain interior dominates the fragment term, the score only
    // grows with length (C9 onward on the shipped table)
    let scores: Vec<f64> = chains.iter().map(|b| b.score().value()).collect();
    for n in 9..40 {
        assert!(scores[n - 1] >= scores[n - 2], "C{n}");
    }
}

#[test]
fn shipped_fragment_table_is_the_corpus_table() {
    let mols: Vec<Molecule> = corpus().iter().map(|s| mol(s)).collect();
    let trained = FragmentTable::train(&mols);
    assert_eq!(trained.to_text(), FragmentTable::shipped().to_text());
}

proptest! {
    #[test]
    fn tanimoto_properties(a in proptest::collection::btree_set(0usize..256, 0..40),
                           b in proptest::collection::btree_set(0usize..256, 0..40)) {
        let fa = Fingerprint::from_bits(256, a.iter().copied());
        let fb = Fingerprint::from_bits(256, b.iter().copied());
        let t = tanimoto(&fa, &fb).unwrap();
        prop_assert_eq!(t, tanimoto(&fb, &fa).unwrap());
        prop_assert!((0.0..=1.0).contains(&t));
        prop_assert_eq!(tanimoto(&fa, &fa).unwrap(), 1.0);
        let inter = a.intersection(&b).count();
        let union = a.union(&b).count();
        let expected = if union == 0 { 1.0 } else { inter as f64 / union as f64 };
        prop_assert!((t - expected).abs() < 1e-12);
    }

    #[test]
    fn diversity_ignores_order(sets in proptest::collection::vec(
        proptest::collection::btree_set(0usize..64, 1..10), 2..8), seed in 0u64..1000) {
        let fps: Vec<Fingerprint> = sets.iter()
            .map(|s| Fingerprint::from_bits(64, s.iter().copied()))
            .collect();
        let mut shuffled = fps.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let d1 = diversity(&fps).unwrap();
        let d2 = diversity(&shuffled).unwrap();
        prop_assert!((d1 - d2).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&d1));
    }
}
