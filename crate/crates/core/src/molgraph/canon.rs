//! Canonical atom ranking and SMILES writing.
//!
//! Ranks come from iterative refinement of atom invariants by neighbor ranks
//! (Morgan-style), with ties broken one atom at a time and re-refined until
//! every atom has a distinct rank. The writer walks the graph depth-first from
//! the lowest-ranked atom, visiting neighbors in rank order.

use std::fmt::Write;

use super::{BondOrder, Element, Molecule};

fn initial_invariant(m: &Molecule, i: usize) -> (u8, bool, i8, usize, u8, bool) {
    let a = m.atom(i);
    (
        a.element.atomic_number(),
        a.aromatic,
        a.charge,
        m.degree(i),
        a.h_count,
        m.is_ring_atom(i),
    )
}

/// Dense re-ranking of arbitrary sortable keys: equal keys share a rank.
fn dense_ranks<K: Ord>(keys: &[K]) -> (Vec<usize>, usize) {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0; keys.len()];
    let mut r = 0;
    for k in 0..idx.len() {
        if k > 0 && keys[idx[k]] != keys[idx[k - 1]] {
            r += 1;
        }
        ranks[idx[k]] = r;
    }
    (ranks, if keys.is_empty() { 0 } else { r + 1 })
}

fn refine(m: &Molecule, mut ranks: Vec<usize>, mut classes: usize) -> (Vec<usize>, usize) {
    loop {
        let keys: Vec<(usize, Vec<(usize, u8)>)> = (0..m.num_atoms())
            .map(|i| {
                let mut nb: Vec<(usize, u8)> = m
                    .neighbors(i)
                    .iter()
                    .map(|&(j, bi)| (ranks[j], m.bond(bi).order.code()))
                    .collect();
                nb.sort_unstable();
                (ranks[i], nb)
            })
            .collect();
        let (next, count) = dense_ranks(&keys);
        if count == classes {
            return (next, count);
        }
        ranks = next;
        classes = count;
    }
}

/// Canonical rank of every atom; a permutation of `0..n`.
pub fn canonical_ranks(m: &Molecule) -> Vec<usize> {
    let n = m.num_atoms();
    let inv: Vec<_> = (0..n).map(|i| initial_invariant(m, i)).collect();
    let (ranks, classes) = dense_ranks(&inv);
    let (mut ranks, mut classes) = refine(m, ranks, classes);
    while classes < n {
        // lowest tied class; break the tie at its first member
        let mut counts = vec![0usize; classes];
        for &r in &ranks {
            counts[r] += 1;
        }
        let tied = (0..classes).find(|&c| counts[c] > 1).unwrap();
        let chosen = (0..n).find(|&i| ranks[i] == tied).unwrap();
        let keys: Vec<(usize, bool)> = (0..n).map(|i| (ranks[i], i != chosen)).collect();
        let (r, c) = dense_ranks(&keys);
        (ranks, classes) = refine(m, r, c);
    }
    ranks
}

/// Hydrogen count a reader infers for an organic-subset atom in this graph.
fn implied_hydrogens(m: &Molecule, i: usize) -> u8 {
    let a = m.atom(i);
    let mut arom = 0u8;
    let mut other = 0u8;
    for &(_, bi) in m.neighbors(i) {
        let b = m.bond(bi);
        if b.order == BondOrder::Aromatic {
            arom += 1;
        } else {
            other += b.kekule;
        }
    }
    if a.aromatic {
        a.element.valences(0)[0].saturating_sub(arom + other + 1)
    } else {
        a.element.implicit_hydrogens(0, other)
    }
}

fn write_atom(m: &Molecule, i: usize, out: &mut String) {
    let a = m.atom(i);
    let sym = if a.aromatic {
        a.element.symbol().to_lowercase()
    } else {
        a.element.symbol().to_string()
    };
    let organic = a.element != Element::H && a.charge == 0 && a.h_count == implied_hydrogens(m, i);
    if organic {
        out.push_str(&sym);
        return;
    }
    out.push('[');
    out.push_str(&sym);
    match a.h_count {
        0 => {}
        1 => out.push('H'),
        h => {
            let _ = write!(out, "H{h}");
        }
    }
    match a.charge {
        0 => {}
        1 => out.push('+'),
        -1 => out.push('-'),
        c if c > 0 => {
            let _ = write!(out, "+{c}");
        }
        c => {
            let _ = write!(out, "-{}", -c);
        }
    }
    out.push(']');
}

fn bond_symbol(m: &Molecule, bi: usize) -> &'static str {
    let b = m.bond(bi);
    match b.order {
        BondOrder::Aromatic => "",
        BondOrder::Single if m.atom(b.a).aromatic && m.atom(b.b).aromatic => "-",
        BondOrder::Single => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
    }
}

struct Walk {
    order: Vec<usize>,
    children: Vec<Vec<(usize, usize)>>,
    /// Ring closures per atom: (partner, bond index).
    closures: Vec<Vec<(usize, usize)>>,
    visit: Vec<usize>,
}

fn plan(m: &Molecule, ranks: &[usize], start: usize, walk: &mut Walk) {
    let n = m.num_atoms();
    let mut used_bond = vec![false; m.bonds().len()];
    // explicit stack of (atom, sorted neighbor list, cursor)
    let sorted = |u: usize| {
        let mut nb = m.neighbors(u).to_vec();
        nb.sort_by_key(|&(v, _)| ranks[v]);
        nb
    };
    walk.visit[start] = walk.order.len();
    walk.order.push(start);
    let mut stack = vec![(start, sorted(start), 0usize)];
    while let Some((u, nb, cursor)) = stack.last_mut() {
        let u = *u;
        if *cursor == nb.len() {
            stack.pop();
            continue;
        }
        let (v, bi) = nb[*cursor];
        *cursor += 1;
        if used_bond[bi] {
            continue;
        }
        used_bond[bi] = true;
        if walk.visit[v] == usize::MAX {
            walk.children[u].push((v, bi));
            walk.visit[v] = walk.order.len();
            walk.order.push(v);
            let nbv = sorted(v);
            stack.push((v, nbv, 0));
        } else {
            walk.closures[u].push((v, bi));
            walk.closures[v].push((u, bi));
        }
    }
    debug_assert!(walk.order.len() <= n);
}

fn emit(
    m: &Molecule,
    u: usize,
    walk: &Walk,
    digits: &mut [Option<usize>; 100],
    bond_digit: &mut [Option<usize>],
    out: &mut String,
) {
    // iterative emission: frames of (atom, next child index)
    let mut stack: Vec<(usize, usize)> = vec![(u, 0)];
    write_atom(m, u, out);
    write_closures(m, u, walk, digits, bond_digit, out);
    while let Some(&mut (x, ref mut k)) = stack.last_mut() {
        let kids = &walk.children[x];
        if *k == kids.len() {
            stack.pop();
            if !stack.is_empty() && is_branch(walk, &stack, x) {
                out.push(')');
            }
            continue;
        }
        let (v, bi) = kids[*k];
        *k += 1;
        if *k < kids.len() {
            out.push('(');
        }
        out.push_str(bond_symbol(m, bi));
        write_atom(m, v, out);
        write_closures(m, v, walk, digits, bond_digit, out);
        stack.push((v, 0));
    }
}

/// Whether `child` was written inside parentheses under its parent.
fn is_branch(walk: &Walk, stack: &[(usize, usize)], child: usize) -> bool {
    let (parent, _) = *stack.last().unwrap();
    let kids = &walk.children[parent];
    kids.last().map(|&(v, _)| v) != Some(child)
}

fn write_closures(
    m: &Molecule,
    u: usize,
    walk: &Walk,
    digits: &mut [Option<usize>; 100],
    bond_digit: &mut [Option<usize>],
    out: &mut String,
) {
    let mut closing: Vec<(usize, usize)> = Vec::new();
    let mut opening: Vec<(usize, usize)> = Vec::new();
    for &(v, bi) in &walk.closures[u] {
        if walk.visit[v] < walk.visit[u] {
            closing.push((walk.visit[v], bi));
        } else {
            opening.push((walk.visit[v], bi));
        }
    }
    closing.sort_unstable();
    opening.sort_unstable();
    let mut freed = Vec::new();
    for &(_, bi) in &closing {
        let d = bond_digit[bi].take().expect("ring closure opened");
        out.push_str(bond_symbol(m, bi));
        push_digit(d, out);
        freed.push(d);
    }
    for &(_, bi) in &opening {
        let d = (1..100)
            .find(|&d| digits[d].is_none() && !freed.contains(&d))
            .expect("more than 99 open rings");
        digits[d] = Some(bi);
        bond_digit[bi] = Some(d);
        push_digit(d, out);
    }
    for d in freed {
        digits[d] = None;
    }
}

fn push_digit(d: usize, out: &mut String) {
    if d < 10 {
        out.push(char::from(b'0' + d as u8));
    } else {
        let _ = write!(out, "%{d:02}");
    }
}

/// Canonical SMILES string. Graph-isomorphic molecules (same elements,
/// charges, hydrogens and bond orders) produce identical strings.
pub fn canonicalize(m: &Molecule) -> String {
    let n = m.num_atoms();
    if n == 0 {
        return String::new();
    }
    let ranks = canonical_ranks(m);
    let mut walk = Walk {
        order: Vec::with_capacity(n),
        children: vec![Vec::new(); n],
        closures: vec![Vec::new(); n],
        visit: vec![usize::MAX; n],
    };
    let mut comps = m.components();
    comps.sort_by_key(|c| c.iter().map(|&i| ranks[i]).min());
    let mut out = String::new();
    let mut digits = [None; 100];
    let mut bond_digit = vec![None; m.bonds().len()];
    for (k, comp) in comps.iter().enumerate() {
        let start = *comp.iter().min_by_key(|&&i| ranks[i]).unwrap();
        plan(m, &ranks, start, &mut walk);
        if k > 0 {
            out.push('.');
        }
        emit(m, start, &walk, &mut digits, &mut bond_digit, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::molgraph::parse_smiles;

    fn canon(s: &str) -> String {
        parse_smiles(s).unwrap().to_smiles()
    }

    #[test]
    fn same_graph_same_string() {
        assert_eq!(canon("OCC"), canon("CCO"));
        assert_eq!(canon("c1ccccc1"), canon("C1=CC=CC=C1"));
        assert_eq!(canon("C(=O)(O)C=CC(O)=O"), canon("O=C(O)C=CC(=O)O"));
        assert_ne!(canon("CCO"), canon("COC"));
    }

    #[test]
    fn kekule_and_aromatic_heterocycles() {
        assert_eq!(canon("c1ccncc1"), canon("C1=CC=NC=C1"));
        assert_eq!(canon("c1cc[nH]c1"), canon("C1=CNC=C1"));
        assert_eq!(
            canon("Cn1cnc2c1c(=O)n(C)c(=O)n2C"),
            canon("CN1C=NC2=C1C(=O)N(C(=O)N2C)C")
        );
    }

    #[test]
    fn fixed_point() {
        for s in [
            "CCO",
            "c1ccc2ccccc2c1",
            "O=C(O)c1ccccc1O",
            "C[N+](=O)[O-]",
            "c1ccccc1-c1ccccc1",
            "C1CC2CCC1C2",
            "O=c1cccc[nH]1",
            "CC.O",
            "[NH4+]",
            "C1CCC2(CC1)CCCC2",
        ] {
            let once = canon(s);
            assert_eq!(canon(&once), once, "{s}");
        }
    }

    #[test]
    fn writes_brackets_only_when_needed() {
        assert_eq!(canon("[CH3][CH2][OH]"), "CCO");
        assert_eq!(canon("[NH4+]"), "[NH4+]");
        assert!(canon("c1cc[nH]c1").contains("[nH]"));
    }

    #[test]
    fn many_rings_use_reusable_digits() {
        let s =
            canon("C1CC2CC3CC4CC5CC6CC7CC8CC9CC%10CC%11CCCCC%11CC%10CC9CC8CC7CC6CC5CC4CC3CC2C1");
        assert_eq!(canon(&s), s);
    }
}
