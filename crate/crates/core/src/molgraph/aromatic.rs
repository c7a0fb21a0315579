//! Kekulization of aromatic input and Hückel aromaticity perception.
//!
//! Parsed aromatic systems are first turned into an explicit Kekulé
//! structure, then aromaticity is re-perceived from scratch, so aromatic and
//! Kekulé writings of the same molecule end up with identical flags.

use super::{Atom, Bond, BondOrder, Element, MolError};

const MATCH_STEP_LIMIT: usize = 200_000;

/// Assigns integral orders to every aromatic bond.
pub(super) fn kekulize(
    atoms: &[Atom],
    bonds: &mut [Bond],
    adj: &[Vec<(usize, usize)>],
) -> Result<(), MolError> {
    let n = atoms.len();
    let mut eligible = vec![false; n];
    for i in 0..n {
        if !atoms[i].aromatic {
            continue;
        }
        let mut arom = 0u8;
        let mut other = 0u8;
        for &(_, bi) in &adj[i] {
            if bonds[bi].order == BondOrder::Aromatic {
                arom += 1;
            } else {
                other += bonds[bi].kekule;
            }
        }
        if arom == 0 {
            return Err(MolError::Kekulize);
        }
        let used = arom + other + atoms[i].h_count;
        let target = atoms[i]
            .element
            .valences(atoms[i].charge)
            .iter()
            .copied()
            .find(|&v| v >= used);
        match target.map(|t| t - used) {
            Some(0) => {}
            Some(1) => eligible[i] = true,
            _ => return Err(MolError::Kekulize),
        }
    }

    let mut mate: Vec<Option<usize>> = vec![None; n];
    let arom_nbrs: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|i| {
            adj[i]
                .iter()
                .copied()
                .filter(|&(j, bi)| eligible[j] && bonds[bi].order == BondOrder::Aromatic)
                .collect()
        })
        .collect();
    let mut steps = 0;
    if !match_all(&eligible, &arom_nbrs, &mut mate, &mut steps) {
        return Err(MolError::Kekulize);
    }
    for b in bonds.iter_mut() {
        if b.order == BondOrder::Aromatic {
            b.kekule = if mate[b.a] == Some(b.b) { 2 } else { 1 };
        }
    }
    Ok(())
}

fn match_all(
    eligible: &[bool],
    nbrs: &[Vec<(usize, usize)>],
    mate: &mut [Option<usize>],
    steps: &mut usize,
) -> bool {
    *steps += 1;
    if *steps > MATCH_STEP_LIMIT {
        return false;
    }
    // most constrained unmatched atom first
    let mut pick = None;
    let mut best = usize::MAX;
    for i in 0..eligible.len() {
        if eligible[i] && mate[i].is_none() {
            let free = nbrs[i].iter().filter(|&&(j, _)| mate[j].is_none()).count();
            if free < best {
                best = free;
                pick = Some(i);
            }
        }
    }
    let Some(i) = pick else { return true };
    if best == 0 {
        return false;
    }
    for k in 0..nbrs[i].len() {
        let j = nbrs[i][k].0;
        if mate[j].is_some() {
            continue;
        }
        mate[i] = Some(j);
        mate[j] = Some(i);
        if match_all(eligible, nbrs, mate, steps) {
            return true;
        }
        mate[i] = None;
        mate[j] = None;
    }
    false
}

/// π-electron contribution of a ring atom, or `None` if the atom cannot be
/// part of an aromatic ring.
fn pi_electrons(
    i: usize,
    atoms: &[Atom],
    bonds: &[Bond],
    adj: &[Vec<(usize, usize)>],
    ring_bond: &[bool],
) -> Option<u8> {
    let atom = &atoms[i];
    let mut endocyclic_double = false;
    let mut exocyclic_double = None;
    for &(j, bi) in &adj[i] {
        match bonds[bi].kekule {
            3 => return None,
            2 if ring_bond[bi] => endocyclic_double = true,
            2 => exocyclic_double = Some(atoms[j].element),
            _ => {}
        }
    }
    if endocyclic_double {
        return Some(1);
    }
    if let Some(partner) = exocyclic_double {
        return match (atom.element, partner) {
            (Element::C, Element::O | Element::N | Element::S) => Some(0),
            _ => None,
        };
    }
    let connections = adj[i].len() + atom.h_count as usize;
    match (atom.element, atom.charge) {
        (Element::N, 0) | (Element::P, 0) if connections == 3 => Some(2),
        (Element::O, 0) | (Element::S, 0) if connections == 2 => Some(2),
        (Element::N, -1) if connections == 2 => Some(2),
        (Element::C, -1) => Some(2),
        (Element::C, 1) => Some(0),
        _ => None,
    }
}

fn huckel(electrons: u32) -> bool {
    electrons >= 2 && (electrons - 2).is_multiple_of(4)
}

/// Sets aromatic flags from the Kekulé structure. Rings of 5-7 atoms are
/// tested individually, then pairs of fused rings as one system.
pub(super) fn perceive(
    atoms: &mut [Atom],
    bonds: &mut [Bond],
    adj: &[Vec<(usize, usize)>],
    rings: &[Vec<usize>],
    ring_bond: &[bool],
) {
    for a in atoms.iter_mut() {
        a.aromatic = false;
    }
    for b in bonds.iter_mut() {
        b.order = BondOrder::from_int(b.kekule).unwrap_or(BondOrder::Single);
    }
    let electrons: Vec<Option<u8>> = (0..atoms.len())
        .map(|i| pi_electrons(i, atoms, bonds, adj, ring_bond))
        .collect();
    let candidates: Vec<usize> = (0..rings.len())
        .filter(|&r| (5..=7).contains(&rings[r].len()))
        .filter(|&r| rings[r].iter().all(|&a| electrons[a].is_some()))
        .collect();
    let count = |atoms_in: &mut dyn Iterator<Item = usize>| -> u32 {
        atoms_in.map(|a| electrons[a].unwrap() as u32).sum()
    };
    let mut aromatic_ring = vec![false; rings.len()];
    for &r in &candidates {
        if huckel(count(&mut rings[r].iter().copied())) {
            aromatic_ring[r] = true;
        }
    }
    for (x, &r) in candidates.iter().enumerate() {
        for &s in &candidates[x + 1..] {
            if aromatic_ring[r] && aromatic_ring[s] {
                continue;
            }
            let shared = rings[r].iter().filter(|a| rings[s].contains(a)).count();
            if shared < 2 {
                continue;
            }
            let mut union: Vec<usize> = rings[r].iter().chain(&rings[s]).copied().collect();
            union.sort_unstable();
            union.dedup();
            if huckel(count(&mut union.into_iter())) {
                aromatic_ring[r] = true;
                aromatic_ring[s] = true;
            }
        }
    }
    for (r, ring) in rings.iter().enumerate() {
        if !aromatic_ring[r] {
            continue;
        }
        let len = ring.len();
        for k in 0..len {
            let (x, y) = (ring[k], ring[(k + 1) % len]);
            atoms[x].aromatic = true;
            if let Some(&(_, bi)) = adj[x].iter().find(|&&(v, _)| v == y) {
                bonds[bi].order = BondOrder::Aromatic;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::molgraph::{parse_smiles, BondOrder};

    fn aromatic_atoms(s: &str) -> usize {
        parse_smiles(s)
            .unwrap()
            .atoms()
            .iter()
            .filter(|a| a.aromatic)
            .count()
    }

    #[test]
    fn kekule_benzene_is_aromatic() {
        assert_eq!(aromatic_atoms("C1=CC=CC=C1"), 6);
        assert_eq!(aromatic_atoms("c1ccccc1"), 6);
    }

    #[test]
    fn heteroaromatics() {
        assert_eq!(aromatic_atoms("c1cc[nH]c1"), 5);
        assert_eq!(aromatic_atoms("C1=CNC=C1"), 5);
        assert_eq!(aromatic_atoms("c1ccoc1"), 5);
        assert_eq!(aromatic_atoms("c1ccsc1"), 5);
        assert_eq!(aromatic_atoms("O=c1cccc[nH]1"), 6);
        assert_eq!(aromatic_atoms("CN1C=NC2=C1C(=O)N(C(=O)N2C)C"), 9);
    }

    #[test]
    fn non_aromatic_rings() {
        assert_eq!(aromatic_atoms("O=C1C=CC(=O)C=C1"), 0);
        assert_eq!(aromatic_atoms("C1=CCC=C1"), 0);
        assert_eq!(aromatic_atoms("C1=CC=C1"), 0);
        assert_eq!(aromatic_atoms("C1CCCCC1"), 0);
    }

    #[test]
    fn fused_systems() {
        assert_eq!(aromatic_atoms("c1ccc2ccccc2c1"), 10);
        assert_eq!(aromatic_atoms("C1=CC=C2C=CC=CC2=C1"), 10);
        // azulene only passes as a fused 10-electron system
        assert_eq!(aromatic_atoms("C1=CC2=CC=CC=CC2=C1"), 10);
    }

    #[test]
    fn biphenyl_link_stays_single() {
        let m = parse_smiles("c1ccccc1c1ccccc1").unwrap();
        let singles = m
            .bonds()
            .iter()
            .filter(|b| b.order == BondOrder::Single)
            .count();
        assert_eq!(singles, 1);
    }

    #[test]
    fn bad_aromatic_input() {
        assert!(parse_smiles("c1cccc1").is_err());
        assert!(parse_smiles("c1ccccc1c").is_err());
    }
}
