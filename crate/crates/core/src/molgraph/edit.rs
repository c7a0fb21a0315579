//! Mutable Kekulé graph used for structural edits.
//!
//! Edits work on integral bond orders only. Hydrogen counts are not stored;
//! they are recomputed from the valence table when the graph is frozen back
//! into a [`Molecule`], and aromaticity is perceived afresh at that point.

use super::{Atom, Bond, BondOrder, Element, MolError, Molecule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditableMol {
    atoms: Vec<(Element, i8)>,
    /// (a, b, order) with a < b.
    bonds: Vec<(usize, usize, u8)>,
}

impl EditableMol {
    pub fn new() -> Self {
        EditableMol {
            atoms: Vec::new(),
            bonds: Vec::new(),
        }
    }

    pub fn from_molecule(m: &Molecule) -> Self {
        EditableMol {
            atoms: m.atoms().iter().map(|a| (a.element, a.charge)).collect(),
            bonds: m
                .bonds()
                .iter()
                .map(|b| (b.a.min(b.b), b.a.max(b.b), b.kekule))
                .collect(),
        }
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn element(&self, i: usize) -> Element {
        self.atoms[i].0
    }

    pub fn charge(&self, i: usize) -> i8 {
        self.atoms[i].1
    }

    pub fn bonds(&self) -> &[(usize, usize, u8)] {
        &self.bonds
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.0 != Element::H).count()
    }

    pub fn bond_order(&self, a: usize, b: usize) -> Option<u8> {
        let (x, y) = (a.min(b), a.max(b));
        self.bonds
            .iter()
            .find(|&&(p, q, _)| p == x && q == y)
            .map(|&(_, _, o)| o)
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.bonds
            .iter()
            .filter_map(|&(a, b, _)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.bonds
            .iter()
            .filter(|&&(a, b, _)| a == i || b == i)
            .count()
    }

    pub fn bond_sum(&self, i: usize) -> u8 {
        self.bonds
            .iter()
            .filter(|&&(a, b, _)| a == i || b == i)
            .map(|&(_, _, o)| o)
            .sum()
    }

    /// Bond order still available on atom `i` under its largest valence.
    pub fn free_valence(&self, i: usize) -> u8 {
        let (el, ch) = self.atoms[i];
        el.max_valence(ch)
            .unwrap_or(0)
            .saturating_sub(self.bond_sum(i))
    }

    pub fn add_atom(&mut self, element: Element) -> usize {
        self.atoms.push((element, 0));
        self.atoms.len() - 1
    }

    pub fn set_element(&mut self, i: usize, element: Element) {
        self.atoms[i] = (element, 0);
    }

    pub fn set_charge(&mut self, i: usize, charge: i8) {
        self.atoms[i].1 = charge;
    }

    /// Adds or overwrites the bond between `a` and `b`.
    pub fn set_bond(&mut self, a: usize, b: usize, order: u8) {
        assert!(a != b && (1..=3).contains(&order));
        let (x, y) = (a.min(b), a.max(b));
        match self.bonds.iter_mut().find(|t| t.0 == x && t.1 == y) {
            Some(t) => t.2 = order,
            None => self.bonds.push((x, y, order)),
        }
    }

    pub fn remove_bond(&mut self, a: usize, b: usize) -> bool {
        let (x, y) = (a.min(b), a.max(b));
        let before = self.bonds.len();
        self.bonds.retain(|&(p, q, _)| !(p == x && q == y));
        self.bonds.len() != before
    }

    /// Removes atom `i` and its bonds; higher indices shift down by one.
    pub fn remove_atom(&mut self, i: usize) {
        self.atoms.remove(i);
        self.bonds.retain(|&(a, b, _)| a != i && b != i);
        for t in &mut self.bonds {
            if t.0 > i {
                t.0 -= 1;
            }
            if t.1 > i {
                t.1 -= 1;
            }
        }
    }

    /// Removes a set of atoms at once.
    pub fn remove_atoms(&mut self, atoms: &[usize]) {
        let mut sorted = atoms.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &i in sorted.iter().rev() {
            self.remove_atom(i);
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.atoms.len();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    /// Freezes the graph, filling hydrogens from the valence table.
    pub fn to_molecule(&self) -> Result<Molecule, MolError> {
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for (i, &(element, charge)) in self.atoms.iter().enumerate() {
            if !(-2..=2).contains(&charge) {
                return Err(MolError::Charge(charge as i32));
            }
            let sum = self.bond_sum(i);
            match element.max_valence(charge) {
                Some(max) if sum <= max => {}
                _ => return Err(MolError::Valence { atom: i, element }),
            }
            atoms.push(Atom {
                element,
                charge,
                aromatic: false,
                h_count: element.implicit_hydrogens(charge, sum),
            });
        }
        let bonds = self
            .bonds
            .iter()
            .map(|&(a, b, o)| Bond {
                a,
                b,
                order: BondOrder::from_int(o).expect("integral bond order"),
                kekule: o,
            })
            .collect();
        Ok(Molecule::perceived(atoms, bonds))
    }
}

impl Default for EditableMol {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    #[test]
    fn round_trip_through_edit() {
        for s in ["CCO", "c1ccccc1O", "O=C(O)C=CC(=O)O", "C[N+](=O)[O-]"] {
            let m = parse_smiles(s).unwrap();
            let e = EditableMol::from_molecule(&m);
            assert_eq!(e.to_molecule().unwrap().to_smiles(), m.to_smiles());
        }
    }

    #[test]
    fn remove_middle_carbon() {
        let m = parse_smiles("CCC").unwrap();
        let mut e = EditableMol::from_molecule(&m);
        e.remove_atom(1);
        e.set_bond(0, 1, 1);
        assert_eq!(e.to_molecule().unwrap().to_smiles(), "CC");
    }

    #[test]
    fn over_valence_rejected() {
        let mut e = EditableMol::new();
        let c = e.add_atom(Element::C);
        for _ in 0..5 {
            let x = e.add_atom(Element::C);
            e.set_bond(c, x, 1);
        }
        assert!(matches!(e.to_molecule(), Err(MolError::Valence { .. })));
    }

    #[test]
    fn opening_a_ring_keeps_connectivity() {
        let m = parse_smiles("C1CCCCC1").unwrap();
        let mut e = EditableMol::from_molecule(&m);
        let (a, b, _) = e.bonds()[0];
        e.remove_bond(a, b);
        assert!(e.is_connected());
        assert_eq!(e.to_molecule().unwrap().to_smiles(), "CCCCCC");
    }
}
