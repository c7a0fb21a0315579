//! Graph mutations with constraint-checked rerolls.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::groups::find_groups;
use crate::molgraph::{parse_smiles, validate, EditableMol, Element, Molecule, HEAVY_ELEMENTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MutationOp {
    AddAtom,
    DeleteAtom,
    ReplaceAtom,
    DeleteBond,
    ReplaceBond,
    DeleteFunctionalGroup,
    MoveFunctionalGroup,
    InsertCarbon,
    RemoveTwoNeighborAtom,
}

impl MutationOp {
    pub const ALL: [MutationOp; 9] = [
        MutationOp::AddAtom,
        MutationOp::DeleteAtom,
        MutationOp::ReplaceAtom,
        MutationOp::DeleteBond,
        MutationOp::ReplaceBond,
        MutationOp::DeleteFunctionalGroup,
        MutationOp::MoveFunctionalGroup,
        MutationOp::InsertCarbon,
        MutationOp::RemoveTwoNeighborAtom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutationOp::AddAtom => "add_atom",
            MutationOp::DeleteAtom => "delete_atom",
            MutationOp::ReplaceAtom => "replace_atom",
            MutationOp::DeleteBond => "delete_bond",
            MutationOp::ReplaceBond => "replace_bond",
            MutationOp::DeleteFunctionalGroup => "delete_functional_group",
            MutationOp::MoveFunctionalGroup => "move_functional_group",
            MutationOp::InsertCarbon => "insert_carbon",
            MutationOp::RemoveTwoNeighborAtom => "remove_two_neighbor_atom",
        }
    }
}

impl fmt::Display for MutationOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Structural limits every population member must satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraints {
    pub max_heavy_atoms: usize,
    pub elements: Vec<Element>,
}

impl Default for Constraints {
    fn default() -> Self {
        Constraints {
            max_heavy_atoms: 50,
            elements: HEAVY_ELEMENTS.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    Disconnected,
    TooManyHeavyAtoms(usize),
    Element(Element),
    Invalid(String),
    /// The canonical SMILES does not parse back to the same structure.
    RoundTrip(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => f.write_str("no atoms"),
            Violation::Disconnected => f.write_str("disconnected"),
            Violation::TooManyHeavyAtoms(n) => write!(f, "{n} heavy atoms"),
            Violation::Element(e) => write!(f, "element {} not allowed", e.symbol()),
            Violation::Invalid(m) => write!(f, "invalid: {m}"),
            Violation::RoundTrip(s) => write!(f, "canonical form {s} does not round-trip"),
        }
    }
}

impl Constraints {
    /// Checks a molecule and returns its canonical SMILES.
    pub fn check(&self, m: &Molecule) -> Result<String, Violation> {
        if m.num_atoms() == 0 {
            return Err(Violation::Empty);
        }
        if let Some(a) = m
            .atoms()
            .iter()
            .find(|a| !self.elements.contains(&a.element))
        {
            return Err(Violation::Element(a.element));
        }
        let heavy = m.heavy_atom_count();
        if heavy > self.max_heavy_atoms {
            return Err(Violation::TooManyHeavyAtoms(heavy));
        }
        if !m.is_connected() {
            return Err(Violation::Disconnected);
        }
        let report = validate(m);
        if let Some(issue) = report.issues.first() {
            return Err(Violation::Invalid(issue.to_string()));
        }
        let smiles = m.to_smiles();
        match parse_smiles(&smiles) {
            Ok(back) if back.to_smiles() == smiles => Ok(smiles),
            _ => Err(Violation::RoundTrip(smiles)),
        }
    }

    fn freeze(&self, edit: &EditableMol) -> Option<(Molecule, String)> {
        if edit.num_atoms() == 0 || !edit.is_connected() {
            return None;
        }
        let m = edit.to_molecule().ok()?;
        let s = self.check(&m).ok()?;
        Some((m, s))
    }
}

fn pick<T: Copy>(items: &[T], rng: &mut impl Rng) -> Option<T> {
    items.choose(rng).copied()
}

fn stays_connected(m: &EditableMol, edit: impl Fn(&mut EditableMol)) -> bool {
    let mut c = m.clone();
    edit(&mut c);
    c.is_connected()
}

/// Applies one operator without checking the result. `None` when the
/// operator has no applicable site.
pub fn apply_operator(
    mol: &Molecule,
    op: MutationOp,
    elements: &[Element],
    rng: &mut impl Rng,
) -> Option<EditableMol> {
    let mut m = EditableMol::from_molecule(mol);
    let n = m.num_atoms();
    match op {
        MutationOp::AddAtom => {
            let sites: Vec<usize> = (0..n).filter(|&i| m.free_valence(i) > 0).collect();
            let a = pick(&sites, rng)?;
            let el = pick(elements, rng)?;
            let max = m.free_valence(a).min(el.max_valence(0)?).min(3);
            if max == 0 {
                return None;
            }
            let order = rng.gen_range(1..=max);
            let b = m.add_atom(el);
            m.set_bond(a, b, order);
        }
        MutationOp::DeleteAtom => {
            if n < 2 {
                return None;
            }
            let sites: Vec<usize> = (0..n)
                .filter(|&i| stays_connected(&m, |c| c.remove_atom(i)))
                .collect();
            m.remove_atom(pick(&sites, rng)?);
        }
        MutationOp::ReplaceAtom => {
            let a = rng.gen_range(0..n);
            let used = m.bond_sum(a);
            let options: Vec<Element> = elements
                .iter()
                .copied()
                .filter(|&e| e != m.element(a) && e.max_valence(0).is_some_and(|v| v >= used))
                .collect();
            m.set_element(a, pick(&options, rng)?);
        }
        MutationOp::DeleteBond => {
            let ring: Vec<(usize, usize, u8)> = m
                .bonds()
                .iter()
                .copied()
                .filter(|&(a, b, _)| {
                    stays_connected(&m, |c| {
                        c.remove_bond(a, b);
                    })
                })
                .collect();
            let (a, b, _) = pick(&ring, rng)?;
            m.remove_bond(a, b);
        }
        MutationOp::ReplaceBond => {
            let bonds = m.bonds().to_vec();
            let (a, b, order) = pick(&bonds, rng)?;
            let room = m.free_valence(a).min(m.free_valence(b));
            let options: Vec<u8> = (1..=3u8)
                .filter(|&o| o != order && o <= order + room)
                .collect();
            m.set_bond(a, b, pick(&options, rng)?);
        }
        MutationOp::DeleteFunctionalGroup => {
            let groups = find_groups(&m);
            let g = groups.choose(rng)?;
            if g.atoms.len() >= n {
                return None;
            }
            m.remove_atoms(&g.atoms);
        }
        MutationOp::MoveFunctionalGroup => {
            let groups = find_groups(&m);
            let g = groups.choose(rng)?.clone();
            m.remove_bond(g.anchor(), g.attach);
            let targets: Vec<usize> = (0..n)
                .filter(|&i| !g.atoms.contains(&i) && i != g.attach && m.free_valence(i) >= g.order)
                .collect();
            m.set_bond(g.anchor(), pick(&targets, rng)?, g.order);
        }
        MutationOp::InsertCarbon => {
            let bonds = m.bonds().to_vec();
            let (a, b, _) = pick(&bonds, rng)?;
            m.remove_bond(a, b);
            let c = m.add_atom(Element::C);
            m.set_bond(a, c, 1);
            m.set_bond(c, b, 1);
        }
        MutationOp::RemoveTwoNeighborAtom => {
            let sites: Vec<usize> = (0..n)
                .filter(|&i| {
                    let nb = m.neighbors(i);
                    nb.len() == 2 && m.bond_order(nb[0], nb[1]).is_none()
                })
                .collect();
            let i = pick(&sites, rng)?;
            let nb = m.neighbors(i);
            m.remove_atom(i);
            let shift = |j: usize| if j > i { j - 1 } else { j };
            m.set_bond(shift(nb[0]), shift(nb[1]), 1);
        }
    }
    Some(m)
}

/// One operator application that passes every constraint, or `None`.
pub fn try_operator(
    mol: &Molecule,
    op: MutationOp,
    constraints: &Constraints,
    rng: &mut impl Rng,
) -> Option<(Molecule, String)> {
    constraints.freeze(&apply_operator(mol, op, &constraints.elements, rng)?)
}

pub const MAX_ATTEMPTS: usize = 20;

#[derive(Debug, Clone)]
pub struct Mutation {
    pub molecule: Molecule,
    pub smiles: String,
    /// `None` when every attempt was rejected and the input came back.
    pub op: Option<MutationOp>,
    pub attempts: usize,
}

impl Mutation {
    pub fn is_noop(&self) -> bool {
        self.op.is_none()
    }
}

/// Applies a uniformly chosen operator, rerolling rejected results up to
/// 20 times before returning the input unchanged.
pub fn mutate(mol: &Molecule, constraints: &Constraints, rng: &mut impl Rng) -> Mutation {
    for attempt in 1..=MAX_ATTEMPTS {
        let op = MutationOp::ALL[rng.gen_range(0..MutationOp::ALL.len())];
        if let Some((molecule, smiles)) = try_operator(mol, op, constraints, rng) {
            return Mutation {
                molecule,
                smiles,
                op: Some(op),
                attempts: attempt,
            };
        }
    }
    Mutation {
        molecule: mol.clone(),
        smiles: mol.to_smiles(),
        op: None,
        attempts: MAX_ATTEMPTS,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mol(s: &str) -> Molecule {
        parse_smiles(s).unwrap()
    }

    fn outcomes(s: &str, op: MutationOp, tries: u64) -> Vec<String> {
        let c = Constraints::default();
        let mut out: Vec<String> = (0..tries)
            .filter_map(|seed| {
                try_operator(&mol(s), op, &c, &mut ChaCha8Rng::seed_from_u64(seed)).map(|r| r.1)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn add_atom_on_methane() {
        let seen = outcomes("C", MutationOp::AddAtom, 200);
        assert!(seen.contains(&"CC".to_string()));
        assert!(seen.contains(&"CO".to_string()));
        assert!(seen.contains(&"CN".to_string()));
        for s in &seen {
            assert_eq!(mol(s).heavy_atom_count(), 2, "{s}");
        }
    }

    #[test]
    fn remove_middle_of_propane() {
        assert_eq!(
            outcomes("CCC", MutationOp::RemoveTwoNeighborAtom, 20),
            ["CC"]
        );
    }

    #[test]
    fn delete_bond_only_opens_rings() {
        assert_eq!(outcomes("C1CCCCC1", MutationOp::DeleteBond, 20), ["CCCCCC"]);
        assert!(outcomes("CCCC", MutationOp::DeleteBond, 20).is_empty());
    }

    #[test]
    fn insert_carbon_and_groups() {
        assert_eq!(outcomes("CO", MutationOp::InsertCarbon, 20), ["CCO"]);
        assert_eq!(
            outcomes("OC(=O)c1ccccc1", MutationOp::DeleteFunctionalGroup, 50).len(),
            3
        );
        let moved = outcomes("Oc1ccccc1C", MutationOp::MoveFunctionalGroup, 100);
        assert!(
            moved.contains(&"Cc1ccc(O)cc1".to_string()) || moved.iter().any(|s| s.contains('O'))
        );
        for s in moved {
            assert_eq!(mol(&s).heavy_atom_count(), 8);
        }
    }

    #[test]
    fn constraints() {
        let c = Constraints::default();
        assert_eq!(c.check(&mol("CC.O")), Err(Violation::Disconnected));
        assert!(matches!(
            c.check(&mol(&"C".repeat(51))),
            Err(Violation::TooManyHeavyAtoms(51))
        ));
        assert!(c.check(&mol(&"C".repeat(50))).is_ok());
        let small = Constraints {
            elements: vec![Element::C],
            ..Constraints::default()
        };
        assert_eq!(small.check(&mol("CO")), Err(Violation::Element(Element::O)));
    }

    #[test]
    fn mutate_respects_limits() {
        let c = Constraints {
            max_heavy_atoms: 6,
            ..Constraints::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut m = mol("c1ccccc1");
        for _ in 0..300 {
            let r = mutate(&m, &c, &mut rng);
            assert!(c.check(&r.molecule).is_ok());
            m = r.molecule;
        }
    }

    #[test]
    fn exhausted_rerolls_return_input() {
        let c = Constraints {
            max_heavy_atoms: 1,
            elements: vec![Element::F],
        };
        let r = mutate(&mol("F"), &c, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(r.is_noop());
        assert_eq!(r.smiles, "F");
        assert_eq!(r.attempts, MAX_ATTEMPTS);
    }
}
