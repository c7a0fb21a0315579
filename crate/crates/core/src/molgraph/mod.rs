//! Molecular graph model and the SMILES front end.
//!
//! A [`Molecule`] is an attributed undirected graph of heavy atoms with
//! hydrogen counts folded into the atoms. Aromatic rings carry both the
//! aromatic flag and a Kekulé bond order so that valence checks and graph
//! edits always work on integral orders.

mod aromatic;
mod canon;
mod edit;
mod rings;
mod smiles;
mod validate;

use std::fmt;
use std::str::FromStr;

pub use canon::{canonical_ranks, canonicalize};
pub use edit::EditableMol;
pub use smiles::{parse_smiles, tokenize, SmilesToken};
pub use validate::{validate, validate_smiles, Issue, ValidityReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MolError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("valence exceeded on atom {atom} ({element})")]
    Valence { atom: usize, element: Element },
    #[error("element '{0}' is not supported")]
    Element(String),
    #[error("aromatic system cannot be kekulized")]
    Kekulize,
    #[error("formal charge {0} out of range")]
    Charge(i32),
}

/// Elements accepted anywhere in the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Element {
    H,
    C,
    N,
    O,
    F,
    P,
    S,
    Cl,
    Br,
    I,
}

/// The heavy-atom alphabet used by mutation and generation.
pub const HEAVY_ELEMENTS: [Element; 9] = [
    Element::C,
    Element::N,
    Element::O,
    Element::F,
    Element::P,
    Element::S,
    Element::Cl,
    Element::Br,
    Element::I,
];

impl Element {
    pub fn symbol(self) -> &'static str {
        match self {
            Element::H => "H",
            Element::C => "C",
            Element::N => "N",
            Element::O => "O",
            Element::F => "F",
            Element::P => "P",
            Element::S => "S",
            Element::Cl => "Cl",
            Element::Br => "Br",
            Element::I => "I",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Element> {
        Some(match s {
            "H" => Element::H,
            "C" => Element::C,
            "N" => Element::N,
            "O" => Element::O,
            "F" => Element::F,
            "P" => Element::P,
            "S" => Element::S,
            "Cl" => Element::Cl,
            "Br" => Element::Br,
            "I" => Element::I,
            _ => return None,
        })
    }

    pub fn atomic_number(self) -> u8 {
        match self {
            Element::H => 1,
            Element::C => 6,
            Element::N => 7,
            Element::O => 8,
            Element::F => 9,
            Element::P => 15,
            Element::S => 16,
            Element::Cl => 17,
            Element::Br => 35,
            Element::I => 53,
        }
    }

    /// Standard atomic weight (IUPAC conventional values).
    pub fn mass(self) -> f64 {
        match self {
            Element::H => 1.008,
            Element::C => 12.011,
            Element::N => 14.007,
            Element::O => 15.999,
            Element::F => 18.998,
            Element::P => 30.974,
            Element::S => 32.06,
            Element::Cl => 35.45,
            Element::Br => 79.904,
            Element::I => 126.904,
        }
    }

    /// Allowed total valences (bond orders + hydrogens) for a formal charge,
    /// in ascending order. Empty when the charge state is not supported.
    pub fn valences(self, charge: i8) -> &'static [u8] {
        use Element::*;
        match (self, charge) {
            (H, 0) => &[1],
            (H, 1) | (H, -1) => &[0],
            (C, 0) => &[4],
            (C, 1) | (C, -1) => &[3],
            (N, 0) => &[3],
            (N, 1) => &[4],
            (N, -1) => &[2],
            (N, -2) => &[1],
            (O, 0) => &[2],
            (O, 1) => &[3],
            (O, -1) => &[1],
            (O, -2) => &[0],
            (F, 0) | (Cl, 0) | (Br, 0) | (I, 0) => &[1],
            (F, -1) | (Cl, -1) | (Br, -1) | (I, -1) => &[0],
            (Cl, 1) | (Br, 1) | (I, 1) => &[2],
            (P, 0) => &[3, 5],
            (P, 1) => &[4],
            (P, -1) => &[2],
            (S, 0) => &[2, 4, 6],
            (S, 1) => &[3, 5],
            (S, -1) => &[1],
            (S, -2) => &[0],
            _ => &[],
        }
    }

    pub fn max_valence(self, charge: i8) -> Option<u8> {
        self.valences(charge).last().copied()
    }

    /// Implicit hydrogens for an organic-subset atom with the given explicit
    /// bond-order sum: fill up to the smallest allowed valence that fits.
    pub fn implicit_hydrogens(self, charge: i8, bond_sum: u8) -> u8 {
        self.valences(charge)
            .iter()
            .find(|&&v| v >= bond_sum)
            .map(|&v| v - bond_sum)
            .unwrap_or(0)
    }

    pub fn is_halogen(self) -> bool {
        matches!(self, Element::F | Element::Cl | Element::Br | Element::I)
    }
}

impl TryFrom<String> for Element {
    type Error = MolError;

    fn try_from(s: String) -> Result<Self, MolError> {
        Element::from_symbol(&s).ok_or(MolError::Element(s))
    }
}

impl From<Element> for String {
    fn from(e: Element) -> String {
        e.symbol().to_string()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Atom {
    pub element: Element,
    pub charge: i8,
    pub aromatic: bool,
    /// Hydrogens attached to this atom (implicit and bracket-specified).
    pub h_count: u8,
}

impl Atom {
    pub fn new(element: Element) -> Self {
        Atom {
            element,
            charge: 0,
            aromatic: false,
            h_count: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    pub fn from_int(order: u8) -> Option<BondOrder> {
        match order {
            1 => Some(BondOrder::Single),
            2 => Some(BondOrder::Double),
            3 => Some(BondOrder::Triple),
            _ => None,
        }
    }

    /// Small integer code used in hashing and canonical invariants.
    pub fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    /// Integral order from the Kekulé structure; equals `order` for
    /// non-aromatic bonds.
    pub kekule: u8,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

/// Immutable molecular graph.
#[derive(Debug, Clone)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    /// Per atom: (neighbor, bond index).
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Smallest set of smallest rings, each as an ordered atom cycle.
    rings: Vec<Vec<usize>>,
    ring_bond: Vec<bool>,
}

impl Molecule {
    /// Assembles a graph from parts. The caller guarantees bond endpoints are
    /// in range and distinct; ring data are derived here.
    pub(crate) fn from_parts(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Molecule {
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (i, b) in bonds.iter().enumerate() {
            adjacency[b.a].push((b.b, i));
            adjacency[b.b].push((b.a, i));
        }
        let ring_bond = rings::ring_bonds(atoms.len(), &bonds, &adjacency);
        let rings = rings::sssr(atoms.len(), &bonds, &adjacency, &ring_bond);
        Molecule {
            atoms,
            bonds,
            adjacency,
            rings,
            ring_bond,
        }
    }

    /// Builds the graph from a Kekulé structure and perceives aromaticity.
    pub(crate) fn perceived(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Molecule {
        let mut m = Molecule::from_parts(atoms, bonds);
        aromatic::perceive(
            &mut m.atoms,
            &mut m.bonds,
            &m.adjacency,
            &m.rings,
            &m.ring_bond,
        );
        m
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn bond(&self, i: usize) -> &Bond {
        &self.bonds[i]
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms
            .iter()
            .filter(|a| a.element != Element::H)
            .count()
    }

    /// (neighbor, bond index) pairs of atom `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .iter()
            .find(|&&(n, _)| n == b)
            .map(|&(_, bi)| bi)
    }

    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }

    pub fn is_ring_bond(&self, bond: usize) -> bool {
        self.ring_bond[bond]
    }

    pub fn is_ring_atom(&self, atom: usize) -> bool {
        self.adjacency[atom]
            .iter()
            .any(|&(_, bi)| self.ring_bond[bi])
    }

    /// Sum of Kekulé bond orders around atom `i`.
    pub fn bond_order_sum(&self, i: usize) -> u8 {
        self.adjacency[i]
            .iter()
            .map(|&(_, bi)| self.bonds[bi].kekule)
            .sum()
    }

    /// Connected components as sorted atom lists, ordered by smallest atom.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.atoms.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let u = comp[k];
                k += 1;
                for &(v, _) in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.atoms.len() <= 1 || self.components().len() == 1
    }

    pub fn total_hydrogens(&self) -> usize {
        self.atoms
            .iter()
            .map(|a| a.h_count as usize + usize::from(a.element == Element::H))
            .sum()
    }

    /// Relabels atoms: atom `i` of the result is atom `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Molecule {
        assert_eq!(order.len(), self.atoms.len());
        let mut inverse = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let atoms = order.iter().map(|&old| self.atoms[old]).collect();
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond {
                a: inverse[b.a],
                b: inverse[b.b],
                ..*b
            })
            .collect();
        Molecule::from_parts(atoms, bonds)
    }

    pub fn to_smiles(&self) -> String {
        canonicalize(self)
    }
}

impl FromStr for Molecule {
    type Err = MolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_smiles(s)
    }
}

impl fmt::Display for Molecule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonicalize(self))
    }
}

/// Reads a SMILES file: one molecule per line, `#` comments and blank lines
/// skipped. Only the first whitespace-separated field of a line is used.
pub fn read_smiles_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_whitespace().next().map(str::to_owned))
        .collect()
}
