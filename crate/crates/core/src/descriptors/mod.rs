//! Per-molecule descriptors, circular fingerprints and synthetic
//! accessibility.

mod fingerprint;
mod physchem;
mod sa;
mod topology;

use std::ops::Index;

use thiserror::Error;

pub use fingerprint::{
    diversity, morgan_environments, morgan_fingerprint, tanimoto, Environment, Fingerprint,
    FP_RADIUS, FP_WIDTH,
};
pub use physchem::{
    crippen_logp_mr, hba_count, hbd_count, molecular_weight, rotatable_bond_count, tpsa,
};
pub use sa::{
    sa_breakdown, sa_score, sa_score_with, FragmentTable, SaBreakdown, SaScore, SA_THRESHOLD,
};
pub use topology::{
    aromatic_ring_count, balaban_j, bridgehead_count, fused_ring_count, graph_diameter,
    hall_kier_alpha, hybridization, log_spanning_trees, longest_chain_length, spiro_count,
    Hybridization,
};

use crate::molgraph::{BondOrder, Element, Molecule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DescriptorError {
    #[error("fingerprint widths differ ({0} vs {1})")]
    WidthMismatch(usize, usize),
    #[error("need at least 2 items, got {0}")]
    TooFewItems(usize),
    #[error("fragment table line {0} malformed: {1:?}")]
    Table(usize, String),
}

pub const DESCRIPTOR_COUNT: usize = 43;

/// Catalog order of the descriptor vector.
pub const DESCRIPTOR_NAMES: [&str; DESCRIPTOR_COUNT] = [
    "molecular_weight",
    "heavy_atom_count",
    "hbd_count",
    "hba_count",
    "tpsa",
    "rotatable_bond_count",
    "ring_count",
    "aromatic_ring_count",
    "fraction_csp3",
    "wildman_crippen_logp",
    "wildman_crippen_mr",
    "num_h_atoms_total",
    "formal_charge_sum",
    "count_c",
    "count_n",
    "count_o",
    "count_f",
    "count_p",
    "count_s",
    "count_cl",
    "count_br",
    "count_i",
    "num_amide_bonds",
    "num_carboxylic_acids",
    "num_hydroxyl",
    "num_primary_amines",
    "num_aromatic_n",
    "num_aromatic_o",
    "bertz_complexity_proxy",
    "balaban_j_proxy",
    "num_double_bonds",
    "num_triple_bonds",
    "num_sp_atoms",
    "num_sp2_atoms",
    "longest_chain_length",
    "num_rings_size_5",
    "num_rings_size_6",
    "num_fused_rings",
    "hall_kier_alpha_proxy",
    "mean_atomic_mass",
    "max_ring_size",
    "num_bridgehead_proxy",
    "graph_diameter",
];

/// Descriptors that are real-valued rather than counts.
const CONTINUOUS: [&str; 9] = [
    "molecular_weight",
    "tpsa",
    "fraction_csp3",
    "wildman_crippen_logp",
    "wildman_crippen_mr",
    "bertz_complexity_proxy",
    "balaban_j_proxy",
    "hall_kier_alpha_proxy",
    "mean_atomic_mass",
];

pub fn descriptor_index(name: &str) -> Option<usize> {
    DESCRIPTOR_NAMES.iter().position(|&n| n == name)
}

pub fn is_count_descriptor(index: usize) -> bool {
    !CONTINUOUS.contains(&DESCRIPTOR_NAMES[index])
}

/// Machine-readable catalog: one "index<TAB>name" line per descriptor.
pub fn descriptor_manifest() -> String {
    DESCRIPTOR_NAMES
        .iter()
        .enumerate()
        .map(|(i, n)| format!("{i}\t{n}\n"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorVector {
    values: [f64; DESCRIPTOR_COUNT],
}

impl DescriptorVector {
    pub fn values(&self) -> &[f64; DESCRIPTOR_COUNT] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        descriptor_index(name).map(|i| self.values[i])
    }
}

impl Index<usize> for DescriptorVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

fn acyl_carbon(m: &Molecule, i: usize) -> bool {
    let a = m.atom(i);
    a.element == Element::C
        && !a.aromatic
        && m.neighbors(i).iter().any(|&(j, bi)| {
            m.bond(bi).order == BondOrder::Double && m.atom(j).element == Element::O
        })
}

fn is_hydroxyl_o(m: &Molecule, i: usize) -> bool {
    let a = m.atom(i);
    a.element == Element::O && !a.aromatic && a.charge == 0 && a.h_count == 1 && m.degree(i) == 1
}

fn amide_bonds(m: &Molecule) -> usize {
    m.bonds()
        .iter()
        .filter(|b| {
            b.order == BondOrder::Single
                && [(b.a, b.b), (b.b, b.a)]
                    .iter()
                    .any(|&(c, n)| acyl_carbon(m, c) && m.atom(n).element == Element::N)
        })
        .count()
}

fn carboxylic_acids(m: &Molecule) -> usize {
    (0..m.num_atoms())
        .filter(|&i| {
            acyl_carbon(m, i)
                && m.neighbors(i)
                    .iter()
                    .any(|&(j, bi)| m.bond(bi).order == BondOrder::Single && is_hydroxyl_o(m, j))
        })
        .count()
}

fn hydroxyls(m: &Molecule) -> usize {
    (0..m.num_atoms())
        .filter(|&i| is_hydroxyl_o(m, i) && !m.neighbors(i).iter().any(|&(j, _)| acyl_carbon(m, j)))
        .count()
}

fn primary_amines(m: &Molecule) -> usize {
    (0..m.num_atoms())
        .filter(|&i| {
            let a = m.atom(i);
            a.element == Element::N
                && !a.aromatic
                && a.charge == 0
                && a.h_count == 2
                && m.degree(i) == 1
                && m.neighbors(i).iter().all(|&(j, bi)| {
                    m.bond(bi).order == BondOrder::Single
                        && m.atom(j).element == Element::C
                        && !acyl_carbon(m, j)
                })
        })
        .count()
}

pub fn compute_descriptors(m: &Molecule) -> DescriptorVector {
    let heavy = m.heavy_atom_count();
    let hydrogens = m.total_hydrogens();
    let mw = molecular_weight(m);
    let count_el = |e: Element| m.atoms().iter().filter(|a| a.element == e).count() as f64;
    let carbons: Vec<usize> = (0..m.num_atoms())
        .filter(|&i| m.atom(i).element == Element::C)
        .collect();
    let csp3 = carbons
        .iter()
        .filter(|&&i| hybridization(m, i) == Hybridization::Sp3)
        .count();
    let hybrid_count = |h: Hybridization| {
        (0..m.num_atoms())
            .filter(|&i| m.atom(i).element != Element::H && hybridization(m, i) == h)
            .count() as f64
    };
    let (logp, mr) = crippen_logp_mr(m);
    let ring_sizes: Vec<usize> = m.rings().iter().map(Vec::len).collect();
    let bonds_of = |o: BondOrder| m.bonds().iter().filter(|b| b.order == o).count() as f64;
    let aromatic_of = |e: Element| {
        m.atoms()
            .iter()
            .filter(|a| a.aromatic && a.element == e)
            .count() as f64
    };
    let total_atoms = m.num_atoms() + m.atoms().iter().map(|a| a.h_count as usize).sum::<usize>();

    let values = [
        mw,
        heavy as f64,
        hbd_count(m) as f64,
        hba_count(m) as f64,
        tpsa(m),
        rotatable_bond_count(m) as f64,
        m.rings().len() as f64,
        aromatic_ring_count(m) as f64,
        if carbons.is_empty() {
            0.0
        } else {
            csp3 as f64 / carbons.len() as f64
        },
        logp,
        mr,
        hydrogens as f64,
        m.atoms().iter().map(|a| a.charge as f64).sum(),
        count_el(Element::C),
        count_el(Element::N),
        count_el(Element::O),
        count_el(Element::F),
        count_el(Element::P),
        count_el(Element::S),
        count_el(Element::Cl),
        count_el(Element::Br),
        count_el(Element::I),
        amide_bonds(m) as f64,
        carboxylic_acids(m) as f64,
        hydroxyls(m) as f64,
        primary_amines(m) as f64,
        aromatic_of(Element::N),
        aromatic_of(Element::O),
        log_spanning_trees(m),
        balaban_j(m),
        bonds_of(BondOrder::Double),
        bonds_of(BondOrder::Triple),
        hybrid_count(Hybridization::Sp),
        hybrid_count(Hybridization::Sp2),
        longest_chain_length(m) as f64,
        ring_sizes.iter().filter(|&&s| s == 5).count() as f64,
        ring_sizes.iter().filter(|&&s| s == 6).count() as f64,
        fused_ring_count(m) as f64,
        hall_kier_alpha(m),
        if total_atoms == 0 {
            0.0
        } else {
            mw / total_atoms as f64
        },
        ring_sizes.iter().copied().max().unwrap_or(0) as f64,
        bridgehead_count(m) as f64,
        graph_diameter(m) as f64,
    ];
    DescriptorVector { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    fn desc(s: &str) -> DescriptorVector {
        compute_descriptors(&parse_smiles(s).unwrap())
    }

    #[test]
    fn catalog_is_unique() {
        let mut names = DESCRIPTOR_NAMES.to_vec();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), DESCRIPTOR_COUNT);
        assert_eq!(descriptor_manifest().lines().count(), DESCRIPTOR_COUNT);
    }

    #[test]
    fn ethanol() {
        let d = desc("CCO");
        assert_eq!(d.get("heavy_atom_count"), Some(3.0));
        assert_eq!(d.get("hbd_count"), Some(1.0));
        assert_eq!(d.get("hba_count"), Some(1.0));
        assert_eq!(d.get("ring_count"), Some(0.0));
        assert!((d.get("molecular_weight").unwrap() - 46.069).abs() < 0.01);
        assert_eq!(d.get("num_hydroxyl"), Some(1.0));
        assert_eq!(d.get("fraction_csp3"), Some(1.0));
    }

    #[test]
    fn benzene() {
        let d = desc("c1ccccc1");
        assert_eq!(d.get("aromatic_ring_count"), Some(1.0));
        assert_eq!(d.get("rotatable_bond_count"), Some(0.0));
        assert_eq!(d.get("tpsa"), Some(0.0));
        assert_eq!(d.get("num_sp2_atoms"), Some(6.0));
    }

    #[test]
    fn functional_groups() {
        let d = desc("O=C(O)C=CC(=O)O");
        assert_eq!(d.get("num_carboxylic_acids"), Some(2.0));
        assert_eq!(d.get("num_hydroxyl"), Some(0.0));
        let d = desc("NC(=O)c1cccnc1");
        assert_eq!(d.get("num_amide_bonds"), Some(1.0));
        assert_eq!(d.get("num_primary_amines"), Some(0.0));
        assert_eq!(d.get("num_aromatic_n"), Some(1.0));
        assert_eq!(desc("NCC").get("num_primary_amines"), Some(1.0));
    }

    #[test]
    fn finite_and_nonnegative_counts() {
        for s in [
            "C",
            "CCO",
            "c1ccc2ccccc2c1",
            "C1CC2CCC1C2",
            "C[N+](=O)[O-]",
            "CC.O",
        ] {
            let d = desc(s);
            for (i, v) in d.values().iter().enumerate() {
                assert!(v.is_finite());
                if is_count_descriptor(i) && DESCRIPTOR_NAMES[i] != "formal_charge_sum" {
                    assert!(*v >= 0.0 && v.fract() == 0.0, "{s} {}", DESCRIPTOR_NAMES[i]);
                }
            }
        }
    }
}
