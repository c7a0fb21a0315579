//! Additive physicochemical descriptors: mass, H-bond donors/acceptors,
//! polar surface area, rotatable bonds and Crippen-type logP/MR.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::molgraph::{BondOrder, Element, Molecule};

pub fn molecular_weight(m: &Molecule) -> f64 {
    m.atoms()
        .iter()
        .map(|a| a.element.mass() + a.h_count as f64 * Element::H.mass())
        .sum()
}

#[derive(Default, Clone, Copy)]
struct BondCounts {
    single: u8,
    double: u8,
    triple: u8,
    aromatic: u8,
}

fn bond_counts(m: &Molecule, i: usize) -> BondCounts {
    let mut c = BondCounts::default();
    for &(_, bi) in m.neighbors(i) {
        match m.bond(bi).order {
            BondOrder::Single => c.single += 1,
            BondOrder::Double => c.double += 1,
            BondOrder::Triple => c.triple += 1,
            BondOrder::Aromatic => c.aromatic += 1,
        }
    }
    c
}

/// Total valence: Kekulé bond orders plus hydrogens.
fn valence(m: &Molecule, i: usize) -> u8 {
    m.bond_order_sum(i) + m.atom(i).h_count
}

fn has_double_to(m: &Molecule, i: usize, targets: &[Element]) -> bool {
    m.neighbors(i).iter().any(|&(j, bi)| {
        m.bond(bi).order == BondOrder::Double
            && !m.atom(j).aromatic
            && targets.contains(&m.atom(j).element)
    })
}

/// Hydrogen-bond donors (Lipinski definition): N-H with valence 3,
/// N+-H with valence 4, neutral O-H and S-H, neutral aromatic n-H.
pub fn hbd_count(m: &Molecule) -> usize {
    (0..m.num_atoms())
        .filter(|&i| {
            let a = m.atom(i);
            let v = valence(m, i);
            match (a.element, a.aromatic) {
                (Element::N, false) => a.h_count > 0 && (v == 3 || (a.charge == 1 && v == 4)),
                (Element::O | Element::S, false) => a.h_count == 1 && a.charge == 0,
                (Element::N, true) => a.h_count == 1 && a.charge == 0,
                _ => false,
            }
        })
        .count()
}

/// Hydrogen-bond acceptors (Lipinski definition): hydroxyl/thiol O or S
/// not attached to an acyl-type atom, two-valent O/S without H, anionic O/S,
/// three-valent N not attached to an acyclic X=O/N/P/S, and neutral
/// aromatic n without H, o and s.
pub fn hba_count(m: &Molecule) -> usize {
    const PI_TARGETS: [Element; 4] = [Element::O, Element::N, Element::P, Element::S];
    (0..m.num_atoms())
        .filter(|&i| {
            let a = m.atom(i);
            let v = valence(m, i);
            if a.aromatic {
                return a.charge == 0
                    && match a.element {
                        Element::N => a.h_count == 0,
                        Element::O | Element::S => true,
                        _ => false,
                    };
            }
            match a.element {
                Element::O | Element::S => {
                    if a.charge < 0 || (a.h_count == 0 && v == 2) {
                        return true;
                    }
                    a.h_count == 1
                        && v == 2
                        && m.neighbors(i).iter().any(|&(j, bi)| {
                            m.bond(bi).order == BondOrder::Single
                                && !has_double_to(m, j, &PI_TARGETS)
                        })
                }
                Element::N => {
                    v == 3
                        && !m.neighbors(i).iter().any(|&(j, bi)| {
                            m.bond(bi).order == BondOrder::Single
                                && m.neighbors(j).iter().any(|&(k, bk)| {
                                    m.bond(bk).order == BondOrder::Double
                                        && !m.is_ring_bond(bk)
                                        && !m.atom(k).aromatic
                                        && PI_TARGETS.contains(&m.atom(k).element)
                                })
                        })
                }
                _ => false,
            }
        })
        .count()
}

fn in_three_ring(m: &Molecule, i: usize) -> bool {
    m.rings().iter().any(|r| r.len() == 3 && r.contains(&i))
}

/// Topological polar surface area from the Ertl N/O contribution table
/// (S and P excluded). Unlisted N/O environments fall back to a
/// degree/hydrogen estimate.
pub fn tpsa(m: &Molecule) -> f64 {
    let mut total = 0.0;
    for i in 0..m.num_atoms() {
        let a = m.atom(i);
        if !matches!(a.element, Element::N | Element::O) {
            continue;
        }
        let c = bond_counts(m, i);
        let h = a.h_count;
        let q = a.charge;
        let ring3 = in_three_ring(m, i);
        let (s, d, t, ar) = (c.single, c.double, c.triple, c.aromatic);
        let value = match (a.element, a.aromatic) {
            (Element::N, false) => match (q, h, s, d, t) {
                (0, 0, 3, 0, 0) => Some(if ring3 { 3.01 } else { 3.24 }),
                (0, 0, 1, 1, 0) => Some(12.36),
                (0, 0, 0, 0, 1) => Some(23.79),
                (0, 0, 1, 2, 0) => Some(11.68),
                (0, 0, 0, 1, 1) => Some(13.60),
                (0, 1, 2, 0, 0) => Some(if ring3 { 21.94 } else { 12.03 }),
                (0, 1, 0, 1, 0) => Some(23.85),
                (0, 2, 1, 0, 0) => Some(26.02),
                (1, 0, 4, 0, 0) => Some(0.0),
                (1, 0, 2, 1, 0) => Some(3.01),
                (1, 0, 1, 0, 1) => Some(4.36),
                (1, 1, 3, 0, 0) => Some(4.44),
                (1, 1, 1, 1, 0) => Some(13.97),
                (1, 2, 2, 0, 0) => Some(16.61),
                (1, 2, 0, 1, 0) => Some(25.59),
                (1, 3, 1, 0, 0) => Some(27.64),
                _ => None,
            },
            (Element::N, true) => match (q, h, ar, s, d) {
                (0, 0, 2, 0, 0) => Some(12.89),
                (0, 0, 3, 0, 0) => Some(4.41),
                (0, 0, 2, 1, 0) => Some(4.93),
                (0, 0, 2, 0, 1) => Some(8.39),
                (0, 1, 2, 0, 0) => Some(15.79),
                (1, 0, 3, 0, 0) => Some(4.10),
                (1, 0, 2, 1, 0) => Some(3.88),
                (1, 1, 2, 0, 0) => Some(14.14),
                _ => None,
            },
            (Element::O, false) => match (q, h, s, d) {
                (0, 0, 2, 0) => Some(if ring3 { 12.53 } else { 9.23 }),
                (0, 0, 0, 1) => Some(17.07),
                (0, 1, 1, 0) => Some(20.23),
                (-1, 0, 1, 0) => Some(23.06),
                _ => None,
            },
            (Element::O, true) => match (q, h, ar) {
                (0, 0, 2) => Some(13.14),
                _ => None,
            },
            _ => None,
        };
        total += value.unwrap_or_else(|| {
            let deg = m.degree(i) as f64;
            let est = match a.element {
                Element::N => 30.5 - 8.2 * deg + 1.5 * h as f64,
                _ => 28.5 - 8.6 * deg + 1.5 * h as f64,
            };
            est.max(0.0)
        });
    }
    total
}

fn has_triple(m: &Molecule, i: usize) -> bool {
    m.neighbors(i)
        .iter()
        .any(|&(_, bi)| m.bond(bi).order == BondOrder::Triple)
}

fn trihalomethyl(m: &Molecule, i: usize) -> bool {
    if m.atom(i).element != Element::C || m.atom(i).aromatic {
        return false;
    }
    [Element::F, Element::Cl, Element::Br].iter().any(|&x| {
        m.neighbors(i)
            .iter()
            .filter(|&&(j, bi)| m.atom(j).element == x && m.bond(bi).order == BondOrder::Single)
            .count()
            >= 3
    })
}

fn tert_butyl_center(m: &Molecule, i: usize) -> bool {
    let a = m.atom(i);
    a.element == Element::C
        && !a.aromatic
        && m.neighbors(i)
            .iter()
            .filter(|&&(j, _)| {
                let b = m.atom(j);
                b.element == Element::C && !b.aromatic && b.h_count == 3
            })
            .count()
            >= 3
}

/// Acyl-type carbon: three heavy neighbors and a double bond to aliphatic
/// N, O or S.
fn acyl_carbon(m: &Molecule, i: usize) -> bool {
    let a = m.atom(i);
    a.element == Element::C
        && !a.aromatic
        && m.degree(i) == 3
        && has_double_to(m, i, &[Element::N, Element::O, Element::S])
}

fn amidine_carbon(m: &Molecule, i: usize) -> bool {
    let a = m.atom(i);
    a.element == Element::C
        && !a.aromatic
        && m.degree(i) == 3
        && m.neighbors(i).iter().any(|&(j, bi)| {
            m.bond(bi).order == BondOrder::Double
                && m.atom(j).element == Element::N
                && !m.atom(j).aromatic
                && m.atom(j).charge == 1
        })
}

/// Hetero atom that can sit on the single-bond side of an amide, ester or
/// thioester linkage.
fn linker_hetero(m: &Molecule, i: usize) -> bool {
    let a = m.atom(i);
    match a.element {
        Element::N => true,
        Element::O => !a.aromatic,
        Element::S => !a.aromatic && m.degree(i) != 1,
        _ => false,
    }
}

fn acyclic_single_to(m: &Molecule, i: usize, pred: impl Fn(usize) -> bool) -> bool {
    m.neighbors(i)
        .iter()
        .any(|&(j, bi)| m.bond(bi).order == BondOrder::Single && !m.is_ring_bond(bi) && pred(j))
}

fn rotatable_end(m: &Molecule, i: usize) -> bool {
    m.degree(i) > 1 && !has_triple(m, i) && !trihalomethyl(m, i) && !tert_butyl_center(m, i)
}

fn rotatable_anchor(m: &Molecule, i: usize) -> bool {
    if !rotatable_end(m, i) {
        return false;
    }
    let amide_c = acyl_carbon(m, i) && acyclic_single_to(m, i, |j| linker_hetero(m, j));
    let amide_x = linker_hetero(m, i) && acyclic_single_to(m, i, |j| acyl_carbon(m, j));
    let is_n_linker = m.atom(i).element == Element::N && m.degree(i) != 1;
    let amidine_c = amidine_carbon(m, i)
        && acyclic_single_to(m, i, |j| {
            m.atom(j).element == Element::N && m.degree(j) != 1
        });
    let amidine_n = is_n_linker && acyclic_single_to(m, i, |j| amidine_carbon(m, j));
    !(amide_c || amide_x || amidine_c || amidine_n)
}

/// Rotatable bonds, strict definition: acyclic single bonds between
/// non-terminal atoms, excluding triple-bonded atoms, CX3 and t-butyl
/// groups and amide/ester/amidine C-X bonds.
pub fn rotatable_bond_count(m: &Molecule) -> usize {
    m.bonds()
        .iter()
        .enumerate()
        .filter(|&(bi, b)| {
            b.order == BondOrder::Single
                && !m.is_ring_bond(bi)
                && ((rotatable_anchor(m, b.a) && rotatable_end(m, b.b))
                    || (rotatable_anchor(m, b.b) && rotatable_end(m, b.a)))
        })
        .count()
}

struct CrippenTable {
    levels: [HashMap<String, (f64, f64)>; 3],
}

fn crippen_table() -> &'static CrippenTable {
    static TABLE: OnceLock<CrippenTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut levels: [HashMap<String, (f64, f64)>; 3] = Default::default();
        for line in include_str!("../../data/crippen_contribs.tsv").lines() {
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            let level: usize = f[0].parse().expect("crippen level");
            let lp: f64 = f[2].parse().expect("crippen logp");
            let mr: f64 = f[3].parse().expect("crippen mr");
            levels[level].insert(f[1].to_string(), (lp, mr));
        }
        CrippenTable { levels }
    })
}

fn symbol(m: &Molecule, i: usize) -> String {
    let a = m.atom(i);
    if a.aromatic {
        a.element.symbol().to_lowercase()
    } else {
        a.element.symbol().to_string()
    }
}

/// Environment keys from most to least specific.
pub(crate) fn atom_keys(m: &Molecule, i: usize) -> [String; 3] {
    let a = m.atom(i);
    let k0 = format!("{}H{}{:+}", symbol(m, i), a.h_count, a.charge);
    let mut first: Vec<String> = Vec::new();
    let mut second: Vec<String> = Vec::new();
    for &(j, bi) in m.neighbors(i) {
        let code = m.bond(bi).order.code();
        first.push(format!("{}{}", symbol(m, j), code));
        let mut far: Vec<String> = m
            .neighbors(j)
            .iter()
            .filter(|&&(k, _)| k != i)
            .map(|&(k, _)| symbol(m, k))
            .collect();
        far.sort();
        second.push(format!("{}{}({})", symbol(m, j), code, far.join(",")));
    }
    first.sort();
    second.sort();
    [
        format!("{k0}|{}", second.join(";")),
        format!("{k0}|{}", first.join(",")),
        k0,
    ]
}

fn atom_crippen(m: &Molecule, i: usize) -> (f64, f64) {
    let table = crippen_table();
    for (level, key) in atom_keys(m, i).iter().enumerate() {
        if let Some(&v) = table.levels[level].get(key) {
            return v;
        }
    }
    // element-only fallback: mean over keys sharing the element symbol
    let sym = symbol(m, i);
    let mut sum = (0.0, 0.0);
    let mut n = 0;
    for (k, v) in &table.levels[2] {
        if k.split('H').next() == Some(sym.as_str()) {
            sum.0 += v.0;
            sum.1 += v.1;
            n += 1;
        }
    }
    if n == 0 {
        (0.0, 0.0)
    } else {
        (sum.0 / n as f64, sum.1 / n as f64)
    }
}

/// Atom-additive (logP, molar refractivity) with per-environment
/// contributions tabulated from the Wildman-Crippen scheme.
pub fn crippen_logp_mr(m: &Molecule) -> (f64, f64) {
    (0..m.num_atoms()).fold((0.0, 0.0), |acc, i| {
        let (lp, mr) = atom_crippen(m, i);
        (acc.0 + lp, acc.1 + mr)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    fn mol(s: &str) -> Molecule {
        parse_smiles(s).unwrap()
    }

    #[test]
    fn ethanol_counts() {
        let m = mol("CCO");
        assert!((molecular_weight(&m) - 46.069).abs() < 0.01);
        assert_eq!(hbd_count(&m), 1);
        assert_eq!(hba_count(&m), 1);
        assert!((tpsa(&m) - 20.23).abs() < 1e-9);
    }

    #[test]
    fn tpsa_known_values() {
        assert_eq!(tpsa(&mol("c1ccccc1")), 0.0);
        // nitrobenzene
        assert!((tpsa(&mol("c1ccccc1[N+](=O)[O-]")) - 43.14).abs() < 1e-6);
        // acetic acid: carbonyl O + hydroxyl
        assert!((tpsa(&mol("CC(=O)O")) - 37.30).abs() < 1e-6);
    }

    #[test]
    fn rotatable_examples() {
        assert_eq!(rotatable_bond_count(&mol("c1ccccc1")), 0);
        assert_eq!(rotatable_bond_count(&mol("CC(=O)NC")), 0);
        assert_eq!(rotatable_bond_count(&mol("CCNC(C)=O")), 1);
        assert_eq!(rotatable_bond_count(&mol("CCOCC")), 2);
        assert_eq!(rotatable_bond_count(&mol("CC#CC")), 0);
    }

    #[test]
    fn amide_nitrogen_is_not_an_acceptor() {
        assert_eq!(hba_count(&mol("CC(=O)N")), 1);
        assert_eq!(hbd_count(&mol("CC(=O)N")), 1);
    }
}
