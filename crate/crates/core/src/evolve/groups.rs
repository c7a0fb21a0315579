//! Functional groups that the group mutations delete or relocate.

use crate::molgraph::{EditableMol, Element};

struct Pattern {
    name: &'static str,
    anchor: &'static [Element],
    anchor_charge: i8,
    /// Order of the single bond joining the group to the rest.
    outside_order: u8,
    /// Terminal atoms on the anchor: (element, bond order, charge).
    children: &'static [(Element, u8, i8)],
}

const PATTERNS: [Pattern; 8] = [
    Pattern {
        name: "carboxyl",
        anchor: &[Element::C],
        anchor_charge: 0,
        outside_order: 1,
        children: &[(Element::O, 2, 0), (Element::O, 1, 0)],
    },
    Pattern {
        name: "amide",
        anchor: &[Element::C],
        anchor_charge: 0,
        outside_order: 1,
        children: &[(Element::O, 2, 0), (Element::N, 1, 0)],
    },
    Pattern {
        name: "nitro",
        anchor: &[Element::N],
        anchor_charge: 1,
        outside_order: 1,
        children: &[(Element::O, 2, 0), (Element::O, 1, -1)],
    },
    Pattern {
        name: "methoxy",
        anchor: &[Element::O],
        anchor_charge: 0,
        outside_order: 1,
        children: &[(Element::C, 1, 0)],
    },
    Pattern {
        name: "hydroxyl",
        anchor: &[Element::O],
        anchor_charge: 0,
        outside_order: 1,
        children: &[],
    },
    Pattern {
        name: "primary_amine",
        anchor: &[Element::N],
        anchor_charge: 0,
        outside_order: 1,
        children: &[],
    },
    Pattern {
        name: "ketone",
        anchor: &[Element::O],
        anchor_charge: 0,
        outside_order: 2,
        children: &[],
    },
    Pattern {
        name: "halide",
        anchor: &[Element::F, Element::Cl, Element::Br, Element::I],
        anchor_charge: 0,
        outside_order: 1,
        children: &[],
    },
];

/// A group occurrence hanging off a carbon of the rest of the molecule by
/// one bond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMatch {
    pub name: &'static str,
    /// Anchor first, then its terminal children.
    pub atoms: Vec<usize>,
    /// Atom outside the group bonded to the anchor.
    pub attach: usize,
    pub order: u8,
}

impl GroupMatch {
    pub fn anchor(&self) -> usize {
        self.atoms[0]
    }
}

fn match_at(m: &EditableMol, i: usize, p: &Pattern) -> Option<GroupMatch> {
    if !p.anchor.contains(&m.element(i)) || m.charge(i) != p.anchor_charge {
        return None;
    }
    let nbrs = m.neighbors(i);
    if nbrs.len() != p.children.len() + 1 {
        return None;
    }
    for &attach in &nbrs {
        if m.element(attach) != Element::C || m.bond_order(i, attach) != Some(p.outside_order) {
            continue;
        }
        let mut used = vec![attach];
        let mut atoms = vec![i];
        for &(el, order, charge) in p.children {
            let hit = nbrs.iter().copied().find(|&j| {
                !used.contains(&j)
                    && m.degree(j) == 1
                    && m.element(j) == el
                    && m.charge(j) == charge
                    && m.bond_order(i, j) == Some(order)
            });
            match hit {
                Some(j) => {
                    used.push(j);
                    atoms.push(j);
                }
                None => break,
            }
        }
        if atoms.len() == p.children.len() + 1 {
            return Some(GroupMatch {
                name: p.name,
                atoms,
                attach,
                order: p.outside_order,
            });
        }
    }
    None
}

/// Every group occurrence, ordered by anchor atom then pattern table order.
pub fn find_groups(m: &EditableMol) -> Vec<GroupMatch> {
    (0..m.num_atoms())
        .flat_map(|i| PATTERNS.iter().filter_map(move |p| match_at(m, i, p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    fn names(s: &str) -> Vec<&'static str> {
        let m = EditableMol::from_molecule(&parse_smiles(s).unwrap());
        let mut v: Vec<_> = find_groups(&m).iter().map(|g| g.name).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn table() {
        assert_eq!(names("CC(=O)O"), ["carboxyl", "hydroxyl", "ketone"]);
        assert_eq!(
            names("c1ccccc1C(N)=O"),
            ["amide", "ketone", "primary_amine"]
        );
        assert_eq!(names("C[N+](=O)[O-]"), ["nitro"]);
        assert_eq!(names("COc1ccccc1"), ["methoxy"]);
        assert_eq!(names("ClCCBr"), ["halide", "halide"]);
        assert!(names("C1CCCCC1").is_empty());
        // formic acid has no outside attachment for the carboxyl
        assert_eq!(names("OC=O"), ["hydroxyl", "ketone"]);
    }

    #[test]
    fn groups_hang_by_one_bond() {
        let m = EditableMol::from_molecule(&parse_smiles("OC(=O)c1ccc(OC)cc1N").unwrap());
        for g in find_groups(&m) {
            let outside: usize = g
                .atoms
                .iter()
                .map(|&a| {
                    m.neighbors(a)
                        .iter()
                        .filter(|n| !g.atoms.contains(n))
                        .count()
                })
                .sum();
            assert_eq!(outside, 1, "{}", g.name);
        }
    }
}
