//! Invariant checks on molecular graphs.

use std::fmt;

use super::{parse_smiles, BondOrder, MolError, Molecule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Issue {
    Syntax(String),
    ValenceError {
        atom: usize,
    },
    ElementError(String),
    ChargeOutOfRange {
        atom: usize,
        charge: i32,
    },
    AromaticInconsistency {
        bond: Option<usize>,
    },
    /// Several disconnected fragments. A warning: such molecules still
    /// count as valid in generation metrics but are rejected by evolution.
    FragmentWarning {
        fragments: usize,
    },
}

impl Issue {
    pub fn is_warning(&self) -> bool {
        matches!(self, Issue::FragmentWarning { .. })
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::Syntax(m) => write!(f, "syntax: {m}"),
            Issue::ValenceError { atom } => write!(f, "valence exceeded on atom {atom}"),
            Issue::ElementError(e) => write!(f, "element not allowed: {e}"),
            Issue::ChargeOutOfRange { atom, charge } => {
                write!(f, "charge {charge} out of range on atom {atom}")
            }
            Issue::AromaticInconsistency { bond } => match bond {
                Some(b) => write!(f, "inconsistent aromatic bond {b}"),
                None => f.write_str("aromatic system cannot be kekulized"),
            },
            Issue::FragmentWarning { fragments } => write!(f, "{fragments} fragments"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub issues: Vec<Issue>,
}

impl ValidityReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    /// No errors; warnings allowed.
    pub fn is_valid(&self) -> bool {
        self.issues.iter().all(Issue::is_warning)
    }

    pub fn is_fragmented(&self) -> bool {
        self.issues
            .iter()
            .any(|i| matches!(i, Issue::FragmentWarning { .. }))
    }
}

pub fn validate(m: &Molecule) -> ValidityReport {
    let mut issues = Vec::new();
    for (i, a) in m.atoms().iter().enumerate() {
        if !(-2..=2).contains(&a.charge) {
            issues.push(Issue::ChargeOutOfRange {
                atom: i,
                charge: a.charge as i32,
            });
            continue;
        }
        let used = m.bond_order_sum(i) + a.h_count;
        match a.element.max_valence(a.charge) {
            Some(max) if used <= max => {}
            _ => issues.push(Issue::ValenceError { atom: i }),
        }
    }
    for (bi, b) in m.bonds().iter().enumerate() {
        let aromatic_ends = m.atom(b.a).aromatic && m.atom(b.b).aromatic;
        let consistent = match b.order {
            BondOrder::Aromatic => aromatic_ends && m.is_ring_bond(bi),
            other => other.code() == b.kekule,
        };
        if !consistent {
            issues.push(Issue::AromaticInconsistency { bond: Some(bi) });
        }
    }
    for (i, a) in m.atoms().iter().enumerate() {
        if a.aromatic
            && !m
                .neighbors(i)
                .iter()
                .any(|&(_, bi)| m.bond(bi).order == BondOrder::Aromatic)
        {
            issues.push(Issue::AromaticInconsistency { bond: None });
        }
    }
    let fragments = m.components().len();
    if fragments > 1 {
        issues.push(Issue::FragmentWarning { fragments });
    }
    ValidityReport { issues }
}

/// Parses and validates a SMILES string, folding parse errors into the report.
pub fn validate_smiles(s: &str) -> (Option<Molecule>, ValidityReport) {
    match parse_smiles(s) {
        Ok(m) => {
            let r = validate(&m);
            (Some(m), r)
        }
        Err(e) => {
            let issue = match e {
                MolError::Syntax { .. } => Issue::Syntax(e.to_string()),
                MolError::Valence { atom, .. } => Issue::ValenceError { atom },
                MolError::Element(el) => Issue::ElementError(el),
                MolError::Kekulize => Issue::AromaticInconsistency { bond: None },
                MolError::Charge(c) => Issue::ChargeOutOfRange { atom: 0, charge: c },
            };
            (
                None,
                ValidityReport {
                    issues: vec![issue],
                },
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::{Atom, Bond, Element};

    #[test]
    fn ethane_is_clean() {
        assert!(validate(&parse_smiles("CC").unwrap()).is_empty());
    }

    #[test]
    fn pentavalent_carbon() {
        let mut atoms = vec![Atom::new(Element::C)];
        let mut bonds = Vec::new();
        for k in 1..=5 {
            atoms.push(Atom {
                h_count: 3,
                ..Atom::new(Element::C)
            });
            bonds.push(Bond {
                a: 0,
                b: k,
                order: BondOrder::Single,
                kekule: 1,
            });
        }
        let m = Molecule::from_parts(atoms, bonds);
        assert_eq!(validate(&m).issues, vec![Issue::ValenceError { atom: 0 }]);
    }

    #[test]
    fn fragments_warn_but_stay_valid() {
        let r = validate(&parse_smiles("CC.O").unwrap());
        assert_eq!(r.issues, vec![Issue::FragmentWarning { fragments: 2 }]);
        assert!(r.is_valid());
        assert!(!r.is_empty());
    }

    #[test]
    fn parse_errors_become_issues() {
        assert!(!validate_smiles("C1CC").1.is_valid());
        assert!(matches!(
            validate_smiles("[Na+].[Cl-]").1.issues[0],
            Issue::ElementError(_)
        ));
        assert!(validate_smiles("c1ccccc1").1.is_empty());
    }
}
