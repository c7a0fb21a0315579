//! SMILES reader: organic subset, bracket atoms, charges, branches, ring
//! closures (including `%nn`) and `.` fragments. Stereo marks are read and
//! dropped; isotopes and atom classes are ignored.

use std::collections::HashMap;

use log::warn;

use super::{aromatic, Atom, Bond, BondOrder, Element, MolError, Molecule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BondSym {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondSym {
    fn from_char(c: char) -> Option<BondSym> {
        match c {
            '-' | '/' | '\\' => Some(BondSym::Single),
            '=' => Some(BondSym::Double),
            '#' => Some(BondSym::Triple),
            ':' => Some(BondSym::Aromatic),
            _ => None,
        }
    }
}

struct RawAtom {
    element: Element,
    aromatic: bool,
    charge: i8,
    /// `None` for organic-subset atoms (hydrogens implied by valence).
    h_count: Option<u8>,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    atoms: Vec<RawAtom>,
    bonds: Vec<(usize, usize, Option<BondSym>)>,
    stereo_seen: bool,
}

/// A lexical token of a SMILES string.
pub type SmilesToken = String;

/// Splits a SMILES string into lexical tokens: bracket atoms, two-letter
/// halogens and `%nn` ring labels are single tokens, everything else is one
/// character. No validation is performed.
pub fn tokenize(s: &str) -> Vec<SmilesToken> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let next = |k: usize| s[k..].chars().next().map_or(k, |c| k + c.len_utf8());
    let mut i = 0;
    while i < b.len() {
        let end = match b[i] {
            b'[' => s[i..].find(']').map(|k| i + k + 1).unwrap_or(b.len()),
            b'C' if b.get(i + 1) == Some(&b'l') => i + 2,
            b'B' if b.get(i + 1) == Some(&b'r') => i + 2,
            b'%' if i + 2 < b.len() => next(next(i + 1)),
            _ => next(i),
        };
        out.push(s[i..end].to_string());
        i = end;
    }
    out
}

pub fn parse_smiles(s: &str) -> Result<Molecule, MolError> {
    if s.is_empty() {
        return Err(MolError::Syntax {
            pos: 0,
            msg: "empty string".into(),
        });
    }
    if !s.is_ascii() {
        return Err(MolError::Syntax {
            pos: 0,
            msg: "non-ASCII input".into(),
        });
    }
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        bonds: Vec::new(),
        stereo_seen: false,
    };
    p.parse_chain()?;
    if p.stereo_seen {
        warn!("stereo marks ignored in {s}");
    }
    p.build()
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, MolError> {
        Err(MolError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn add_bond(&mut self, a: usize, b: usize, sym: Option<BondSym>) -> Result<(), MolError> {
        if a == b {
            return self.err("atom bonded to itself");
        }
        if self
            .bonds
            .iter()
            .any(|&(x, y, _)| (x == a && y == b) || (x == b && y == a))
        {
            return self.err("duplicate bond");
        }
        self.bonds.push((a, b, sym));
        Ok(())
    }

    fn parse_chain(&mut self) -> Result<(), MolError> {
        let mut prev: Option<usize> = None;
        let mut pending: Option<BondSym> = None;
        let mut branches: Vec<usize> = Vec::new();
        let mut rings: HashMap<u32, (usize, Option<BondSym>, usize)> = HashMap::new();
        let mut just_opened = false;

        while let Some(c) = self.peek() {
            if just_opened && matches!(c, b'(' | b')' | b'.' | b'0'..=b'9' | b'%') {
                return self.err("branch must start with an atom or bond");
            }
            just_opened = c == b'(';
            match c {
                b'(' => {
                    let Some(p) = prev else {
                        return self.err("branch without preceding atom");
                    };
                    if pending.is_some() {
                        return self.err("bond symbol before branch");
                    }
                    branches.push(p);
                    self.pos += 1;
                }
                b')' => {
                    let Some(p) = branches.pop() else {
                        return self.err("unbalanced ')'");
                    };
                    if pending.is_some() {
                        return self.err("dangling bond symbol");
                    }
                    // empty branch "()" leaves prev unchanged
                    prev = Some(p);
                    self.pos += 1;
                }
                b'.' => {
                    if pending.is_some() || !branches.is_empty() || prev.is_none() {
                        return self.err("misplaced '.'");
                    }
                    prev = None;
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                    if pending.is_some() || prev.is_none() {
                        return self.err("misplaced bond symbol");
                    }
                    if c == b'/' || c == b'\\' {
                        self.stereo_seen = true;
                    }
                    pending = BondSym::from_char(c as char);
                    self.pos += 1;
                }
                b'$' => return self.err("quadruple bonds are not supported"),
                b'0'..=b'9' | b'%' => {
                    let start = self.pos;
                    let label = if c == b'%' {
                        let d = self.s.get(self.pos + 1..self.pos + 3);
                        match d {
                            Some(d) if d.iter().all(u8::is_ascii_digit) => {
                                self.pos += 3;
                                ((d[0] - b'0') * 10 + (d[1] - b'0')) as u32
                            }
                            _ => return self.err("malformed %nn ring label"),
                        }
                    } else {
                        self.pos += 1;
                        (c - b'0') as u32
                    };
                    let Some(p) = prev else {
                        return self.err("ring label without atom");
                    };
                    match rings.remove(&label) {
                        Some((open, open_sym, _)) => {
                            let sym = match (open_sym, pending) {
                                (Some(a), Some(b)) if a != b => {
                                    return self.err("conflicting ring bond symbols")
                                }
                                (a, b) => a.or(b),
                            };
                            self.add_bond(open, p, sym)?;
                        }
                        None => {
                            rings.insert(label, (p, pending, start));
                        }
                    }
                    pending = None;
                }
                _ => {
                    let atom = self.parse_atom()?;
                    let idx = self.atoms.len();
                    self.atoms.push(atom);
                    if let Some(p) = prev {
                        self.add_bond(p, idx, pending.take())?;
                    }
                    prev = Some(idx);
                }
            }
        }
        if pending.is_some() {
            return self.err("dangling bond symbol");
        }
        if !branches.is_empty() {
            return self.err("unbalanced '('");
        }
        if let Some((_, _, pos)) = rings.values().min_by_key(|v| v.2) {
            return Err(MolError::Syntax {
                pos: *pos,
                msg: "unclosed ring label".into(),
            });
        }
        if self.atoms.is_empty() {
            return self.err("no atoms");
        }
        Ok(())
    }

    fn parse_atom(&mut self) -> Result<RawAtom, MolError> {
        let c = self.peek().unwrap();
        if c == b'[' {
            return self.parse_bracket();
        }
        let next = self.s.get(self.pos + 1).copied();
        let (sym, len, aromatic) = match (c, next) {
            (b'C', Some(b'l')) => ("Cl", 2, false),
            (b'B', Some(b'r')) => ("Br", 2, false),
            (b'B', _) => return Err(MolError::Element("B".into())),
            (b'b', _) => return Err(MolError::Element("b".into())),
            (b'*', _) => return Err(MolError::Element("*".into())),
            (b'C' | b'N' | b'O' | b'P' | b'S' | b'F' | b'I', _) => (
                std::str::from_utf8(&self.s[self.pos..self.pos + 1]).unwrap(),
                1,
                false,
            ),
            (b'c', _) => ("C", 1, true),
            (b'n', _) => ("N", 1, true),
            (b'o', _) => ("O", 1, true),
            (b'p', _) => ("P", 1, true),
            (b's', _) => ("S", 1, true),
            _ => return self.err("unknown token"),
        };
        self.pos += len;
        Ok(RawAtom {
            element: Element::from_symbol(sym).unwrap(),
            aromatic,
            charge: 0,
            h_count: None,
        })
    }

    fn parse_bracket(&mut self) -> Result<RawAtom, MolError> {
        let close = match self.s[self.pos..].iter().position(|&b| b == b']') {
            Some(k) => self.pos + k,
            None => return self.err("unterminated bracket atom"),
        };
        let body = &self.s[self.pos + 1..close];
        let mut i = 0;
        while i < body.len() && body[i].is_ascii_digit() {
            i += 1; // isotope, ignored
        }
        if i > 0 {
            warn!("isotope label ignored");
        }
        let Some(&first) = body.get(i) else {
            return self.err("empty bracket atom");
        };
        if !first.is_ascii_alphabetic() && first != b'*' {
            return self.err("bad bracket atom");
        }
        let aromatic = first.is_ascii_lowercase();
        let mut sym = String::new();
        sym.push(first.to_ascii_uppercase() as char);
        i += 1;
        if let Some(&c2) = body.get(i) {
            // two-letter symbols: the second letter is lowercase; for aromatic
            // atoms only "se"/"as" exist, which are outside the element set
            if c2.is_ascii_lowercase()
                && (!aromatic || matches!((first, c2), (b's', b'e') | (b'a', b's')))
            {
                sym.push(c2 as char);
                i += 1;
            }
        }
        let element = match Element::from_symbol(&sym) {
            Some(e) => e,
            None => {
                return Err(MolError::Element(if aromatic {
                    sym.to_lowercase()
                } else {
                    sym
                }))
            }
        };
        if aromatic
            && !matches!(
                element,
                Element::C | Element::N | Element::O | Element::P | Element::S
            )
        {
            return Err(MolError::Element(sym.to_lowercase()));
        }
        while i < body.len() && body[i] == b'@' {
            self.stereo_seen = true;
            i += 1;
        }
        // chirality classes like @TH1 are not supported beyond @/@@
        let mut h_count = 0u8;
        if body.get(i) == Some(&b'H') {
            i += 1;
            h_count = 1;
            if let Some(&d) = body.get(i) {
                if d.is_ascii_digit() {
                    h_count = d - b'0';
                    i += 1;
                }
            }
        }
        let mut charge: i32 = 0;
        if let Some(&sign) = body.get(i) {
            if sign == b'+' || sign == b'-' {
                let unit = if sign == b'+' { 1 } else { -1 };
                i += 1;
                charge = unit;
                if let Some(&d) = body.get(i) {
                    if d.is_ascii_digit() {
                        charge = unit * (d - b'0') as i32;
                        i += 1;
                    } else {
                        while body.get(i) == Some(&sign) {
                            charge += unit;
                            i += 1;
                        }
                    }
                }
            }
        }
        if body.get(i) == Some(&b':') {
            i += 1;
            while i < body.len() && body[i].is_ascii_digit() {
                i += 1; // atom class, ignored
            }
        }
        if i != body.len() {
            self.pos += 1 + i;
            return self.err("unexpected character in bracket atom");
        }
        if !(-2..=2).contains(&charge) {
            return Err(MolError::Charge(charge));
        }
        self.pos = close + 1;
        Ok(RawAtom {
            element,
            aromatic,
            charge: charge as i8,
            h_count: Some(h_count),
        })
    }

    fn build(self) -> Result<Molecule, MolError> {
        let Parser {
            atoms: raw,
            bonds: raw_bonds,
            ..
        } = self;
        let mut atoms: Vec<Atom> = raw
            .iter()
            .map(|r| Atom {
                element: r.element,
                charge: r.charge,
                aromatic: r.aromatic,
                h_count: r.h_count.unwrap_or(0),
            })
            .collect();
        let mut bonds: Vec<Bond> = raw_bonds
            .iter()
            .map(|&(a, b, sym)| {
                let order = match sym {
                    Some(BondSym::Single) => BondOrder::Single,
                    Some(BondSym::Double) => BondOrder::Double,
                    Some(BondSym::Triple) => BondOrder::Triple,
                    Some(BondSym::Aromatic) => BondOrder::Aromatic,
                    None if raw[a].aromatic && raw[b].aromatic => BondOrder::Aromatic,
                    None => BondOrder::Single,
                };
                let kekule = match order {
                    BondOrder::Double => 2,
                    BondOrder::Triple => 3,
                    _ => 1,
                };
                Bond {
                    a,
                    b,
                    order,
                    kekule,
                }
            })
            .collect();

        // aromatic bonds must lie on rings
        let probe = Molecule::from_parts(atoms.clone(), bonds.clone());
        for (i, b) in bonds.iter_mut().enumerate() {
            if b.order == BondOrder::Aromatic && !probe.is_ring_bond(i) {
                b.order = BondOrder::Single;
            }
        }

        for (i, r) in raw.iter().enumerate() {
            if r.h_count.is_some() {
                continue;
            }
            let mut arom = 0u8;
            let mut other = 0u8;
            for &(_, bi) in probe.neighbors(i) {
                if bonds[bi].order == BondOrder::Aromatic {
                    arom += 1;
                } else {
                    other += bonds[bi].kekule;
                }
            }
            atoms[i].h_count = if r.aromatic {
                let v0 = r.element.valences(0)[0];
                v0.saturating_sub(arom + other + 1)
            } else {
                r.element.implicit_hydrogens(0, arom + other)
            };
        }

        let (atoms, mut bonds) = fold_explicit_hydrogens(atoms, bonds);
        let adjacency = adjacency(atoms.len(), &bonds);
        aromatic::kekulize(&atoms, &mut bonds, &adjacency)?;
        for (i, a) in atoms.iter().enumerate() {
            let sum: u8 = adjacency[i].iter().map(|&(_, bi)| bonds[bi].kekule).sum();
            match a.element.max_valence(a.charge) {
                Some(max) if sum + a.h_count <= max => {}
                _ => {
                    return Err(MolError::Valence {
                        atom: i,
                        element: a.element,
                    })
                }
            }
        }
        Ok(Molecule::perceived(atoms, bonds))
    }
}

fn adjacency(n: usize, bonds: &[Bond]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (i, b) in bonds.iter().enumerate() {
        adj[b.a].push((b.b, i));
        adj[b.b].push((b.a, i));
    }
    adj
}

/// Merges `[H]` atoms singly bonded to a heavy atom into its hydrogen count.
fn fold_explicit_hydrogens(mut atoms: Vec<Atom>, bonds: Vec<Bond>) -> (Vec<Atom>, Vec<Bond>) {
    let n = atoms.len();
    let adj = adjacency(n, &bonds);
    let mut drop = vec![false; n];
    for i in 0..n {
        if atoms[i].element != Element::H || atoms[i].charge != 0 || atoms[i].h_count != 0 {
            continue;
        }
        if let [(j, bi)] = adj[i][..] {
            if atoms[j].element != Element::H && bonds[bi].kekule == 1 {
                drop[i] = true;
                atoms[j].h_count += 1;
            }
        }
    }
    if !drop.iter().any(|&d| d) {
        return (atoms, bonds);
    }
    let mut remap = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for i in 0..n {
        if !drop[i] {
            remap[i] = kept.len();
            kept.push(atoms[i]);
        }
    }
    let bonds = bonds
        .into_iter()
        .filter(|b| !drop[b.a] && !drop[b.b])
        .map(|b| Bond {
            a: remap[b.a],
            b: remap[b.b],
            ..b
        })
        .collect();
    (kept, bonds)
}
