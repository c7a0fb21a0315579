//! Morgan (ECFP-style) circular fingerprints and Tanimoto similarity.

use std::collections::HashSet;

use super::DescriptorError;
use crate::molgraph::Molecule;

pub const FP_WIDTH: usize = 2048;
pub const FP_RADIUS: usize = 2;

/// Boost-style hash combine on 32-bit words. Fixed, so fingerprints are
/// identical across runs and platforms.
pub(crate) fn hash_combine(seed: u32, value: u32) -> u32 {
    seed ^ value
        .wrapping_add(0x9e37_79b9)
        .wrapping_add(seed << 6)
        .wrapping_add(seed >> 2)
}

pub(crate) fn atom_invariant(m: &Molecule, i: usize) -> u32 {
    let a = m.atom(i);
    let mut h = 0u32;
    for v in [
        a.element.atomic_number() as u32,
        m.degree(i) as u32,
        a.h_count as u32,
        (a.charge as i32) as u32,
        m.is_ring_atom(i) as u32,
    ] {
        h = hash_combine(h, v);
    }
    h
}

/// One circular environment: its identifier, center atom and radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Environment {
    pub id: u32,
    pub atom: usize,
    pub radius: usize,
}

/// All distinct circular environments up to `radius`. Environments that
/// cover the same bond set as an earlier one are dropped.
pub fn morgan_environments(m: &Molecule, radius: usize) -> Vec<Environment> {
    let n = m.num_atoms();
    let nb = m.bonds().len();
    let mut ids: Vec<u32> = (0..n).map(|i| atom_invariant(m, i)).collect();
    let mut out: Vec<Environment> = (0..n)
        .map(|i| Environment {
            id: ids[i],
            atom: i,
            radius: 0,
        })
        .collect();
    let mut bond_sets: Vec<Vec<bool>> = vec![vec![false; nb]; n];
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut alive = vec![true; n];
    for r in 1..=radius {
        let mut next_ids = ids.clone();
        let mut next_sets = bond_sets.clone();
        for i in 0..n {
            let mut pairs: Vec<(u32, u32)> = m
                .neighbors(i)
                .iter()
                .map(|&(j, bi)| (m.bond(bi).order.code() as u32, ids[j]))
                .collect();
            pairs.sort_unstable();
            let mut h = hash_combine(r as u32, ids[i]);
            for (b, id) in pairs {
                h = hash_combine(hash_combine(h, b), id);
            }
            next_ids[i] = h;
            for &(j, bi) in m.neighbors(i) {
                next_sets[i][bi] = true;
                for (k, &inside) in bond_sets[j].iter().enumerate() {
                    if inside {
                        next_sets[i][k] = true;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        order.sort_by(|&a, &b| {
            next_sets[a]
                .cmp(&next_sets[b])
                .then(next_ids[a].cmp(&next_ids[b]))
        });
        for i in order {
            if seen.insert(next_sets[i].clone()) {
                out.push(Environment {
                    id: next_ids[i],
                    atom: i,
                    radius: r,
                });
            } else {
                alive[i] = false;
            }
        }
        ids = next_ids;
        bond_sets = next_sets;
    }
    out
}

/// Fixed-width bit set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    width: usize,
    words: Vec<u64>,
}

impl Fingerprint {
    pub fn new(width: usize) -> Self {
        Fingerprint {
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    pub fn from_bits(width: usize, bits: impl IntoIterator<Item = usize>) -> Self {
        let mut fp = Fingerprint::new(width);
        for b in bits {
            fp.set(b);
        }
        fp
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn set(&mut self, bit: usize) {
        assert!(bit < self.width, "bit {bit} outside width {}", self.width);
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn get(&self, bit: usize) -> bool {
        bit < self.width && self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(|&b| self.get(b))
    }
}

/// ECFP4-equivalent fingerprint folded to 2048 bits.
pub fn morgan_fingerprint(m: &Molecule) -> Fingerprint {
    Fingerprint::from_bits(
        FP_WIDTH,
        morgan_environments(m, FP_RADIUS)
            .iter()
            .map(|e| e.id as usize % FP_WIDTH),
    )
}

/// |a ∩ b| / |a ∪ b|, with 1.0 for two empty sets.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, DescriptorError> {
    if a.width != b.width {
        return Err(DescriptorError::WidthMismatch(a.width, b.width));
    }
    let mut inter = 0u32;
    let mut union = 0u32;
    for (x, y) in a.words.iter().zip(&b.words) {
        inter += (x & y).count_ones();
        union += (x | y).count_ones();
    }
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}

/// Mean pairwise Tanimoto distance over all unordered pairs.
pub fn diversity(pop: &[Fingerprint]) -> Result<f64, DescriptorError> {
    if pop.len() < 2 {
        return Err(DescriptorError::TooFewItems(pop.len()));
    }
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..pop.len() {
        for j in i + 1..pop.len() {
            total += 1.0 - tanimoto(&pop[i], &pop[j])?;
            pairs += 1;
        }
    }
    Ok(total / pairs as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    #[test]
    fn tanimoto_fixtures() {
        let a = Fingerprint::from_bits(8, [1, 2, 3]);
        let b = Fingerprint::from_bits(8, [2, 3, 4]);
        assert_eq!(tanimoto(&a, &b).unwrap(), 0.5);
        assert_eq!(tanimoto(&a, &a).unwrap(), 1.0);
        let c = Fingerprint::from_bits(8, [5, 6]);
        assert_eq!(tanimoto(&a, &c).unwrap(), 0.0);
        assert_eq!(
            tanimoto(&Fingerprint::new(8), &Fingerprint::new(8)).unwrap(),
            1.0
        );
        assert!(tanimoto(&a, &Fingerprint::new(16)).is_err());
    }

    #[test]
    fn diversity_fixtures() {
        let a = Fingerprint::from_bits(8, [1, 2]);
        let b = Fingerprint::from_bits(8, [3]);
        assert_eq!(diversity(&[a.clone(), a.clone(), a.clone()]).unwrap(), 0.0);
        assert_eq!(diversity(&[a.clone(), b]).unwrap(), 1.0);
        assert!(diversity(&[a]).is_err());
    }

    #[test]
    fn methane_sets_one_bit() {
        let fp = morgan_fingerprint(&parse_smiles("C").unwrap());
        assert!((1..=3).contains(&fp.count_ones()));
    }

    #[test]
    fn writing_does_not_matter() {
        let a = morgan_fingerprint(&parse_smiles("OC(=O)c1ccccc1").unwrap());
        let b = morgan_fingerprint(&parse_smiles("C1=CC=C(C=C1)C(O)=O").unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_bond_sets_are_dropped() {
        // in ethane both radius-1 environments cover the single bond
        let envs = morgan_environments(&parse_smiles("CC").unwrap(), 2);
        assert_eq!(envs.iter().filter(|e| e.radius == 1).count(), 1);
        assert_eq!(envs.iter().filter(|e| e.radius == 2).count(), 0);
    }
}
