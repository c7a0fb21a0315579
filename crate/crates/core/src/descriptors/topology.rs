//! Graph-topological descriptors over the heavy-atom graph.

use std::collections::VecDeque;

use crate::molgraph::{BondOrder, Element, Molecule};

/// Breadth-first distances from `src`; `usize::MAX` for unreachable atoms.
pub(crate) fn bfs_distances(m: &Molecule, src: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; m.num_atoms()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in m.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn graph_diameter(m: &Molecule) -> usize {
    (0..m.num_atoms())
        .map(|i| {
            bfs_distances(m, i)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// Balaban-type J index on the unweighted distance matrix:
/// m/(mu+1) * sum over bonds of (s_i s_j)^-1/2, s = distance sums.
pub fn balaban_j(m: &Molecule) -> f64 {
    let n = m.num_atoms();
    let edges = m.bonds().len();
    if n < 2 || edges == 0 {
        return 0.0;
    }
    let sums: Vec<f64> = (0..n)
        .map(|i| {
            bfs_distances(m, i)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .sum::<usize>() as f64
        })
        .collect();
    let mu = edges + m.components().len() - n;
    let s: f64 = m
        .bonds()
        .iter()
        .map(|b| 1.0 / (sums[b.a] * sums[b.b]).sqrt())
        .sum();
    edges as f64 / (mu as f64 + 1.0) * s
}

/// Natural log of the number of spanning trees (product over components),
/// via a Cholesky factorization of the reduced Laplacian.
pub fn log_spanning_trees(m: &Molecule) -> f64 {
    let mut total = 0.0;
    for comp in m.components() {
        let k = comp.len();
        if k < 3 {
            continue;
        }
        let mut index = vec![usize::MAX; m.num_atoms()];
        for (p, &a) in comp.iter().enumerate() {
            index[a] = p;
        }
        // drop the last vertex to get the reduced Laplacian
        let d = k - 1;
        let mut lap = vec![0.0f64; d * d];
        for &a in &comp {
            let p = index[a];
            if p == d {
                continue;
            }
            lap[p * d + p] = m.degree(a) as f64;
            for &(b, _) in m.neighbors(a) {
                let q = index[b];
                if q != d {
                    lap[p * d + q] -= 1.0;
                }
            }
        }
        // Cholesky: log det = 2 sum log diag
        let mut logdet = 0.0;
        for j in 0..d {
            let mut diag = lap[j * d + j];
            for c in 0..j {
                diag -= lap[j * d + c] * lap[j * d + c];
            }
            let root = diag.max(f64::MIN_POSITIVE).sqrt();
            lap[j * d + j] = root;
            logdet += 2.0 * root.ln();
            for i in j + 1..d {
                let mut v = lap[i * d + j];
                for c in 0..j {
                    v -= lap[i * d + c] * lap[j * d + c];
                }
                lap[i * d + j] = v / root;
            }
        }
        total += logdet;
    }
    total.max(0.0)
}

/// Atoms in the longest path made only of acyclic atoms.
pub fn longest_chain_length(m: &Molecule) -> usize {
    let n = m.num_atoms();
    let acyclic: Vec<bool> = (0..n).map(|i| !m.is_ring_atom(i)).collect();
    let mut seen = vec![false; n];
    let mut best = 0;
    // each acyclic component is a tree: diameter by double sweep
    for s in 0..n {
        if !acyclic[s] || seen[s] {
            continue;
        }
        let sweep = |start: usize| -> (usize, usize, Vec<usize>) {
            let mut dist = vec![usize::MAX; n];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            let mut far = (start, 0);
            let mut members = vec![start];
            while let Some(u) = queue.pop_front() {
                for &(v, _) in m.neighbors(u) {
                    if acyclic[v] && dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        if dist[v] > far.1 {
                            far = (v, dist[v]);
                        }
                        members.push(v);
                        queue.push_back(v);
                    }
                }
            }
            (far.0, far.1, members)
        };
        let (a, _, members) = sweep(s);
        for v in members {
            seen[v] = true;
        }
        let (_, len, _) = sweep(a);
        best = best.max(len + 1);
    }
    best
}

fn rings_sharing_bonds(m: &Molecule, r: usize, s: usize) -> usize {
    let (ra, rb) = (&m.rings()[r], &m.rings()[s]);
    let edges = |ring: &Vec<usize>| -> Vec<(usize, usize)> {
        (0..ring.len())
            .map(|k| {
                let (x, y) = (ring[k], ring[(k + 1) % ring.len()]);
                (x.min(y), x.max(y))
            })
            .collect()
    };
    let eb = edges(rb);
    edges(ra).iter().filter(|e| eb.contains(e)).count()
}

/// SSSR rings that share at least one bond with another ring.
pub fn fused_ring_count(m: &Molecule) -> usize {
    let k = m.rings().len();
    (0..k)
        .filter(|&r| (0..k).any(|s| s != r && rings_sharing_bonds(m, r, s) > 0))
        .count()
}

/// Atoms where two rings sharing two or more bonds branch apart: shared
/// atoms with at least three ring neighbors in the union of the pair.
pub fn bridgehead_count(m: &Molecule) -> usize {
    let k = m.rings().len();
    let mut marked = vec![false; m.num_atoms()];
    for r in 0..k {
        for s in r + 1..k {
            if rings_sharing_bonds(m, r, s) < 2 {
                continue;
            }
            let (ra, rb) = (&m.rings()[r], &m.rings()[s]);
            for &a in ra.iter().filter(|a| rb.contains(a)) {
                let ring_nbrs = m
                    .neighbors(a)
                    .iter()
                    .filter(|&&(b, _)| ra.contains(&b) || rb.contains(&b))
                    .count();
                if ring_nbrs >= 3 {
                    marked[a] = true;
                }
            }
        }
    }
    marked.iter().filter(|&&x| x).count()
}

/// Atoms shared by two rings that have no bond in common.
pub fn spiro_count(m: &Molecule) -> usize {
    let k = m.rings().len();
    let mut marked = vec![false; m.num_atoms()];
    for r in 0..k {
        for s in r + 1..k {
            if rings_sharing_bonds(m, r, s) > 0 {
                continue;
            }
            let (ra, rb) = (&m.rings()[r], &m.rings()[s]);
            let shared: Vec<usize> = ra.iter().copied().filter(|a| rb.contains(a)).collect();
            if shared.len() == 1 {
                marked[shared[0]] = true;
            }
        }
    }
    marked.iter().filter(|&&x| x).count()
}

pub fn aromatic_ring_count(m: &Molecule) -> usize {
    m.rings()
        .iter()
        .filter(|ring| {
            (0..ring.len()).all(|k| {
                m.bond_between(ring[k], ring[(k + 1) % ring.len()])
                    .is_some_and(|bi| m.bond(bi).order == BondOrder::Aromatic)
            })
        })
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hybridization {
    Sp,
    Sp2,
    Sp3,
}

/// Bond-pattern hybridization: triple or cumulated double bonds give sp,
/// one double bond or aromaticity gives sp2, otherwise sp3.
pub fn hybridization(m: &Molecule, i: usize) -> Hybridization {
    let mut doubles = 0;
    for &(_, bi) in m.neighbors(i) {
        match m.bond(bi).order {
            BondOrder::Triple => return Hybridization::Sp,
            BondOrder::Double => doubles += 1,
            _ => {}
        }
    }
    if doubles >= 2 {
        Hybridization::Sp
    } else if doubles == 1 || m.atom(i).aromatic {
        Hybridization::Sp2
    } else {
        Hybridization::Sp3
    }
}

/// Hall-Kier alpha from tabulated per-hybridization atom values.
pub fn hall_kier_alpha(m: &Molecule) -> f64 {
    (0..m.num_atoms())
        .map(|i| {
            let hyb = hybridization(m, i);
            match (m.atom(i).element, hyb) {
                (Element::C, Hybridization::Sp) => -0.22,
                (Element::C, Hybridization::Sp2) => -0.13,
                (Element::C, Hybridization::Sp3) => 0.0,
                (Element::N, Hybridization::Sp) => -0.29,
                (Element::N, Hybridization::Sp2) => -0.20,
                (Element::N, Hybridization::Sp3) => -0.04,
                (Element::O, Hybridization::Sp3) => -0.04,
                (Element::O, _) => -0.20,
                (Element::F, _) => -0.07,
                (Element::P, Hybridization::Sp3) => 0.43,
                (Element::P, _) => 0.30,
                (Element::S, Hybridization::Sp3) => 0.35,
                (Element::S, _) => 0.22,
                (Element::Cl, _) => 0.29,
                (Element::Br, _) => 0.48,
                (Element::I, _) => 0.73,
                (Element::H, _) => 0.0,
            }
        })
        .sum()
}
