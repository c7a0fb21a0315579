//! Ring perception: ring-bond detection and a minimum cycle basis (SSSR).

use std::collections::{HashSet, VecDeque};

use super::Bond;

/// Marks bonds that lie on at least one cycle (non-bridges).
pub(super) fn ring_bonds(n: usize, bonds: &[Bond], adj: &[Vec<(usize, usize)>]) -> Vec<bool> {
    let mut is_ring = vec![true; bonds.len()];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (vertex, parent bond, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (u, pb, ref mut next)) = stack.last_mut() {
            if *next < adj[u].len() {
                let (v, bi) = adj[u][*next];
                *next += 1;
                if bi == pb {
                    continue;
                }
                if disc[v] == usize::MAX {
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, bi, 0));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] > disc[p] {
                        is_ring[pb] = false;
                    }
                }
            }
        }
    }
    is_ring
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct EdgeSet(Vec<u64>);

impl EdgeSet {
    fn new(m: usize) -> Self {
        EdgeSet(vec![0; m.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn xor(&mut self, other: &EdgeSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
    fn lowest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

/// Minimum cycle basis from Horton candidate cycles, restricted to ring bonds.
pub(super) fn sssr(
    n: usize,
    bonds: &[Bond],
    adj: &[Vec<(usize, usize)>],
    ring_bond: &[bool],
) -> Vec<Vec<usize>> {
    let ring_atoms: Vec<usize> = (0..n)
        .filter(|&i| adj[i].iter().any(|&(_, b)| ring_bond[b]))
        .collect();
    if ring_atoms.is_empty() {
        return Vec::new();
    }
    let ring_edge_count = ring_bond.iter().filter(|&&r| r).count();
    let components = count_ring_components(n, adj, ring_bond, &ring_atoms);
    let rank_needed = ring_edge_count + components - ring_atoms.len();

    let mut seen = HashSet::new();
    let mut candidates: Vec<(usize, EdgeSet, Vec<usize>)> = Vec::new();
    for &root in &ring_atoms {
        let (parent, dist) = bfs_tree(n, adj, ring_bond, root);
        for (bi, b) in bonds.iter().enumerate() {
            if !ring_bond[bi] || dist[b.a] == usize::MAX || dist[b.b] == usize::MAX {
                continue;
            }
            if parent[b.a].map(|(_, pb)| pb) == Some(bi)
                || parent[b.b].map(|(_, pb)| pb) == Some(bi)
            {
                continue;
            }
            let pa = path_to_root(&parent, b.a);
            let pb = path_to_root(&parent, b.b);
            // paths share only the root
            let sa: HashSet<usize> = pa.iter().copied().collect();
            if pb.iter().filter(|x| sa.contains(x)).count() != 1 {
                continue;
            }
            let mut cycle: Vec<usize> = pa.iter().rev().copied().collect();
            cycle.extend(pb.iter().take(pb.len() - 1));
            let mut es = EdgeSet::new(bonds.len());
            let len = cycle.len();
            for k in 0..len {
                let (x, y) = (cycle[k], cycle[(k + 1) % len]);
                let e = adj[x]
                    .iter()
                    .find(|&&(v, _)| v == y)
                    .map(|&(_, e)| e)
                    .unwrap();
                es.set(e);
            }
            if seen.insert(es.clone()) {
                candidates.push((len, es, cycle));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    // Gaussian elimination over GF(2), pivot on lowest set edge.
    let mut basis: Vec<EdgeSet> = Vec::new();
    let mut out = Vec::new();
    for (_, es, cycle) in candidates {
        if out.len() == rank_needed {
            break;
        }
        let mut v = es;
        for row in &basis {
            let p = row.lowest().unwrap();
            if v.0[p / 64] >> (p % 64) & 1 == 1 {
                v.xor(row);
            }
        }
        if v.lowest().is_some() {
            // keep basis reduced so later pivots stay valid
            let p = v.lowest().unwrap();
            for row in basis.iter_mut() {
                if row.0[p / 64] >> (p % 64) & 1 == 1 {
                    row.xor(&v);
                }
            }
            basis.push(v);
            out.push(cycle);
        }
    }
    out
}

fn count_ring_components(
    n: usize,
    adj: &[Vec<(usize, usize)>],
    ring_bond: &[bool],
    ring_atoms: &[usize],
) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    for &s in ring_atoms {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(v, b) in &adj[u] {
                if ring_bond[b] && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

type Parents = Vec<Option<(usize, usize)>>;

fn bfs_tree(
    n: usize,
    adj: &[Vec<(usize, usize)>],
    ring_bond: &[bool],
    root: usize,
) -> (Parents, Vec<usize>) {
    let mut parent = vec![None; n];
    let mut dist = vec![usize::MAX; n];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(v, b) in &adj[u] {
            if ring_bond[b] && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = Some((u, b));
                queue.push_back(v);
            }
        }
    }
    (parent, dist)
}

/// Path from `v` up to the BFS root, starting at `v`.
fn path_to_root(parent: &Parents, mut v: usize) -> Vec<usize> {
    let mut path = vec![v];
    while let Some((p, _)) = parent[v] {
        path.push(p);
        v = p;
    }
    path
}

#[cfg(test)]
mod tests {
    use crate::molgraph::parse_smiles;

    fn ring_sizes(s: &str) -> Vec<usize> {
        let m = parse_smiles(s).unwrap();
        let mut v: Vec<usize> = m.rings().iter().map(|r| r.len()).collect();
        v.sort();
        v
    }

    #[test]
    fn simple_and_fused_rings() {
        assert_eq!(ring_sizes("CCO"), Vec::<usize>::new());
        assert_eq!(ring_sizes("C1CCCCC1"), vec![6]);
        assert_eq!(ring_sizes("c1ccc2ccccc2c1"), vec![6, 6]);
        assert_eq!(ring_sizes("C1CC2CCC1C2"), vec![5, 5]); // norbornane
        assert_eq!(ring_sizes("c1ccccc1-c1ccccc1"), vec![6, 6]);
        assert_eq!(ring_sizes("CN1C=NC2=C1C(=O)N(C(=O)N2C)C"), vec![5, 6]);
    }

    #[test]
    fn ring_bond_flags() {
        let m = parse_smiles("c1ccccc1CC").unwrap();
        let ring = (0..m.bonds().len()).filter(|&b| m.is_ring_bond(b)).count();
        assert_eq!(ring, 6);
    }

    #[test]
    fn ring_cycles_are_closed_paths() {
        let m = parse_smiles("C1CC2CC3CCCC3CC2C1").unwrap();
        for r in m.rings() {
            for k in 0..r.len() {
                assert!(m.bond_between(r[k], r[(k + 1) % r.len()]).is_some());
            }
        }
    }
}
