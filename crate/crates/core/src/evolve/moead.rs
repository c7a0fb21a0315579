//! Decomposition into weighted Tchebycheff subproblems.

use super::pareto::{tchebycheff, Point};

/// Points of the simplex lattice {k/h : k_1 + k_2 + k_3 = h}.
pub fn simplex_lattice(h: usize) -> Vec<Point> {
    let mut out = Vec::new();
    for a in 0..=h {
        for b in 0..=h - a {
            let c = h - a - b;
            out.push([
                a as f64 / h as f64,
                b as f64 / h as f64,
                c as f64 / h as f64,
            ]);
        }
    }
    out
}

/// `n` weight vectors: the smallest lattice with at least `n` points,
/// thinned by taking evenly spaced lattice indices.
pub fn weight_vectors(n: usize) -> Vec<Point> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![[1.0 / 3.0; 3]];
    }
    let mut h = 1;
    while (h + 1) * (h + 2) / 2 < n {
        h += 1;
    }
    let lattice = simplex_lattice(h);
    let last = lattice.len() - 1;
    (0..n).map(|k| lattice[k * last / (n - 1)]).collect()
}

fn distance2(a: &Point, b: &Point) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum()
}

/// The `t` nearest weight vectors of each weight (itself included), by
/// Euclidean distance with ties broken by index.
pub fn neighborhoods(weights: &[Point], t: usize) -> Vec<Vec<usize>> {
    let t = t.min(weights.len());
    weights
        .iter()
        .map(|w| {
            let mut idx: Vec<usize> = (0..weights.len()).collect();
            idx.sort_by(|&a, &b| {
                distance2(w, &weights[a])
                    .total_cmp(&distance2(w, &weights[b]))
                    .then(a.cmp(&b))
            });
            idx.truncate(t);
            idx
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoeadState {
    pub weights: Vec<Point>,
    pub neighborhoods: Vec<Vec<usize>>,
    pub ideal: Point,
}

impl MoeadState {
    pub fn new(population_size: usize, neighborhood: usize) -> Self {
        let weights = weight_vectors(population_size);
        let neighborhoods = neighborhoods(&weights, neighborhood);
        MoeadState {
            weights,
            neighborhoods,
            ideal: [f64::INFINITY; 3],
        }
    }

    pub fn update_ideal(&mut self, f: &Point) {
        for k in 0..3 {
            self.ideal[k] = self.ideal[k].min(f[k]);
        }
    }

    pub fn aggregate(&self, subproblem: usize, f: &Point) -> f64 {
        tchebycheff(f, &self.weights[subproblem], &self.ideal)
    }

    /// Neighbor of `subproblem` whose current solution has the lowest
    /// aggregate; ties go to the nearer weight.
    pub fn select_parent(&self, subproblem: usize, fitness: &[Point]) -> usize {
        let mut best = self.neighborhoods[subproblem][0];
        let mut best_g = self.aggregate(subproblem, &fitness[best]);
        for &j in &self.neighborhoods[subproblem][1..] {
            let g = self.aggregate(subproblem, &fitness[j]);
            if g < best_g {
                best = j;
                best_g = g;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_sizes() {
        assert_eq!(simplex_lattice(19).len(), 210);
        let w = weight_vectors(200);
        assert_eq!(w.len(), 200);
        for v in &w {
            assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(v.iter().all(|&x| x >= 0.0));
        }
        let mut distinct = w.clone();
        distinct.sort_by(|a, b| super::super::pareto::compare_points(a, b));
        distinct.dedup();
        assert_eq!(distinct.len(), 200);
        assert_eq!(weight_vectors(3).len(), 3);
    }

    #[test]
    fn neighborhoods_contain_self() {
        let s = MoeadState::new(200, 20);
        for (i, nb) in s.neighborhoods.iter().enumerate() {
            assert_eq!(nb.len(), 20);
            assert_eq!(nb[0], i);
        }
        assert_eq!(MoeadState::new(5, 20).neighborhoods[0].len(), 5);
    }

    #[test]
    fn parent_is_best_neighbor() {
        let mut s = MoeadState::new(10, 3);
        s.ideal = [0.0; 3];
        let mut fit = vec![[0.9; 3]; 10];
        let j = s.neighborhoods[4][2];
        fit[j] = [0.1; 3];
        assert_eq!(s.select_parent(4, &fit), j);
    }
}
