//! Dominance, nondominated sorting, crowding distance and hypervolume for
//! minimized objective vectors.

use std::cmp::Ordering;

pub type Point = [f64; 3];

/// `a` is no worse everywhere and strictly better somewhere.
pub fn dominates(a: &Point, b: &Point) -> bool {
    let mut strict = false;
    for k in 0..3 {
        if a[k] > b[k] {
            return false;
        }
        if a[k] < b[k] {
            strict = true;
        }
    }
    strict
}

pub fn weakly_dominates(a: &Point, b: &Point) -> bool {
    (0..3).all(|k| a[k] <= b[k])
}

/// Front index of every point (0 = nondominated).
pub fn nondominated_ranks(points: &[Point]) -> Vec<usize> {
    let n = points.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates(&points[i], &points[j]) {
                dominates_list[i].push(j);
                dominated_by[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominates_list[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut rank = vec![0usize; n];
    let mut front: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    let mut level = 0;
    while !front.is_empty() {
        let mut next = Vec::new();
        for &i in &front {
            rank[i] = level;
            for &j in &dominates_list[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        front = next;
        level += 1;
    }
    rank
}

/// Crowding distance of each point within its own front; boundary points
/// get infinity.
pub fn crowding_distances(points: &[Point], ranks: &[usize]) -> Vec<f64> {
    let n = points.len();
    let mut dist = vec![0.0; n];
    let fronts = ranks.iter().copied().max().map_or(0, |m| m + 1);
    for r in 0..fronts {
        let members: Vec<usize> = (0..n).filter(|&i| ranks[i] == r).collect();
        if members.len() <= 2 {
            for &i in &members {
                dist[i] = f64::INFINITY;
            }
            continue;
        }
        for k in 0..3 {
            let mut sorted = members.clone();
            sorted.sort_by(|&a, &b| points[a][k].total_cmp(&points[b][k]).then(a.cmp(&b)));
            let lo = points[sorted[0]][k];
            let hi = points[sorted[sorted.len() - 1]][k];
            if hi <= lo {
                continue;
            }
            dist[sorted[0]] = f64::INFINITY;
            dist[sorted[sorted.len() - 1]] = f64::INFINITY;
            for w in sorted.windows(3) {
                dist[w[1]] += (points[w[2]][k] - points[w[0]][k]) / (hi - lo);
            }
        }
    }
    dist
}

/// Tchebycheff aggregate max_k w_k |f_k - z_k|.
pub fn tchebycheff(f: &Point, weight: &Point, ideal: &Point) -> f64 {
    (0..3)
        .map(|k| weight[k] * (f[k] - ideal[k]).abs())
        .fold(0.0, f64::max)
}

pub const UNIFORM_WEIGHT: Point = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];

/// Indices ordered best first: rank ascending, crowding descending, then
/// Tchebycheff under the uniform weight ascending, then index.
pub fn quality_order(points: &[Point], ideal: &Point) -> Vec<usize> {
    let ranks = nondominated_ranks(points);
    let crowd = crowding_distances(points, &ranks);
    let tch: Vec<f64> = points
        .iter()
        .map(|p| tchebycheff(p, &UNIFORM_WEIGHT, ideal))
        .collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        ranks[a]
            .cmp(&ranks[b])
            .then(crowd[b].total_cmp(&crowd[a]))
            .then(tch[a].total_cmp(&tch[b]))
            .then(a.cmp(&b))
    });
    order
}

/// Area dominated by a 2-D staircase inside the box bounded by `reference`.
#[derive(Debug, Default)]
struct Staircase {
    /// Sorted by x ascending, y strictly descending.
    steps: Vec<(f64, f64)>,
}

impl Staircase {
    fn insert(&mut self, x: f64, y: f64) {
        let pos = self.steps.partition_point(|s| s.0 <= x);
        if pos > 0 && self.steps[pos - 1].1 <= y {
            return;
        }
        let mut end = pos;
        while end < self.steps.len() && self.steps[end].1 >= y {
            end += 1;
        }
        if pos > 0 && self.steps[pos - 1].0 == x {
            self.steps.splice(pos - 1..end, [(x, y)]);
        } else {
            self.steps.splice(pos..end, [(x, y)]);
        }
    }

    fn area(&self, rx: f64, ry: f64) -> f64 {
        let mut total = 0.0;
        for (i, &(x, y)) in self.steps.iter().enumerate() {
            let next = self.steps.get(i + 1).map_or(rx, |s| s.0);
            total += (next - x) * (ry - y);
        }
        total
    }
}

/// Rounding slack when comparing hypervolumes of nested point sets. The
/// slab sums are not exactly monotone in floating point (drops of one ulp
/// occur).
pub const HV_TOLERANCE: f64 = 1e-12;

/// Volume dominated by `points` and bounded by `reference`. Points not
/// strictly better than the reference in every component add nothing.
pub fn hypervolume(points: &[Point], reference: &Point) -> f64 {
    let mut inside: Vec<&Point> = points
        .iter()
        .filter(|p| (0..3).all(|k| p[k] < reference[k]))
        .collect();
    inside.sort_by(|a, b| {
        a[2].total_cmp(&b[2])
            .then(a[0].total_cmp(&b[0]))
            .then(a[1].total_cmp(&b[1]))
    });
    let mut stairs = Staircase::default();
    let mut volume = 0.0;
    let mut i = 0;
    while i < inside.len() {
        let z = inside[i][2];
        while i < inside.len() && inside[i][2] == z {
            stairs.insert(inside[i][0], inside[i][1]);
            i += 1;
        }
        let next_z = inside.get(i).map_or(reference[2], |p| p[2]);
        volume += stairs.area(reference[0], reference[1]) * (next_z - z);
    }
    volume
}

pub fn compare_points(a: &Point, b: &Point) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dominance() {
        assert!(dominates(&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.1]));
        assert!(!dominates(&[0.2, 0.2, 0.2], &[0.2, 0.2, 0.2]));
        assert!(!dominates(&[0.1, 0.3, 0.0], &[0.3, 0.1, 0.0]));
    }

    #[test]
    fn ranks_and_crowding() {
        let pts = [
            [0.0, 1.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, 0.5, 0.0],
            [1.0, 1.0, 1.0],
            [0.6, 0.6, 0.1],
        ];
        assert_eq!(nondominated_ranks(&pts), [0, 0, 0, 2, 1]);
        let d = crowding_distances(&pts, &nondominated_ranks(&pts));
        assert!(d[0].is_infinite() && d[1].is_infinite());
        assert!((d[2] - 2.0).abs() < 1e-12);
        assert_eq!(quality_order(&pts, &[0.0; 3])[4], 3);
    }

    #[test]
    fn box_volumes() {
        let r = [1.0; 3];
        assert_eq!(hypervolume(&[], &r), 0.0);
        assert!((hypervolume(&[[0.5, 0.5, 0.5]], &r) - 0.125).abs() < 1e-15);
        assert_eq!(hypervolume(&[[0.0; 3]], &r), 1.0);
        assert_eq!(hypervolume(&[[1.0, 0.0, 0.0]], &r), 0.0);
        // two boxes overlapping in [0.5,1]^3
        let v = hypervolume(&[[0.0, 0.5, 0.5], [0.5, 0.0, 0.5]], &r);
        assert!((v - (0.25 + 0.25 - 0.125)).abs() < 1e-15);
    }

    /// Grid-cell counting on points with coordinates in tenths.
    fn cell_oracle(points: &[Point]) -> f64 {
        let mut count = 0;
        for a in 0..10 {
            for b in 0..10 {
                for c in 0..10 {
                    let cell = [a as f64 / 10.0, b as f64 / 10.0, c as f64 / 10.0];
                    if points
                        .iter()
                        .any(|p| (0..3).all(|k| p[k] <= cell[k] + 1e-9))
                    {
                        count += 1;
                    }
                }
            }
        }
        count as f64 / 1000.0
    }

    #[test]
    fn matches_cell_counting() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..12);
            let pts: Vec<Point> = (0..n)
                .map(|_| [(); 3].map(|_| rng.gen_range(0..=10) as f64 / 10.0))
                .collect();
            let hv = hypervolume(&pts, &[1.0; 3]);
            assert!((hv - cell_oracle(&pts)).abs() < 1e-9, "{pts:?}");
        }
    }

    #[test]
    fn adding_points_never_shrinks_volume() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut pts: Vec<Point> = Vec::new();
        let mut last = 0.0;
        for _ in 0..300 {
            pts.push([(); 3].map(|_| rng.gen::<f64>()));
            let hv = hypervolume(&pts, &[1.0; 3]);
            assert!(hv >= last - HV_TOLERANCE, "{hv} < {last}");
            last = hv;
        }
    }
}
