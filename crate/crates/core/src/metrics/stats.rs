//! Rank tests and multiple-comparison adjustment.

use statrs::distribution::{ContinuousCDF, Normal};

/// Largest n_a * n_b for which p-values are computed exactly.
pub const EXACT_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    /// Pairs with b above a, ties counting one half.
    pub u: f64,
    /// P(U >= u) under exchangeability: the one-sided p-value for "b is
    /// stochastically greater than a".
    pub p_greater: f64,
    /// P(U <= u), the opposite alternative.
    pub p_less: f64,
    pub exact: bool,
    /// All observations tied; both p-values are reported as 0.5.
    pub degenerate: bool,
}

/// Midranks (1-based) of the pooled values.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Distribution of the rank sum of `m` items drawn from `ranks`: a map
/// from twice the rank sum to the number of subsets.
pub fn rank_sum_distribution(ranks: &[f64], m: usize) -> Vec<(u64, f64)> {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    // ways[k][s]: subsets of size k with doubled sum s
    let mut ways = vec![vec![0.0f64; max + 1]; m + 1];
    ways[0][0] = 1.0;
    for (seen, &r) in doubled.iter().enumerate() {
        for k in (1..=m.min(seen + 1)).rev() {
            let (lower, upper) = ways.split_at_mut(k);
            let prev = &lower[k - 1];
            let cur = &mut upper[0];
            for s in (r..=max).rev() {
                if prev[s - r] != 0.0 {
                    cur[s] += prev[s - r];
                }
            }
        }
    }
    ways[m]
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0.0)
        .map(|(s, &w)| (s as u64, w))
        .collect()
}

/// One-sided Mann-Whitney test of "b tends to exceed a". Exact over the
/// midrank permutation distribution when n_a * n_b <= 400, otherwise the
/// normal approximation with tie and continuity corrections.
///
/// # Panics
/// If either sample is empty.
pub fn mann_whitney(a: &[f64], b: &[f64]) -> MannWhitney {
    assert!(
        !a.is_empty() && !b.is_empty(),
        "both samples must be non-empty"
    );
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let rb: f64 = ranks[na..].iter().sum();
    let u = rb - (nb * (nb + 1)) as f64 / 2.0;
    let exact = na * nb <= EXACT_LIMIT;
    if pooled.iter().all(|&v| v == pooled[0]) {
        log::warn!("Mann-Whitney: all {} observations tied", pooled.len());
        return MannWhitney {
            u,
            p_greater: 0.5,
            p_less: 0.5,
            exact,
            degenerate: true,
        };
    }
    let (p_greater, p_less) = if exact {
        // subsets of b's size; U is an affine function of their rank sum
        let dist = rank_sum_distribution(&ranks, nb);
        let total: f64 = dist.iter().map(|d| d.1).sum();
        let observed = (2.0 * rb).round() as u64;
        let ge: f64 = dist.iter().filter(|d| d.0 >= observed).map(|d| d.1).sum();
        let le: f64 = dist.iter().filter(|d| d.0 <= observed).map(|d| d.1).sum();
        (ge / total, le / total)
    } else {
        let n = (na + nb) as f64;
        let mut sorted = pooled.clone();
        sorted.sort_by(f64::total_cmp);
        let mut ties = 0.0;
        let mut i = 0;
        while i < sorted.len() {
            let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
            ties += (j * j * j - j) as f64;
            i += j;
        }
        let nab = (na * nb) as f64;
        let var = nab / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
        let sd = var.sqrt();
        let mean = nab / 2.0;
        let z = Normal::standard();
        (z.sf((u - mean - 0.5) / sd), z.cdf((u - mean + 0.5) / sd))
    };
    MannWhitney {
        u,
        p_greater: p_greater.clamp(0.0, 1.0),
        p_less: p_less.clamp(0.0, 1.0),
        exact,
        degenerate: false,
    }
}

/// `(U, p)` for the alternative that `b` is stochastically greater.
pub fn mann_whitney_one_sided(a: &[f64], b: &[f64]) -> (f64, f64) {
    let r = mann_whitney(a, b);
    (r.u, r.p_greater)
}

/// Holm step-down adjustment, returned in input order.
pub fn holm_adjust(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p[i].total_cmp(&p[j]));
    let mut out = vec![0.0; m];
    let mut running: f64 = 0.0;
    for (k, &i) in order.iter().enumerate() {
        running = running.max(((m - k) as f64 * p[i]).min(1.0));
        out[i] = running;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_triples() {
        let r = mann_whitney(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]);
        assert_eq!(r.u, 9.0);
        assert!(r.exact);
        assert!((r.p_greater - 0.05).abs() < 1e-15);
        // complement over the discrete support: P(U = 9) = 1/20
        assert!((r.p_greater + r.p_less - 0.05 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identical_samples() {
        let a = [0.3, 0.1, 0.7, 0.7];
        assert!(mann_whitney(&a, &a).p_greater >= 0.5);
        let flat = mann_whitney(&[1.0, 1.0], &[1.0]);
        assert!(flat.degenerate);
        assert_eq!(flat.p_greater, 0.5);
    }

    #[test]
    fn midrank_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), [3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn normal_branch_agrees_with_exact_in_the_middle() {
        let a: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..20).map(|i| i as f64 + 3.5).collect();
        let exact = mann_whitney(&a, &b);
        let mut big_a = a.clone();
        big_a.push(-1.0);
        let approx = mann_whitney(&big_a, &b);
        assert!(exact.exact && !approx.exact);
        assert!((exact.p_greater - approx.p_greater).abs() < 0.05);
    }

    #[test]
    fn holm() {
        assert_eq!(holm_adjust(&[0.03]), [0.03]);
        let adj = holm_adjust(&[0.04, 0.01]);
        assert!((adj[0] - 0.04).abs() < 1e-15 && (adj[1] - 0.02).abs() < 1e-15);
        let raw = [0.2, 0.5, 0.01, 0.6, 0.03];
        let adj = holm_adjust(&raw);
        for (r, a) in raw.iter().zip(&adj) {
            assert!(a >= r && *a <= 1.0);
        }
    }
}
