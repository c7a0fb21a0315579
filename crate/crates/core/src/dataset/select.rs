use super::FeatureMatrix;
use crate::gbt::{train_detailed, GbtError, GbtParams};

/// Pearson correlation; 0 when either side has no variance.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Retained column indices, ascending.
    pub indices: Vec<usize>,
    pub names: Vec<String>,
    /// Columns with a single distinct value.
    pub constant: Vec<usize>,
    /// Columns removed by the pairwise correlation filter.
    pub correlated: Vec<usize>,
    /// Split-gain importance of every column that reached the model stage.
    pub importance: Vec<(usize, f64)>,
}

impl Selection {
    pub fn uses_raw_columns(&self) -> bool {
        self.names
            .iter()
            .any(|n| n.starts_with("a:") || n.starts_with("b:"))
    }
}

/// Drops constant columns, then greedily keeps columns in decreasing order
/// of |r| with the label, skipping any whose |r| with an already kept
/// column exceeds `threshold`. Returns (kept, constant, correlated).
pub fn correlation_filter(
    x: &FeatureMatrix,
    y: &[bool],
    threshold: f64,
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let target: Vec<f64> = y.iter().map(|&b| b as u8 as f64).collect();
    let cols: Vec<Vec<f64>> = (0..x.n_cols()).map(|j| x.column(j)).collect();
    let mut constant = Vec::new();
    let mut ranked = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        if c.iter().all(|&v| v == c[0]) {
            constant.push(j);
        } else {
            ranked.push((j, pearson(c, &target).abs()));
        }
    }
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut kept: Vec<usize> = Vec::new();
    let mut correlated = Vec::new();
    for (j, _) in ranked {
        if kept
            .iter()
            .any(|&k| pearson(&cols[j], &cols[k]).abs() > threshold)
        {
            correlated.push(j);
        } else {
            kept.push(j);
        }
    }
    kept.sort_unstable();
    correlated.sort_unstable();
    (kept, constant, correlated)
}

pub const CORRELATION_THRESHOLD: f64 = 0.95;

/// Correlation filter at 0.95 followed by the `k` columns with the largest
/// split-gain importance in a boosted model fitted on the survivors.
pub fn select_features(
    x: &FeatureMatrix,
    y: &[bool],
    k: usize,
    seed: u64,
) -> Result<Selection, GbtError> {
    let (kept, constant, correlated) = correlation_filter(x, y, CORRELATION_THRESHOLD);
    let reduced = x.select_columns(&kept);
    let params = GbtParams {
        learning_rate: 0.1,
        n_estimators: 100,
        subsample: 0.8,
        max_depth: 3,
        seed,
        ..GbtParams::default()
    };
    let fit = train_detailed(&reduced, y, &params)?;
    let importance: Vec<(usize, f64)> = kept.iter().copied().zip(fit.importance).collect();
    let mut order = importance.clone();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    if order.len() < k {
        log::warn!("only {} columns survive filtering, wanted {k}", order.len());
    }
    let mut indices: Vec<usize> = order.iter().take(k).map(|&(j, _)| j).collect();
    indices.sort_unstable();
    Ok(Selection {
        names: indices.iter().map(|&j| x.names()[j].clone()).collect(),
        indices,
        constant,
        correlated,
        importance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> (FeatureMatrix, Vec<bool>) {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let names = ["x", "x_copy", "const", "noise", "y_like"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for _ in 0..300 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let label = x + rng.gen_range(-0.3..0.3) > 0.0;
            rows.push(vec![
                x,
                2.0 * x + 1.0,
                7.0,
                rng.gen(),
                label as u8 as f64 + rng.gen_range(0.0..2.0),
            ]);
            y.push(label);
        }
        (FeatureMatrix::from_rows(names, &rows).unwrap(), y)
    }

    #[test]
    fn filter_keeps_one_duplicate_and_drops_constants() {
        let (x, y) = toy();
        let (kept, constant, correlated) = correlation_filter(&x, &y, 0.95);
        assert_eq!(constant, vec![2]);
        assert_eq!(correlated.len(), 1);
        assert!(correlated[0] <= 1);
        assert_eq!(kept.len(), 3);
    }

    #[test]
    fn selection_is_reproducible() {
        let (x, y) = toy();
        let a = select_features(&x, &y, 2, 5).unwrap();
        let b = select_features(&x, &y, 2, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.indices.len(), 2);
        assert!(a.indices.contains(&0) || a.indices.contains(&1));
    }

    #[test]
    fn pearson_basics() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]) - 1.0).abs() < 1e-12);
        assert_eq!(pearson(&[1.0, 1.0], &[1.0, 2.0]), 0.0);
    }
}
