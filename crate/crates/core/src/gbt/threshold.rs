use super::scores::BinaryScores;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdChoice {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
}

/// Threshold where precision and recall meet: candidates are the distinct
/// predicted probabilities (positive when `p >= t`), the winner minimizes
/// |precision - recall| with ties going to the candidate nearest 0.5.
/// Without both classes, or with a single distinct prediction, returns 0.5.
pub fn tune_threshold(prob: &[f64], truth: &[bool]) -> ThresholdChoice {
    let fallback = |why: &str| {
        log::warn!("threshold tuning degenerate ({why}); using 0.5");
        let s = BinaryScores::at_threshold(prob, truth, 0.5);
        ThresholdChoice {
            threshold: 0.5,
            precision: s.precision(),
            recall: s.recall(),
        }
    };
    let positives = truth.iter().filter(|&&t| t).count();
    if positives == 0 || positives == truth.len() {
        return fallback("single class");
    }
    let mut order: Vec<usize> = (0..prob.len()).collect();
    order.sort_by(|&a, &b| prob[b].total_cmp(&prob[a]));
    if prob[order[0]] == prob[order[order.len() - 1]] {
        return fallback("constant predictions");
    }
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut best: Option<(f64, f64, ThresholdChoice)> = None;
    let mut k = 0;
    while k < order.len() {
        let t = prob[order[k]];
        while k < order.len() && prob[order[k]] == t {
            if truth[order[k]] {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        let precision = tp as f64 / (tp + fp) as f64;
        let recall = tp as f64 / positives as f64;
        let key = ((precision - recall).abs(), (t - 0.5).abs());
        if best.is_none_or(|(gap, dist, _)| key.0 < gap || key.0 == gap && key.1 < dist) {
            best = Some((
                key.0,
                key.1,
                ThresholdChoice {
                    threshold: t,
                    precision,
                    recall,
                },
            ));
        }
    }
    best.map(|b| b.2).expect("at least one candidate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct sweep: every distinct probability scored from scratch.
    fn brute(prob: &[f64], truth: &[bool]) -> f64 {
        let mut ts: Vec<f64> = prob.to_vec();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts.iter()
            .map(|&t| {
                let s = BinaryScores::at_threshold(prob, truth, t);
                (s.precision() - s.recall()).abs()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn imbalanced_separated() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut prob = Vec::new();
        let mut truth = Vec::new();
        for i in 0..500 {
            let pos = i % 10 == 0;
            let p = if pos {
                rng.gen_range(0.3..0.9)
            } else {
                rng.gen_range(0.0..0.4)
            };
            prob.push(p);
            truth.push(pos);
        }
        let c = tune_threshold(&prob, &truth);
        assert!((c.precision - c.recall).abs() < 0.02);
        assert_eq!((c.precision - c.recall).abs(), brute(&prob, &truth));
    }

    #[test]
    fn calibrated_balanced_is_near_half() {
        let prob: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        // calibrated labels: row i positive with probability prob[i], drawn
        // deterministically by alternating within symmetric pairs
        let truth: Vec<bool> = (0..1000)
            .map(|i| (i * 7919 % 1000) as f64 / 1000.0 < prob[i])
            .collect();
        let c = tune_threshold(&prob, &truth);
        assert!((c.threshold - 0.5).abs() < 0.05, "{}", c.threshold);
    }

    #[test]
    fn matches_brute_force_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(5..60);
            let prob: Vec<f64> = (0..n)
                .map(|_| (rng.gen_range(0..20) as f64) / 20.0)
                .collect();
            let mut truth: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
            truth[0] = true;
            truth[1] = false;
            if prob.iter().all(|&p| p == prob[0]) {
                continue;
            }
            let c = tune_threshold(&prob, &truth);
            assert_eq!((c.precision - c.recall).abs(), brute(&prob, &truth));
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(tune_threshold(&[0.2, 0.8], &[true, true]).threshold, 0.5);
        assert_eq!(tune_threshold(&[0.3, 0.3], &[true, false]).threshold, 0.5);
    }
}
