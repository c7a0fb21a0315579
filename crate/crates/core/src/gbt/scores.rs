/// Confusion counts for a binary classifier.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BinaryScores {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn f1_of(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

impl BinaryScores {
    pub fn from_labels(pred: &[bool], truth: &[bool]) -> Self {
        let mut s = BinaryScores::default();
        for (&p, &t) in pred.iter().zip(truth) {
            match (p, t) {
                (true, true) => s.tp += 1,
                (true, false) => s.fp += 1,
                (false, false) => s.tn += 1,
                (false, true) => s.fn_ += 1,
            }
        }
        s
    }

    /// Positive when `prob >= threshold`.
    pub fn at_threshold(prob: &[f64], truth: &[bool], threshold: f64) -> Self {
        let pred: Vec<bool> = prob.iter().map(|&p| p >= threshold).collect();
        BinaryScores::from_labels(&pred, truth)
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.total())
    }

    /// 0 when nothing is predicted positive.
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// F1 of the positive class.
    pub fn f1(&self) -> f64 {
        f1_of(self.precision(), self.recall())
    }

    /// Unweighted mean of the positive-class and negative-class F1.
    pub fn macro_f1(&self) -> f64 {
        let neg_p = ratio(self.tn, self.tn + self.fn_);
        let neg_r = ratio(self.tn, self.tn + self.fp);
        (self.f1() + f1_of(neg_p, neg_r)) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_counted() {
        let s = BinaryScores::from_labels(
            &[true, true, false, false, true],
            &[true, false, false, true, true],
        );
        assert_eq!(
            s,
            BinaryScores {
                tp: 2,
                fp: 1,
                tn: 1,
                fn_: 1
            }
        );
        assert_eq!(s.accuracy(), 0.6);
        assert!((s.precision() - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.f1() - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.macro_f1() - (2.0 / 3.0 + 0.5) / 2.0).abs() < 1e-12);
        assert_eq!(BinaryScores::default().f1(), 0.0);
    }
}
