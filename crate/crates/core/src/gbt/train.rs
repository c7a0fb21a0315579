use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{sigmoid, GbtError, GbtModel, GbtParams, Node, Tree};
use crate::dataset::FeatureMatrix;

const MAX_BINS: usize = 256;
const MIN_GAIN: f64 = 1e-12;

/// Column-major bin codes plus the real-valued cut points behind them.
struct Binned {
    rows: usize,
    codes: Vec<u8>,
    edges: Vec<Vec<f64>>,
    offsets: Vec<usize>,
    total_bins: usize,
}

fn cut_points(mut col: Vec<f64>) -> Vec<f64> {
    col.sort_by(f64::total_cmp);
    let mut distinct = col.clone();
    distinct.dedup();
    let between = |a: f64, b: f64| {
        let mid = a + (b - a) / 2.0;
        if mid < b {
            mid
        } else {
            a
        }
    };
    if distinct.len() <= MAX_BINS {
        return distinct.windows(2).map(|w| between(w[0], w[1])).collect();
    }
    let n = col.len();
    let mut edges: Vec<f64> = (1..MAX_BINS)
        .filter_map(|q| {
            let v = col[q * n / MAX_BINS - 1];
            let k = distinct.partition_point(|&d| d <= v);
            distinct.get(k).map(|&next| between(v, next))
        })
        .collect();
    edges.dedup();
    edges
}

impl Binned {
    fn new(x: &FeatureMatrix) -> Binned {
        let rows = x.n_rows();
        let mut codes = vec![0u8; rows * x.n_cols()];
        let mut edges = Vec::with_capacity(x.n_cols());
        let mut offsets = Vec::with_capacity(x.n_cols());
        let mut total_bins = 0;
        for f in 0..x.n_cols() {
            let col = x.column(f);
            let e = cut_points(col.clone());
            for (i, v) in col.iter().enumerate() {
                codes[f * rows + i] = e.partition_point(|&t| t < *v) as u8;
            }
            offsets.push(total_bins);
            total_bins += e.len() + 1;
            edges.push(e);
        }
        Binned {
            rows,
            codes,
            edges,
            offsets,
            total_bins,
        }
    }

    fn code(&self, f: usize, i: u32) -> usize {
        self.codes[f * self.rows + i as usize] as usize
    }
}

#[derive(Clone)]
struct Hist {
    grad: Vec<f64>,
    hess: Vec<f64>,
    count: Vec<u32>,
}

impl Hist {
    fn build(b: &Binned, rows: &[u32], grad: &[f64], hess: &[f64]) -> Hist {
        let mut h = Hist {
            grad: vec![0.0; b.total_bins],
            hess: vec![0.0; b.total_bins],
            count: vec![0; b.total_bins],
        };
        let g: Vec<f64> = rows.iter().map(|&i| grad[i as usize]).collect();
        let w: Vec<f64> = rows.iter().map(|&i| hess[i as usize]).collect();
        for (f, &off) in b.offsets.iter().enumerate() {
            let col = &b.codes[f * b.rows..(f + 1) * b.rows];
            for (k, &i) in rows.iter().enumerate() {
                let slot = off + col[i as usize] as usize;
                h.grad[slot] += g[k];
                h.hess[slot] += w[k];
                h.count[slot] += 1;
            }
        }
        h
    }

    fn minus(&self, other: &Hist) -> Hist {
        Hist {
            grad: self
                .grad
                .iter()
                .zip(&other.grad)
                .map(|(a, b)| a - b)
                .collect(),
            hess: self
                .hess
                .iter()
                .zip(&other.hess)
                .map(|(a, b)| a - b)
                .collect(),
            count: self
                .count
                .iter()
                .zip(&other.count)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

struct Grower<'a> {
    binned: &'a Binned,
    grad: &'a [f64],
    hess: &'a [f64],
    max_depth: usize,
    min_leaf: u32,
    nodes: Vec<Node>,
    importance: Vec<f64>,
}

impl Grower<'_> {
    /// Residual-fitting split search: maximizes the squared-error reduction
    /// of the gradients. Returns (gain, feature, bin).
    fn best_split(&self, hist: &Hist, sum: f64, n: u32) -> Option<(f64, usize, usize)> {
        let parent = sum * sum / n as f64;
        let mut best: Option<(f64, usize, usize)> = None;
        for (f, &off) in self.binned.offsets.iter().enumerate() {
            let bins = self.binned.edges[f].len() + 1;
            let (mut sl, mut nl) = (0.0, 0u32);
            for b in 0..bins - 1 {
                sl += hist.grad[off + b];
                nl += hist.count[off + b];
                let nr = n - nl;
                if nl < self.min_leaf {
                    continue;
                }
                if nr < self.min_leaf {
                    break;
                }
                let sr = sum - sl;
                let gain = sl * sl / nl as f64 + sr * sr / nr as f64 - parent;
                if gain > MIN_GAIN && best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, f, b));
                }
            }
        }
        best
    }

    fn grow(&mut self, rows: Vec<u32>, hist: Hist, depth: usize) -> usize {
        let off = self.binned.offsets[0];
        let span = off..off + self.binned.edges[0].len() + 1;
        let sum: f64 = hist.grad[span.clone()].iter().sum();
        let hsum: f64 = hist.hess[span].iter().sum();
        let n = rows.len() as u32;
        let id = self.nodes.len();
        let newton = if hsum > 1e-150 { sum / hsum } else { 0.0 };
        self.nodes.push(Node::Leaf(newton));
        if depth >= self.max_depth || n < 2 * self.min_leaf {
            return id;
        }
        let Some((gain, f, b)) = self.best_split(&hist, sum, n) else {
            return id;
        };
        self.importance[f] += gain;
        let (left, right): (Vec<u32>, Vec<u32>) =
            rows.iter().partition(|&&i| self.binned.code(f, i) <= b);
        let (lh, rh) = if left.len() <= right.len() {
            let lh = Hist::build(self.binned, &left, self.grad, self.hess);
            let rh = hist.minus(&lh);
            (lh, rh)
        } else {
            let rh = Hist::build(self.binned, &right, self.grad, self.hess);
            (hist.minus(&rh), rh)
        };
        drop(hist);
        let l = self.grow(left, lh, depth + 1);
        let r = self.grow(right, rh, depth + 1);
        self.nodes[id] = Node::Split {
            feature: f,
            threshold: self.binned.edges[f][b],
            left: l,
            right: r,
        };
        id
    }
}

/// A fitted model with per-feature split-gain importance and the mean
/// training log-loss after each tree (entry 0 is the prior alone).
#[derive(Debug, Clone)]
pub struct Trained {
    pub model: GbtModel,
    pub importance: Vec<f64>,
    pub train_loss: Vec<f64>,
}

fn log_loss(margin: &[f64], y: &[bool]) -> f64 {
    let softplus = |z: f64| z.max(0.0) + (-z.abs()).exp().ln_1p();
    margin
        .iter()
        .zip(y)
        .map(|(&f, &t)| softplus(f) - if t { f } else { 0.0 })
        .sum::<f64>()
        / margin.len() as f64
}

pub fn train(x: &FeatureMatrix, y: &[bool], params: &GbtParams) -> Result<GbtModel, GbtError> {
    train_detailed(x, y, params).map(|t| t.model)
}

/// Logistic-loss boosting: each tree is fitted to the residuals y - p,
/// leaves take the Newton step sum(r) / sum(p(1-p)).
pub fn train_detailed(
    x: &FeatureMatrix,
    y: &[bool],
    params: &GbtParams,
) -> Result<Trained, GbtError> {
    params.check()?;
    let n = x.n_rows();
    if y.len() != n {
        return Err(GbtError::LabelCount {
            rows: n,
            labels: y.len(),
        });
    }
    let pos = y.iter().filter(|&&t| t).count();
    if pos == 0 || pos == n {
        return Err(GbtError::SingleClass);
    }
    let binned = Binned::new(x);
    let base_score = (pos as f64 / (n - pos) as f64).ln();
    let mut margin = vec![base_score; n];
    let mut train_loss = vec![log_loss(&margin, y)];
    let mut importance = vec![0.0; x.n_cols()];
    let mut trees = Vec::with_capacity(params.n_estimators);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let bag = ((params.subsample * n as f64) as usize).clamp(1, n);
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n];
    for _ in 0..params.n_estimators {
        for i in 0..n {
            let p = sigmoid(margin[i]);
            grad[i] = y[i] as u8 as f64 - p;
            hess[i] = p * (1.0 - p);
        }
        let rows: Vec<u32> = if bag == n {
            (0..n as u32).collect()
        } else {
            let mut r: Vec<u32> = rand::seq::index::sample(&mut rng, n, bag)
                .into_iter()
                .map(|i| i as u32)
                .collect();
            r.sort_unstable();
            r
        };
        let hist = Hist::build(&binned, &rows, &grad, &hess);
        let mut grower = Grower {
            binned: &binned,
            grad: &grad,
            hess: &hess,
            max_depth: params.max_depth,
            min_leaf: params.min_samples_leaf as u32,
            nodes: Vec::new(),
            importance: vec![0.0; x.n_cols()],
        };
        grower.grow(rows, hist, 0);
        for (acc, g) in importance.iter_mut().zip(&grower.importance) {
            *acc += g;
        }
        let tree = Tree {
            nodes: grower.nodes,
        };
        for (i, m) in margin.iter_mut().enumerate() {
            *m += params.learning_rate * tree.evaluate(x.row(i));
        }
        train_loss.push(log_loss(&margin, y));
        trees.push(tree);
    }
    Ok(Trained {
        model: GbtModel {
            trees,
            learning_rate: params.learning_rate,
            base_score,
            threshold: 0.5,
            manifest: x.names().to_vec(),
            task: String::new(),
            params: Some(*params),
        },
        importance,
        train_loss,
    })
}
