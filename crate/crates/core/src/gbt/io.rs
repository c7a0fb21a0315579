//! Line-oriented text format for trained models.
//!
//! ```text
//! gbt-model 1
//! task unobstructed
//! threshold 0.5
//! learning_rate 0.1
//! base_score 0.8
//! params 100 0.8 3 1 7
//! features 2
//! a:tpsa
//! sum:hbd_count
//! trees 1
//! tree 3
//! 0 1 2.5 1 2
//! 1 | -0.25
//! 2 | 0.5
//! ```
//!
//! `params` (n_estimators subsample max_depth min_samples_leaf seed) is
//! optional. A split line is "id feature threshold left right", a leaf
//! line "id | value".

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{GbtError, GbtModel, GbtParams, Node, Tree};

const MAGIC: &str = "gbt-model";
const VERSION: u32 = 1;

impl GbtModel {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{MAGIC} {VERSION}").unwrap();
        writeln!(s, "task {}", self.task).unwrap();
        writeln!(s, "threshold {:?}", self.threshold).unwrap();
        writeln!(s, "learning_rate {:?}", self.learning_rate).unwrap();
        writeln!(s, "base_score {:?}", self.base_score).unwrap();
        if let Some(p) = &self.params {
            writeln!(
                s,
                "params {} {:?} {} {} {}",
                p.n_estimators, p.subsample, p.max_depth, p.min_samples_leaf, p.seed
            )
            .unwrap();
        }
        writeln!(s, "features {}", self.manifest.len()).unwrap();
        for name in &self.manifest {
            writeln!(s, "{name}").unwrap();
        }
        writeln!(s, "trees {}", self.trees.len()).unwrap();
        for t in &self.trees {
            writeln!(s, "tree {}", t.nodes.len()).unwrap();
            for (id, node) in t.nodes.iter().enumerate() {
                match *node {
                    Node::Leaf(v) => writeln!(s, "{id} | {v:?}").unwrap(),
                    Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    } => writeln!(s, "{id} {feature} {threshold:?} {left} {right}").unwrap(),
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<GbtModel, GbtError> {
        Parser::new(text).model()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), GbtError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<GbtModel, GbtError> {
        GbtModel::from_text(&std::fs::read_to_string(path)?)
    }
}

struct Parser<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    line: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lines: text.lines().enumerate().peekable(),
            line: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, GbtError> {
        Err(GbtError::Format {
            line: self.line,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Result<&'a str, GbtError> {
        match self.lines.next() {
            Some((k, l)) => {
                self.line = k + 1;
                Ok(l.trim_end())
            }
            None => self.err("unexpected end of file"),
        }
    }

    fn num<T: FromStr>(&self, tok: &str) -> Result<T, GbtError> {
        tok.parse()
            .or_else(|_| self.err(format!("bad number {tok:?}")))
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str, GbtError> {
        let line = self.next()?;
        match line.split_once(' ') {
            Some((k, rest)) if k == key => Ok(rest.trim()),
            _ if line == key => Ok(""),
            _ => self.err(format!("expected {key:?}")),
        }
    }

    fn keyed_num<T: FromStr>(&mut self, key: &str) -> Result<T, GbtError> {
        let v = self.keyed(key)?;
        self.num(v)
    }

    fn model(mut self) -> Result<GbtModel, GbtError> {
        let version: u32 = self.keyed_num(MAGIC)?;
        if version != VERSION {
            return self.err(format!("unsupported version {version}"));
        }
        let task = self.keyed("task")?.to_string();
        let threshold: f64 = self.keyed_num("threshold")?;
        if !(threshold > 0.0 && threshold < 1.0) {
            return self.err("threshold outside (0, 1)");
        }
        let learning_rate = self.keyed_num("learning_rate")?;
        let base_score: f64 = self.keyed_num("base_score")?;
        let params = match self.lines.peek() {
            Some((_, l)) if l.starts_with("params") => {
                let rest = self.keyed("params")?;
                let t: Vec<&str> = rest.split_whitespace().collect();
                if t.len() != 5 {
                    return self.err("params needs 5 fields");
                }
                Some(GbtParams {
                    n_estimators: self.num(t[0])?,
                    subsample: self.num(t[1])?,
                    max_depth: self.num(t[2])?,
                    min_samples_leaf: self.num(t[3])?,
                    seed: self.num(t[4])?,
                    learning_rate,
                })
            }
            _ => None,
        };
        let n_features: usize = self.keyed_num("features")?;
        let mut manifest = Vec::with_capacity(n_features);
        for _ in 0..n_features {
            manifest.push(self.next()?.to_string());
        }
        let n_trees: usize = self.keyed_num("trees")?;
        let mut trees = Vec::with_capacity(n_trees);
        for _ in 0..n_trees {
            trees.push(self.tree(n_features)?);
        }
        if let Some((k, _)) = self.lines.find(|(_, l)| !l.trim().is_empty()) {
            self.line = k + 1;
            return self.err("trailing content");
        }
        Ok(GbtModel {
            trees,
            learning_rate,
            base_score,
            threshold,
            manifest,
            task,
            params,
        })
    }

    fn tree(&mut self, n_features: usize) -> Result<Tree, GbtError> {
        let count: usize = self.keyed_num("tree")?;
        if count == 0 {
            return self.err("empty tree");
        }
        let mut nodes = Vec::with_capacity(count);
        for id in 0..count {
            let line = self.next()?;
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.first().map(|s| self.num::<usize>(s)).transpose()? != Some(id) {
                return self.err(format!("expected node {id}"));
            }
            let node = match t.as_slice() {
                [_, "|", v] => Node::Leaf(self.num(v)?),
                [_, f, thr, l, r] => {
                    let (feature, left, right): (usize, usize, usize) =
                        (self.num(f)?, self.num(l)?, self.num(r)?);
                    if feature >= n_features {
                        return self.err(format!("feature {feature} out of range"));
                    }
                    // children after the parent rules out cycles
                    if left <= id || right <= id || left >= count || right >= count {
                        return self.err("child index out of order");
                    }
                    Node::Split {
                        feature,
                        threshold: self.num(thr)?,
                        left,
                        right,
                    }
                }
                _ => return self.err("malformed node"),
            };
            nodes.push(node);
        }
        Ok(Tree { nodes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GbtModel {
        GbtModel {
            trees: vec![
                Tree {
                    nodes: vec![
                        Node::Split {
                            feature: 1,
                            threshold: 2.5,
                            left: 1,
                            right: 2,
                        },
                        Node::Leaf(-0.25),
                        Node::Leaf(0.1 + 0.2),
                    ],
                },
                Tree::leaf(1e-300),
            ],
            learning_rate: 0.1,
            base_score: 0.8,
            threshold: 0.43,
            manifest: vec!["a:tpsa".into(), "sum:hbd_count".into()],
            task: "unobstructed".into(),
            params: Some(GbtParams {
                learning_rate: 0.1,
                n_estimators: 2,
                subsample: 0.75,
                max_depth: 1,
                min_samples_leaf: 1,
                seed: 7,
            }),
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let m = sample();
        let back = GbtModel::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
        let mut bare = m.clone();
        bare.params = None;
        assert_eq!(GbtModel::from_text(&bare.to_text()).unwrap(), bare);
    }

    #[test]
    fn rejects_corruption() {
        let text = sample().to_text();
        let cases = [
            text.replace("gbt-model 1", "gbt-model 2"),
            text.replace("0 1 2.5 1 2", "0 5 2.5 1 2"),
            text.replace("0 1 2.5 1 2", "0 1 2.5 0 2"),
            text.replace("threshold 0.43", "threshold 1.5"),
            text.replace("trees 2", "trees 3"),
            format!("{text}junk\n"),
        ];
        for bad in cases {
            assert!(GbtModel::from_text(&bad).is_err(), "{bad}");
        }
    }
}
