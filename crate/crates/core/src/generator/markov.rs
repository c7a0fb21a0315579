//! Order-3 token Markov chain over SMILES strings.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;

use super::{GenerationBatch, GeneratorError};
use crate::molgraph::{tokenize, Element};
use crate::rng::stream;

pub const ORDER: usize = 3;
pub const BEGIN: &str = "BEGIN";
pub const END: &str = "END";
pub const MAX_LEN: usize = 100;
pub const RESTARTS: usize = 20;
pub const BACKTRACK: usize = 8;
const BUDGET_FACTOR: usize = 20;

const BEGIN_ID: u32 = 0;
const END_ID: u32 = 1;
/// Marks dropped leading positions in backed-off contexts.
const ANY: u32 = u32::MAX;

type Context = [u32; ORDER];

#[derive(Debug, Clone, PartialEq)]
struct Transitions {
    next: Vec<u32>,
    /// Running count totals aligned with `next`.
    cumulative: Vec<u64>,
}

impl Transitions {
    fn total(&self) -> u64 {
        *self.cumulative.last().unwrap_or(&0)
    }

    fn count(&self, token: u32) -> u64 {
        match self.next.iter().position(|&t| t == token) {
            Some(0) => self.cumulative[0],
            Some(k) => self.cumulative[k] - self.cumulative[k - 1],
            None => 0,
        }
    }

    fn sample(&self, rng: &mut impl Rng) -> u32 {
        let r = rng.gen_range(0..self.total());
        self.next[self.cumulative.partition_point(|&c| c <= r)]
    }

    /// Samples among the tokens `allowed` accepts, renormalized; `None`
    /// when it accepts none.
    fn sample_where(&self, rng: &mut impl Rng, allowed: impl Fn(u32) -> bool) -> Option<u32> {
        let weights: Vec<(u32, u64)> = self
            .next
            .iter()
            .map(|&t| (t, self.count(t)))
            .filter(|&(t, _)| allowed(t))
            .collect();
        let total: u64 = weights.iter().map(|w| w.1).sum();
        if total == 0 {
            return None;
        }
        let mut r = rng.gen_range(0..total);
        for (t, w) in weights {
            if r < w {
                return Some(t);
            }
            r -= w;
        }
        unreachable!()
    }
}

/// How tokens are drawn from a context's distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// Plain draws from the fitted counts.
    Free,
    /// Draws renormalized over tokens that keep the string syntactically
    /// completable: balanced branches, ring labels closed on a ring of at
    /// least three atoms, no bond or branch without an atom before it.
    #[default]
    Syntax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    /// `capacity` is the number of single-bond equivalents the atom can
    /// still take; aromatic carbon reserves one for its pi bond.
    /// `donor` marks aromatic atoms that give two pi electrons (o, s, [nH]).
    Atom {
        aromatic: bool,
        donor: bool,
        capacity: u8,
    },
    Bond(u8),
    Open,
    Close,
    Ring(u16),
    End,
}

fn classify(token: &str) -> Class {
    match token {
        END => Class::End,
        "(" => Class::Open,
        ")" => Class::Close,
        "=" => Class::Bond(2),
        "#" => Class::Bond(3),
        "$" => Class::Bond(4),
        "-" | ":" | "/" | "\\" | "." => Class::Bond(1),
        t if t.starts_with('%') => Class::Ring(t[1..].parse().unwrap_or(0)),
        t if t.len() == 1 && t.as_bytes()[0].is_ascii_digit() => {
            Class::Ring((t.as_bytes()[0] - b'0') as u16)
        }
        t => atom_class(t),
    }
}

fn atom_class(token: &str) -> Class {
    let inner = token
        .trim_start_matches('[')
        .trim_end_matches(']')
        .trim_start_matches(|c: char| c.is_ascii_digit());
    let aromatic = inner.starts_with(|c: char| c.is_ascii_lowercase());
    let two: String = inner.chars().take(2).collect();
    let (element, rest) = match Element::from_symbol(&capitalize(&two)) {
        Some(e)
            if two.len() == 2 && token.starts_with('[') || matches!(two.as_str(), "Cl" | "Br") =>
        {
            (Some(e), &inner[2..])
        }
        _ => (
            Element::from_symbol(&capitalize(&inner[..inner.len().min(1)])),
            inner.get(1..).unwrap_or(""),
        ),
    };
    let Some(element) = element else {
        return Class::Atom {
            aromatic,
            donor: false,
            capacity: 4,
        };
    };
    let mut h = 0u8;
    let mut charge = 0i8;
    let mut chars = rest.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            'H' => {
                h = chars
                    .peek()
                    .and_then(|d| d.to_digit(10))
                    .map_or(1, |d| d as u8);
            }
            '+' => charge += 1,
            '-' => charge -= 1,
            _ => {}
        }
    }
    let valences = element.valences(charge);
    let v = if aromatic {
        valences.first()
    } else {
        valences.last()
    };
    let pi = u8::from(aromatic && element == Element::C);
    Class::Atom {
        aromatic,
        donor: aromatic && (h > 0 || matches!(element, Element::O | Element::S)),
        capacity: v.copied().unwrap_or(4).saturating_sub(h + pi),
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_ascii_uppercase().to_string() + c.as_str())
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: Option<usize>,
    depth: usize,
    aromatic: bool,
    donor: bool,
    in_ring: bool,
    /// Remaining single-bond equivalents.
    room: u8,
}

/// Partial parse of the string sampled so far: the spanning tree of atoms,
/// open branches and open ring labels.
#[derive(Debug, Clone, Default)]
struct SyntaxState {
    nodes: Vec<Node>,
    prev: Option<usize>,
    branches: Vec<Option<usize>>,
    /// Open ring labels with the atom that opened them.
    rings: Vec<(u16, usize)>,
    last: Option<Class>,
}

impl SyntaxState {
    /// Tree path between two atoms, both ends included.
    fn path(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let (mut left, mut right) = (vec![], vec![]);
        while a != b {
            if self.nodes[a].depth >= self.nodes[b].depth {
                left.push(a);
                a = self.nodes[a].parent.expect("connected tree");
            } else {
                right.push(b);
                b = self.nodes[b].parent.expect("connected tree");
            }
        }
        left.push(a);
        left.extend(right.into_iter().rev());
        left
    }

    /// Aliphatic rings need three atoms. A ring touching an aromatic atom
    /// must be fully aromatic: six members without pi donors or five with
    /// exactly one.
    fn closable(&self, opener: usize) -> bool {
        let Some(prev) = self.prev else {
            return false;
        };
        let path = self.path(opener, prev);
        let aromatic = path.iter().filter(|&&a| self.nodes[a].aromatic).count();
        if self.nodes[opener].aromatic || self.nodes[prev].aromatic {
            let donors = path.iter().filter(|&&a| self.nodes[a].donor).count();
            aromatic == path.len() && matches!((path.len(), donors), (6, 0) | (5, 1))
        } else {
            path.len() >= 3
        }
    }

    /// An aromatic atom placed outside any open ring must open one.
    fn needs_ring(&self) -> bool {
        matches!(self.last, Some(Class::Atom { aromatic: true, .. }))
            && self.rings.is_empty()
            && self.prev.is_some_and(|p| !self.nodes[p].in_ring)
    }

    fn pending(&self) -> u8 {
        match self.last {
            Some(Class::Bond(k)) => k,
            _ => 1,
        }
    }

    fn room(&self) -> u8 {
        self.prev.map_or(0, |p| self.nodes[p].room)
    }

    fn allows(&self, c: Class) -> bool {
        use Class::*;
        let after_atom = matches!(self.last, Some(Atom { .. } | Ring(_)));
        if self.needs_ring() {
            return matches!(c, Ring(l) if !self.rings.iter().any(|r| r.0 == l) && self.room() >= 1);
        }
        match c {
            Atom { capacity, .. } => {
                self.prev.is_none() || (self.room() >= self.pending() && capacity >= self.pending())
            }
            Bond(k) => (after_atom || matches!(self.last, Some(Close | Open))) && self.room() >= k,
            Open => (after_atom || self.last == Some(Close)) && self.room() >= 1,
            Close => !self.branches.is_empty() && (after_atom || self.last == Some(Close)),
            Ring(l) => match self.rings.iter().find(|r| r.0 == l) {
                Some(&(_, opener)) => {
                    let k = self.pending();
                    (after_atom || matches!(self.last, Some(Bond(_))))
                        && self.room() >= k
                        && self.nodes[opener].room + 1 >= k
                        && self.closable(opener)
                }
                None => after_atom && self.room() >= 1,
            },
            End => {
                self.branches.is_empty()
                    && self.rings.is_empty()
                    && (after_atom || self.last == Some(Close))
                    && self.nodes.iter().all(|n| !n.aromatic || n.in_ring)
            }
        }
    }

    fn push(&mut self, c: Class) {
        match c {
            Class::Atom {
                aromatic,
                donor,
                capacity,
            } => {
                let order = self.pending();
                let depth = match self.prev {
                    Some(p) => {
                        self.nodes[p].room = self.nodes[p].room.saturating_sub(order);
                        self.nodes[p].depth + 1
                    }
                    None => 0,
                };
                self.nodes.push(Node {
                    parent: self.prev,
                    depth,
                    aromatic,
                    donor,
                    in_ring: false,
                    room: capacity.saturating_sub(if self.prev.is_some() { order } else { 0 }),
                });
                self.prev = Some(self.nodes.len() - 1);
            }
            Class::Open => self.branches.push(self.prev),
            Class::Close => {
                if let Some(p) = self.branches.pop() {
                    self.prev = p;
                }
            }
            Class::Ring(l) => match self.rings.iter().position(|r| r.0 == l) {
                Some(k) => {
                    let order = self.pending();
                    let (_, opener) = self.rings.remove(k);
                    if let Some(prev) = self.prev {
                        // one unit was reserved on the opener
                        self.nodes[opener].room = self.nodes[opener].room.saturating_sub(order - 1);
                        self.nodes[prev].room = self.nodes[prev].room.saturating_sub(order);
                        for a in self.path(opener, prev) {
                            self.nodes[a].in_ring = true;
                        }
                    }
                }
                None => {
                    if let Some(prev) = self.prev {
                        self.nodes[prev].room = self.nodes[prev].room.saturating_sub(1);
                        self.rings.push((l, prev));
                    }
                }
            },
            Class::Bond(_) | Class::End => {}
        }
        self.last = Some(c);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovModel {
    /// Token strings by id; ids 0 and 1 are the sentinels.
    alphabet: Vec<String>,
    classes: Vec<Class>,
    transitions: HashMap<Context, Transitions>,
}

impl MarkovModel {
    /// Builds the transition tables, including shorter backed-off contexts
    /// obtained by summing over dropped leading tokens.
    fn from_counts(
        alphabet: Vec<String>,
        mut counts: BTreeMap<Context, BTreeMap<u32, u64>>,
    ) -> Result<Self, GeneratorError> {
        let full: Vec<(Context, BTreeMap<u32, u64>)> =
            counts.iter().map(|(k, v)| (*k, v.clone())).collect();
        for drop in 1..=ORDER {
            for (ctx, next) in &full {
                let mut short = *ctx;
                short[..drop].fill(ANY);
                let entry = counts.entry(short).or_default();
                for (&t, &c) in next {
                    *entry.entry(t).or_default() += c;
                }
            }
        }
        let mut transitions = HashMap::new();
        for (ctx, next) in counts {
            let mut ids = Vec::new();
            let mut cumulative = Vec::new();
            let mut total = 0;
            for (t, c) in next {
                if c == 0 {
                    continue;
                }
                total += c;
                ids.push(t);
                cumulative.push(total);
            }
            if total == 0 {
                return Err(GeneratorError::Model(format!(
                    "context {ctx:?} has no counts"
                )));
            }
            transitions.insert(
                ctx,
                Transitions {
                    next: ids,
                    cumulative,
                },
            );
        }
        Ok(MarkovModel {
            classes: alphabet.iter().map(|t| classify(t)).collect(),
            alphabet,
            transitions,
        })
    }

    pub fn fit<S: AsRef<str>>(corpus: &[S]) -> Result<Self, GeneratorError> {
        if corpus.is_empty() {
            return Err(GeneratorError::EmptyCorpus);
        }
        let tokenized: Vec<Vec<String>> = corpus.iter().map(|s| tokenize(s.as_ref())).collect();
        let mut symbols: Vec<&str> = tokenized.iter().flatten().map(String::as_str).collect();
        symbols.sort_unstable();
        symbols.dedup();
        let mut alphabet = vec![BEGIN.to_string(), END.to_string()];
        alphabet.extend(symbols.iter().map(|s| s.to_string()));
        let id: HashMap<&str, u32> = alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u32))
            .collect();
        let mut counts: BTreeMap<Context, BTreeMap<u32, u64>> = BTreeMap::new();
        for tokens in &tokenized {
            let mut ctx = [BEGIN_ID; ORDER];
            for t in tokens.iter().map(|t| id[t.as_str()]).chain([END_ID]) {
                *counts.entry(ctx).or_default().entry(t).or_default() += 1;
                ctx.rotate_left(1);
                ctx[ORDER - 1] = t;
            }
        }
        MarkovModel::from_counts(alphabet, counts)
    }

    /// Token alphabet including the BEGIN and END sentinels.
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// Number of full-length contexts.
    pub fn contexts(&self) -> usize {
        self.transitions.keys().filter(|c| c[0] != ANY).count()
    }

    fn ids(&self, smiles: &str) -> Option<Vec<u32>> {
        tokenize(smiles)
            .iter()
            .map(|t| self.alphabet.iter().position(|a| a == t).map(|p| p as u32))
            .collect()
    }

    /// Natural-log probability of emitting `smiles` followed by END;
    /// `None` when some transition was never observed.
    pub fn log_likelihood(&self, smiles: &str) -> Option<f64> {
        let mut ctx = [BEGIN_ID; ORDER];
        let mut total = 0.0;
        for t in self.ids(smiles)?.into_iter().chain([END_ID]) {
            let tr = self.transitions.get(&ctx)?;
            let c = tr.count(t);
            if c == 0 {
                return None;
            }
            total += (c as f64 / tr.total() as f64).ln();
            ctx.rotate_left(1);
            ctx[ORDER - 1] = t;
        }
        Some(total)
    }

    /// Next-token distribution after a context given as token strings
    /// (shorter contexts are left-padded with BEGIN).
    pub fn distribution(&self, context: &[&str]) -> Vec<(String, f64)> {
        let mut ctx = [BEGIN_ID; ORDER];
        let skip = ORDER.saturating_sub(context.len());
        for (k, t) in context.iter().rev().take(ORDER).rev().enumerate() {
            match self.alphabet.iter().position(|a| a == t) {
                Some(p) => ctx[skip + k] = p as u32,
                None => return Vec::new(),
            }
        }
        let Some(tr) = self.transitions.get(&ctx) else {
            return Vec::new();
        };
        tr.next
            .iter()
            .map(|&t| {
                (
                    self.alphabet[t as usize].clone(),
                    tr.count(t) as f64 / tr.total() as f64,
                )
            })
            .collect()
    }

    /// One string; stops at END or after `max_len` tokens. Under
    /// [`Sampling::Syntax`] a draw that exhausts its budget is restarted,
    /// up to [`RESTARTS`] times, before the unfinished string is returned.
    pub fn sample(&self, rng: &mut impl Rng, max_len: usize, mode: Sampling) -> String {
        let mut out = String::new();
        for _ in 0..=RESTARTS {
            let (s, ended) = self.draw(rng, max_len, mode);
            out = s;
            if ended || mode == Sampling::Free {
                break;
            }
        }
        out
    }

    /// Returns the string and whether it ended cleanly (END drawn, or a
    /// context without continuations in free mode). In syntax mode a dead
    /// end or the length limit backtracks up to [`BACKTRACK`] tokens, within
    /// a budget of `BUDGET_FACTOR * max_len` token draws.
    fn draw(&self, rng: &mut impl Rng, max_len: usize, mode: Sampling) -> (String, bool) {
        let mut ctx = [BEGIN_ID; ORDER];
        let mut tokens: Vec<u32> = Vec::new();
        let mut state = SyntaxState::default();
        let mut history: Vec<(Context, SyntaxState)> = Vec::new();
        let text = |tokens: &[u32]| -> String {
            tokens
                .iter()
                .map(|&t| self.alphabet[t as usize].as_str())
                .collect()
        };
        for _ in 0..max_len.max(1) * BUDGET_FACTOR {
            let drawn = match mode {
                Sampling::Free => match self.transitions.get(&ctx) {
                    Some(tr) => Some(tr.sample(rng)),
                    None => return (text(&tokens), true),
                },
                Sampling::Syntax if tokens.len() < max_len => {
                    self.sample_admissible(&ctx, &state, rng)
                }
                Sampling::Syntax => None,
            };
            let Some(t) = drawn else {
                let back = rng.gen_range(1..=BACKTRACK).min(history.len());
                if back == 0 {
                    return (text(&tokens), false);
                }
                tokens.truncate(tokens.len() - back);
                history.truncate(history.len() - back + 1);
                (ctx, state) = history.pop().expect("non-empty history");
                continue;
            };
            if t == END_ID {
                return (text(&tokens), true);
            }
            if mode == Sampling::Syntax {
                history.push((ctx, state.clone()));
                state.push(self.classes[t as usize]);
            }
            tokens.push(t);
            ctx.rotate_left(1);
            ctx[ORDER - 1] = t;
            if mode == Sampling::Free && tokens.len() >= max_len {
                break;
            }
        }
        (text(&tokens), false)
    }

    /// Tries the full context, then ever shorter ones, until some
    /// continuation is admissible.
    fn sample_admissible(
        &self,
        ctx: &Context,
        state: &SyntaxState,
        rng: &mut impl Rng,
    ) -> Option<u32> {
        for drop in 0..=ORDER {
            let mut short = *ctx;
            short[..drop].fill(ANY);
            if let Some(tr) = self.transitions.get(&short) {
                if let Some(t) = tr.sample_where(rng, |t| state.allows(self.classes[t as usize])) {
                    return Some(t);
                }
            }
        }
        None
    }

    /// `n` strings; item `i` draws from its own stream of `seed`.
    pub fn generate(&self, n: usize, seed: u64, max_len: usize) -> GenerationBatch {
        self.generate_with(n, seed, max_len, Sampling::default())
    }

    pub fn generate_with(
        &self,
        n: usize,
        seed: u64,
        max_len: usize,
        mode: Sampling,
    ) -> GenerationBatch {
        let produced: Vec<String> = (0..n)
            .into_par_iter()
            .map(|i| self.sample(&mut stream(seed, &[5, i as u64]), max_len, mode))
            .collect();
        GenerationBatch {
            requested: n,
            provenance: vec!["markov".to_string(); produced.len()],
            produced,
        }
    }

    fn context_text(&self, ctx: &Context) -> String {
        ctx.iter()
            .map(|&t| self.alphabet[t as usize].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// "context tokens<TAB>next token<TAB>count" lines, with the context
    /// tokens separated by spaces; sorted for stable output.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        for (ctx, tr) in self.transitions.iter().filter(|(c, _)| c[0] != ANY) {
            let c = self.context_text(ctx);
            for &t in &tr.next {
                lines.push(format!(
                    "{c}\t{}\t{}",
                    self.alphabet[t as usize],
                    tr.count(t)
                ));
            }
        }
        lines.sort();
        lines.iter().map(|l| format!("{l}\n")).collect()
    }

    pub fn from_text(text: &str) -> Result<Self, GeneratorError> {
        let mut rows: Vec<(Vec<&str>, &str, u64)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || GeneratorError::Format {
                line: n + 1,
                text: line.to_string(),
            };
            let mut parts = line.split('\t');
            let ctx: Vec<&str> = parts.next().ok_or_else(bad)?.split(' ').collect();
            let next = parts.next().ok_or_else(bad)?;
            let count: u64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if ctx.len() != ORDER || parts.next().is_some() || next == BEGIN {
                return Err(bad());
            }
            rows.push((ctx, next, count));
        }
        if rows.is_empty() {
            return Err(GeneratorError::EmptyCorpus);
        }
        let mut symbols: Vec<&str> = rows
            .iter()
            .flat_map(|(c, n, _)| c.iter().copied().chain([*n]))
            .filter(|s| *s != BEGIN && *s != END)
            .collect();
        symbols.sort_unstable();
        symbols.dedup();
        let mut alphabet = vec![BEGIN.to_string(), END.to_string()];
        alphabet.extend(symbols.iter().map(|s| s.to_string()));
        let id = |s: &str| alphabet.iter().position(|a| a == s).unwrap() as u32;
        let mut counts: BTreeMap<Context, BTreeMap<u32, u64>> = BTreeMap::new();
        for (ctx, next, c) in rows {
            let key = [id(ctx[0]), id(ctx[1]), id(ctx[2])];
            *counts.entry(key).or_default().entry(id(next)).or_default() += c;
        }
        MarkovModel::from_counts(alphabet, counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_path() {
        let m = MarkovModel::fit(&["CCO"]).unwrap();
        let b = m.generate(20, 1, MAX_LEN);
        assert!(b.produced.iter().all(|s| s == "CCO"));
        assert_eq!(m.log_likelihood("CCO"), Some(0.0));
    }

    #[test]
    fn alphabet() {
        let m = MarkovModel::fit(&["CCO", "CCN"]).unwrap();
        let mut a: Vec<&str> = m.alphabet().iter().map(String::as_str).collect();
        a.sort_unstable();
        assert_eq!(a, ["BEGIN", "C", "END", "N", "O"]);
        assert!(MarkovModel::fit::<&str>(&[]).is_err());
    }

    #[test]
    fn corpus_strings_have_support() {
        let corpus = ["OC(=O)c1ccccc1", "Clc1ccc(Br)cc1", "C[nH]1cccc1", "NC(=O)N"];
        let m = MarkovModel::fit(&corpus).unwrap();
        for s in corpus {
            assert!(m.log_likelihood(s).is_some(), "{s}");
        }
        assert!(m.log_likelihood("S").is_none());
    }

    #[test]
    fn text_round_trip() {
        let m = MarkovModel::fit(&["CCO", "CCN", "c1ccccc1Cl"]).unwrap();
        let back = MarkovModel::from_text(&m.to_text()).unwrap();
        assert_eq!(back.to_text(), m.to_text());
        assert_eq!(back.generate(50, 3, MAX_LEN), m.generate(50, 3, MAX_LEN));
        assert!(MarkovModel::from_text("C C\tO\t1\n").is_err());
        assert!(MarkovModel::from_text("BEGIN BEGIN BEGIN\tC\tx\n").is_err());
    }

    #[test]
    fn truncation_and_empty() {
        let m = MarkovModel::fit(&["CCCCCCCCCC"]).unwrap();
        assert_eq!(
            m.sample(&mut ChaCha8Rng::seed_from_u64(0), 4, Sampling::Free),
            "CCCC"
        );
        assert!(m.generate(0, 0, MAX_LEN).produced.is_empty());
    }
}
