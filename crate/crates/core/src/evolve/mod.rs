//! Multi-objective coformer optimization: fitness, population schemes and
//! run reports.

mod elitism;
mod groups;
mod moead;
mod mutate;
mod pareto;
mod schemes;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use elitism::apply_elitism;
pub use groups::{find_groups, GroupMatch};
pub use moead::{neighborhoods, simplex_lattice, weight_vectors, MoeadState};
pub use mutate::{
    apply_operator, mutate, try_operator, Constraints, Mutation, MutationOp, Violation,
    MAX_ATTEMPTS,
};
pub use pareto::{
    compare_points, crowding_distances, dominates, hypervolume, nondominated_ranks, quality_order,
    tchebycheff, weakly_dominates, Point, HV_TOLERANCE, UNIFORM_WEIGHT,
};
pub use schemes::{moead_step, pareto_step, StepOutcome};

use crate::descriptors::{compute_descriptors, sa_score, DescriptorVector, SA_THRESHOLD};
use crate::gbt::PropertyModels;
use crate::molgraph::{parse_smiles, Element, Molecule, HEAVY_ELEMENTS};
use crate::rng::stream;

#[derive(Debug, Error)]
pub enum EvolveError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("none of the {0} initial molecules is valid under the constraints")]
    NoValidInitial(usize),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Minimized objective vector (1 − p_u, 1 − p_o, p_h).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness {
    pub f: Point,
    /// False for molecules outside the constraints; those carry (1, 1, 1).
    pub feasible: bool,
}

impl Fitness {
    pub fn from_probabilities(p: [f64; 3]) -> Self {
        let [pu, po, ph] = p.map(|v| v.clamp(0.0, 1.0));
        Fitness {
            f: [1.0 - pu, 1.0 - po, ph],
            feasible: true,
        }
    }

    pub fn infeasible() -> Self {
        Fitness {
            f: [1.0; 3],
            feasible: false,
        }
    }

    /// Recovers (p_u, p_o, p_h).
    pub fn probabilities(&self) -> [f64; 3] {
        [1.0 - self.f[0], 1.0 - self.f[1], self.f[2]]
    }
}

#[derive(Debug, Clone)]
pub struct Individual {
    pub molecule: Molecule,
    pub smiles: String,
    pub fitness: Fitness,
}

impl PartialEq for Individual {
    fn eq(&self, other: &Self) -> bool {
        self.smiles == other.smiles && self.fitness == other.fitness
    }
}

impl Individual {
    pub fn sa(&self) -> f64 {
        sa_score(&self.molecule).value()
    }
}

/// Maps a feasible coformer to (p_u, p_o, p_h).
pub trait Objective: Sync {
    fn probabilities(&self, coformer: &Molecule) -> Option<[f64; 3]>;
}

/// Trained property models with a fixed drug in position A.
pub struct ModelObjective<'a> {
    models: &'a PropertyModels,
    drug: DescriptorVector,
}

impl<'a> ModelObjective<'a> {
    pub fn new(models: &'a PropertyModels, drug: &Molecule) -> Self {
        ModelObjective {
            models,
            drug: compute_descriptors(drug),
        }
    }
}

impl Objective for ModelObjective<'_> {
    fn probabilities(&self, coformer: &Molecule) -> Option<[f64; 3]> {
        let p = self
            .models
            .profile_descriptors(&self.drug, &compute_descriptors(coformer))
            .ok()?;
        Some([p.p_u, p.p_o, p.p_h])
    }
}

/// Smooth closed-form stand-in for trained models, for tests and benches.
/// p_u rises with hydrogen-bonding sites, p_o with aromatic rings and p_h
/// with logP.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyticObjective;

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl Objective for AnalyticObjective {
    fn probabilities(&self, coformer: &Molecule) -> Option<[f64; 3]> {
        let d = compute_descriptors(coformer);
        let get = |n: &str| d.get(n).unwrap_or(0.0);
        Some([
            logistic((get("hbd_count") + get("hba_count") - 4.0) / 2.0),
            logistic(get("aromatic_ring_count") - 1.0),
            logistic((get("wildman_crippen_logp") - 1.0) / 1.5),
        ])
    }
}

/// Constraint check, objective evaluation and a fitness cache keyed by
/// canonical SMILES.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    constraints: Constraints,
    cache: HashMap<String, Fitness>,
    evaluations: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Objective, constraints: Constraints) -> Self {
        Evaluator {
            objective,
            constraints,
            cache: HashMap::new(),
            evaluations: 0,
        }
    }

    pub fn constraints(&self) -> &Constraints {
        &self.constraints
    }

    /// Uncached evaluation.
    pub fn fresh(&self, m: &Molecule) -> Fitness {
        if self.constraints.check(m).is_err() {
            return Fitness::infeasible();
        }
        self.objective
            .probabilities(m)
            .map_or_else(Fitness::infeasible, Fitness::from_probabilities)
    }

    pub fn cached(&self, smiles: &str) -> Option<Fitness> {
        self.cache.get(smiles).copied()
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Evaluates a batch in parallel; results come back in input order.
    /// Each molecule is replaced by the parse of its canonical SMILES so the
    /// cached fitness does not depend on the atom order of whichever graph
    /// reached the cache first.
    pub fn evaluate(&mut self, items: Vec<(Molecule, String)>) -> Vec<Individual> {
        let items: Vec<(Molecule, String)> = items
            .into_iter()
            .map(|(m, s)| match parse_smiles(&s) {
                Ok(c) => (c, s),
                Err(_) => (m, s),
            })
            .collect();
        let mut todo: Vec<usize> = Vec::new();
        let mut queued: HashSet<&str> = HashSet::new();
        for (k, (_, s)) in items.iter().enumerate() {
            if !self.cache.contains_key(s) && queued.insert(s.as_str()) {
                todo.push(k);
            }
        }
        let fresh: Vec<Fitness> = todo.par_iter().map(|&k| self.fresh(&items[k].0)).collect();
        self.evaluations += fresh.len();
        for (&k, f) in todo.iter().zip(fresh) {
            self.cache.insert(items[k].1.clone(), f);
        }
        items
            .into_iter()
            .map(|(molecule, smiles)| Individual {
                fitness: self.cache[&smiles],
                molecule,
                smiles,
            })
            .collect()
    }
}

/// Nondominated set of every feasible individual seen so far.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Archive {
    members: Vec<Individual>,
}

impl Archive {
    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Adds `ind` unless a member weakly dominates it; evicts members it
    /// dominates. Returns whether it was added.
    pub fn insert(&mut self, ind: &Individual) -> bool {
        if !ind.fitness.feasible
            || self
                .members
                .iter()
                .any(|m| weakly_dominates(&m.fitness.f, &ind.fitness.f))
        {
            return false;
        }
        self.members
            .retain(|m| !dominates(&ind.fitness.f, &m.fitness.f));
        self.members.push(ind.clone());
        true
    }

    pub fn points(&self) -> Vec<Point> {
        self.members.iter().map(|m| m.fitness.f).collect()
    }

    pub fn hypervolume(&self) -> f64 {
        hypervolume(&self.points(), &[1.0; 3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Moead,
    Pareto,
}

impl FromStr for Scheme {
    type Err = EvolveError;

    fn from_str(s: &str) -> Result<Self, EvolveError> {
        match s.to_ascii_lowercase().as_str() {
            "moead" | "moea/d" => Ok(Scheme::Moead),
            "pareto" => Ok(Scheme::Pareto),
            other => Err(EvolveError::Config(format!("unknown scheme {other:?}"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Moead => "moead",
            Scheme::Pareto => "pareto",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    pub timeout_minutes: f64,
    pub max_heavy_atoms: usize,
    pub element_set: Vec<Element>,
    pub elitism_count: usize,
    pub scheme: Scheme,
    pub moead_neighborhood: usize,
    pub seed: u64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            population_size: 200,
            max_iterations: 200,
            timeout_minutes: 60.0,
            max_heavy_atoms: 50,
            element_set: HEAVY_ELEMENTS.to_vec(),
            elitism_count: 4,
            scheme: Scheme::Moead,
            moead_neighborhood: 20,
            seed: 0,
        }
    }
}

impl EvolutionConfig {
    pub fn check(&self) -> Result<(), EvolveError> {
        let bad = |m: &str| Err(EvolveError::Config(m.to_string()));
        if self.population_size == 0 || self.max_heavy_atoms == 0 || self.moead_neighborhood == 0 {
            return bad("population_size, max_heavy_atoms and moead_neighborhood must be positive");
        }
        if self.population_size < self.elitism_count {
            return bad("population_size must be at least elitism_count");
        }
        if !(self.timeout_minutes >= 0.0) {
            return bad("timeout_minutes must be non-negative");
        }
        if self.element_set.is_empty() || self.element_set.contains(&Element::H) {
            return bad("element_set must list heavy elements");
        }
        Ok(())
    }

    pub fn constraints(&self) -> Constraints {
        Constraints {
            max_heavy_atoms: self.max_heavy_atoms,
            elements: self.element_set.clone(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, EvolveError> {
        let c: EvolutionConfig =
            toml::from_str(text).map_err(|e| EvolveError::Config(e.to_string()))?;
        c.check()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Population summary after one iteration (iteration 0 is the start).
#[derive(Debug, Clone, PartialEq)]
pub struct IterationStats {
    pub iteration: usize,
    pub median: Point,
    pub hypervolume: f64,
    pub archive_size: usize,
    /// Mutations that fell back to the unchanged parent.
    pub noops: usize,
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => values[n / 2],
        _ => (values[n / 2 - 1] + values[n / 2]) / 2.0,
    }
}

fn population_median(pop: &[Individual]) -> Point {
    [0, 1, 2].map(|k| median(&mut pop.iter().map(|i| i.fitness.f[k]).collect::<Vec<_>>()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionReport {
    pub config: EvolutionConfig,
    pub initial: Vec<Individual>,
    pub population: Vec<Individual>,
    pub archive: Vec<Individual>,
    pub stats: Vec<IterationStats>,
    pub iterations: usize,
    pub timed_out: bool,
    /// Share of distinct final molecules absent from the training set and
    /// the initial population.
    pub novelty: f64,
    /// Distinct final molecules with SA ≤ 3, with their scores.
    pub sa_filtered: Vec<(String, f64)>,
    pub evaluations: usize,
}

fn write(dir: &Path, name: &str, text: String) -> Result<(), EvolveError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|source| EvolveError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn fitness_table(members: &[Individual]) -> String {
    let mut out = String::from("smiles\tf1\tf2\tf3\tp_u\tp_o\tp_h\n");
    for m in members {
        let [f1, f2, f3] = m.fitness.f;
        let [pu, po, ph] = m.fitness.probabilities();
        out.push_str(&format!(
            "{}\t{f1:.6}\t{f2:.6}\t{f3:.6}\t{pu:.6}\t{po:.6}\t{ph:.6}\n",
            m.smiles
        ));
    }
    out
}

impl EvolutionReport {
    pub fn final_f3(&self) -> Vec<f64> {
        self.population.iter().map(|i| i.fitness.f[2]).collect()
    }

    pub fn initial_f3(&self) -> Vec<f64> {
        self.initial.iter().map(|i| i.fitness.f[2]).collect()
    }

    pub fn stats_csv(&self) -> String {
        let mut out = String::from(
            "iteration,median_f1,median_f2,median_f3,hypervolume,archive_size,noops\n",
        );
        for s in &self.stats {
            out.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.8},{},{}\n",
                s.iteration,
                s.median[0],
                s.median[1],
                s.median[2],
                s.hypervolume,
                s.archive_size,
                s.noops
            ));
        }
        out
    }

    /// final.smi, population.tsv, archive.tsv, sa_filtered.tsv, stats.csv
    /// and manifest.toml.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<(), EvolveError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|source| EvolveError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let smi: String = self
            .population
            .iter()
            .map(|i| format!("{}\n", i.smiles))
            .collect();
        write(dir, "final.smi", smi)?;
        write(dir, "population.tsv", fitness_table(&self.population))?;
        write(dir, "archive.tsv", fitness_table(&self.archive))?;
        let mut sa = String::from("smiles\tsa\n");
        for (s, v) in &self.sa_filtered {
            sa.push_str(&format!("{s}\t{v:.4}\n"));
        }
        write(dir, "sa_filtered.tsv", sa)?;
        write(dir, "stats.csv", self.stats_csv())?;
        let manifest = format!(
            "{}\n[run]\niterations = {}\ntimed_out = {}\nevaluations = {}\nnovelty = {}\narchive_size = {}\n",
            self.config.to_toml(),
            self.iterations,
            self.timed_out,
            self.evaluations,
            self.novelty,
            self.archive.len()
        );
        write(dir, "manifest.toml", manifest)
    }
}

/// Parses and checks the initial molecules, then pads with mutated copies
/// (or truncates) to the population size.
fn initial_population(
    initial: &[String],
    config: &EvolutionConfig,
    constraints: &Constraints,
) -> Result<Vec<(Molecule, String)>, EvolveError> {
    let mut valid: Vec<(Molecule, String)> = initial
        .iter()
        .filter_map(|s| {
            let m = parse_smiles(s).ok()?;
            let canon = constraints.check(&m).ok()?;
            Some((m, canon))
        })
        .collect();
    if valid.is_empty() {
        return Err(EvolveError::NoValidInitial(initial.len()));
    }
    let seeds = valid.len();
    for k in seeds..config.population_size {
        let (base, _) = &valid[k % seeds];
        let mut rng = stream(config.seed, &[1, k as u64]);
        let m = mutate(base, constraints, &mut rng);
        valid.push((m.molecule, m.smiles));
    }
    valid.truncate(config.population_size);
    Ok(valid)
}

/// Runs one seeded evolution. `training` holds canonical SMILES that do not
/// count as novel.
pub fn run_evolution(
    initial: &[String],
    config: &EvolutionConfig,
    objective: &dyn Objective,
    training: &HashSet<String>,
) -> Result<EvolutionReport, EvolveError> {
    config.check()?;
    let start = Instant::now();
    let timeout = Duration::from_secs_f64(config.timeout_minutes * 60.0);
    let mut evaluator = Evaluator::new(objective, config.constraints());
    let first = evaluator.evaluate(initial_population(
        initial,
        config,
        evaluator.constraints(),
    )?);
    let mut archive = Archive::default();
    let mut moead = MoeadState::new(config.population_size, config.moead_neighborhood);
    for ind in &first {
        archive.insert(ind);
        if ind.fitness.feasible {
            moead.update_ideal(&ind.fitness.f);
        }
    }
    let mut stats = vec![IterationStats {
        iteration: 0,
        median: population_median(&first),
        hypervolume: archive.hypervolume(),
        archive_size: archive.len(),
        noops: 0,
    }];
    let mut pop = first.clone();
    let mut iterations = 0;
    let mut timed_out = false;
    for generation in 1..=config.max_iterations {
        if start.elapsed() >= timeout {
            timed_out = true;
            break;
        }
        let outcome = match config.scheme {
            Scheme::Moead => moead_step(
                &pop,
                &mut moead,
                &mut evaluator,
                &mut archive,
                config,
                generation,
            ),
            Scheme::Pareto => pareto_step(
                &pop,
                &mut moead,
                &mut evaluator,
                &mut archive,
                config,
                generation,
            ),
        };
        pop = outcome.population;
        iterations = generation;
        stats.push(IterationStats {
            iteration: generation,
            median: population_median(&pop),
            hypervolume: archive.hypervolume(),
            archive_size: archive.len(),
            noops: outcome.noops,
        });
        log::debug!(
            "iteration {generation}: median f = {:?}, archive {}",
            stats[generation].median,
            archive.len()
        );
    }
    log::info!(
        "{} iterations, {} evaluations in {:.1?}",
        iterations,
        evaluator.evaluations(),
        start.elapsed()
    );

    let known: HashSet<&str> = training
        .iter()
        .map(String::as_str)
        .chain(first.iter().map(|i| i.smiles.as_str()))
        .collect();
    let mut distinct: Vec<&Individual> = Vec::new();
    let mut seen = HashSet::new();
    for ind in &pop {
        if seen.insert(ind.smiles.as_str()) {
            distinct.push(ind);
        }
    }
    let novel = distinct
        .iter()
        .filter(|i| !known.contains(i.smiles.as_str()))
        .count();
    let sa_filtered = distinct
        .par_iter()
        .map(|i| (i.smiles.clone(), i.sa()))
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|(_, sa)| *sa <= SA_THRESHOLD)
        .collect();
    Ok(EvolutionReport {
        config: config.clone(),
        initial: first,
        novelty: novel as f64 / distinct.len() as f64,
        population: pop,
        archive: archive.members().to_vec(),
        stats,
        iterations,
        timed_out,
        sa_filtered,
        evaluations: evaluator.evaluations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(f: Point, s: &str) -> Individual {
        Individual {
            molecule: parse_smiles("C").unwrap(),
            smiles: s.to_string(),
            fitness: Fitness { f, feasible: true },
        }
    }

    #[test]
    fn fitness_formula() {
        let f = Fitness::from_probabilities([0.82, 0.37, 0.62]);
        for (a, b) in f.f.iter().zip([0.18, 0.63, 0.62]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(Fitness::from_probabilities([1.0, 1.0, 0.0]).f, [0.0; 3]);
        let e = Evaluator::new(&AnalyticObjective, Constraints::default());
        assert!(!e.fresh(&parse_smiles(&"C".repeat(51)).unwrap()).feasible);
        assert_eq!(
            e.fresh(&parse_smiles("CC.O").unwrap()),
            Fitness::infeasible()
        );
    }

    #[test]
    fn archive_keeps_nondominated() {
        let mut a = Archive::default();
        assert!(a.insert(&ind([0.5, 0.5, 0.5], "a")));
        assert!(!a.insert(&ind([0.5, 0.5, 0.5], "b")));
        assert!(a.insert(&ind([0.1, 0.9, 0.5], "c")));
        assert!(a.insert(&ind([0.4, 0.4, 0.4], "d")));
        let names: Vec<&str> = a.members().iter().map(|m| m.smiles.as_str()).collect();
        assert_eq!(names, ["c", "d"]);
        assert!(!a.insert(&Individual {
            fitness: Fitness::infeasible(),
            ..ind([0.0; 3], "x")
        }));
    }

    #[test]
    fn config_toml() {
        let c = EvolutionConfig::from_toml(
            "population_size = 8\nscheme = \"pareto\"\nelement_set = [\"C\", \"O\"]\n",
        )
        .unwrap();
        assert_eq!(c.population_size, 8);
        assert_eq!(c.scheme, Scheme::Pareto);
        assert_eq!(c.element_set, [Element::C, Element::O]);
        assert_eq!(EvolutionConfig::from_toml(&c.to_toml()).unwrap(), c);
        assert!(EvolutionConfig::from_toml("population_size = 2").is_err());
        assert!(EvolutionConfig::from_toml("element_set = [\"Xe\"]").is_err());
        assert!(EvolutionConfig::from_toml("populaton_size = 8").is_err());
    }

    #[test]
    fn elitism_examples() {
        let archive = vec![
            ind([0.1, 0.2, 0.3], "a1"),
            ind([0.2, 0.1, 0.3], "a2"),
            ind([0.3, 0.2, 0.1], "a3"),
            ind([0.2, 0.3, 0.1], "a4"),
        ];
        let mut pop = vec![ind([0.9; 3], "c"); 4];
        assert_eq!(apply_elitism(&mut pop, &archive, &[0.0; 3], 4), 4);
        let mut got: Vec<&str> = pop.iter().map(|i| i.smiles.as_str()).collect();
        got.sort();
        assert_eq!(got, ["a1", "a2", "a3", "a4"]);

        let mut same = archive.clone();
        same.push(ind([0.9; 3], "x"));
        let before = same.clone();
        assert_eq!(apply_elitism(&mut same, &archive, &[0.0; 3], 4), 0);
        assert_eq!(same, before);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
