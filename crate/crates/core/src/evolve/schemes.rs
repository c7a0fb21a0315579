//! One generation of each selection scheme.

use rand::Rng;

use super::elitism::apply_elitism;
use super::moead::MoeadState;
use super::mutate::mutate;
use super::pareto::{crowding_distances, nondominated_ranks, quality_order, Point};
use super::{Archive, Evaluator, EvolutionConfig, Individual};
use crate::molgraph::Molecule;
use crate::rng::stream;

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub population: Vec<Individual>,
    pub noops: usize,
    /// Members replaced by elitism.
    pub elite: usize,
}

fn points(pop: &[Individual]) -> Vec<Point> {
    pop.iter().map(|i| i.fitness.f).collect()
}

fn offspring(
    parents: &[usize],
    pop: &[Individual],
    evaluator: &mut Evaluator,
    rngs: Vec<rand_chacha::ChaCha8Rng>,
) -> (Vec<Individual>, usize) {
    let constraints = evaluator.constraints().clone();
    let mut noops = 0;
    let children: Vec<(Molecule, String)> = parents
        .iter()
        .zip(rngs)
        .map(|(&p, mut rng)| {
            let m = mutate(&pop[p].molecule, &constraints, &mut rng);
            if m.is_noop() {
                noops += 1;
            }
            (m.molecule, m.smiles)
        })
        .collect();
    (evaluator.evaluate(children), noops)
}

fn record(children: &[Individual], state: &mut MoeadState, archive: &mut Archive) {
    for c in children {
        if c.fitness.feasible {
            state.update_ideal(&c.fitness.f);
        }
        archive.insert(c);
    }
}

/// Each subproblem mutates the best solution in its neighborhood and keeps
/// the better of parent and child under its own weight.
pub fn moead_step(
    pop: &[Individual],
    state: &mut MoeadState,
    evaluator: &mut Evaluator,
    archive: &mut Archive,
    config: &EvolutionConfig,
    generation: usize,
) -> StepOutcome {
    let fit = points(pop);
    let parents: Vec<usize> = (0..pop.len())
        .map(|i| state.select_parent(i, &fit))
        .collect();
    let rngs = (0..pop.len())
        .map(|i| stream(config.seed, &[2, generation as u64, i as u64]))
        .collect();
    let (children, noops) = offspring(&parents, pop, evaluator, rngs);
    record(&children, state, archive);
    let mut next: Vec<Individual> = children
        .into_iter()
        .enumerate()
        .map(|(i, child)| {
            let parent = &pop[parents[i]];
            if state.aggregate(i, &child.fitness.f) <= state.aggregate(i, &parent.fitness.f) {
                child
            } else {
                parent.clone()
            }
        })
        .collect();
    let elite = apply_elitism(
        &mut next,
        archive.members(),
        &state.ideal,
        config.elitism_count,
    );
    StepOutcome {
        population: next,
        noops,
        elite,
    }
}

/// Binary tournament on (rank, crowding), mutation, then (μ+λ) truncation
/// by rank and crowding.
pub fn pareto_step(
    pop: &[Individual],
    state: &mut MoeadState,
    evaluator: &mut Evaluator,
    archive: &mut Archive,
    config: &EvolutionConfig,
    generation: usize,
) -> StepOutcome {
    let fit = points(pop);
    let ranks = nondominated_ranks(&fit);
    let crowd = crowding_distances(&fit, &ranks);
    let better = |a: usize, b: usize| {
        if ranks[a] != ranks[b] {
            ranks[a] < ranks[b]
        } else {
            crowd[a] >= crowd[b]
        }
    };
    let mut rngs = Vec::with_capacity(pop.len());
    let mut parents = Vec::with_capacity(pop.len());
    for i in 0..pop.len() {
        let mut rng = stream(config.seed, &[3, generation as u64, i as u64]);
        let a = rng.gen_range(0..pop.len());
        let b = rng.gen_range(0..pop.len());
        parents.push(if better(a, b) { a } else { b });
        rngs.push(rng);
    }
    let (children, noops) = offspring(&parents, pop, evaluator, rngs);
    record(&children, state, archive);
    let combined: Vec<Individual> = pop.iter().cloned().chain(children).collect();
    let mut next: Vec<Individual> = truncate(&combined, pop.len(), &state.ideal);
    let elite = apply_elitism(
        &mut next,
        archive.members(),
        &state.ideal,
        config.elitism_count,
    );
    StepOutcome {
        population: next,
        noops,
        elite,
    }
}

/// The `keep` best of `pool` by rank, then crowding, in pool order.
pub(crate) fn truncate(pool: &[Individual], keep: usize, ideal: &Point) -> Vec<Individual> {
    let mut chosen = quality_order(&points(pool), ideal);
    chosen.truncate(keep);
    chosen.sort_unstable();
    chosen.into_iter().map(|k| pool[k].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::Fitness;
    use crate::molgraph::parse_smiles;

    fn ind(f: Point, s: &str) -> Individual {
        Individual {
            molecule: parse_smiles("C").unwrap(),
            smiles: s.to_string(),
            fitness: Fitness { f, feasible: true },
        }
    }

    #[test]
    fn truncation_prefers_lower_ranks() {
        let pool = vec![
            ind([0.5, 0.5, 0.5], "dominated"),
            ind([0.1, 0.9, 0.2], "front1"),
            ind([0.4, 0.4, 0.4], "front2"),
            ind([0.9, 0.1, 0.3], "front3"),
        ];
        let kept = truncate(&pool, 3, &[0.0; 3]);
        assert!(kept.iter().all(|i| i.smiles != "dominated"));
    }
}
