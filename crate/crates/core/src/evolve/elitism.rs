//! Reinjection of archive members into a new generation.

use std::collections::HashSet;

use super::pareto::{dominates, quality_order, Point};
use super::Individual;

/// Replaces up to `count` of the worst population members with the best
/// archive members not already present. A member is only replaced by an
/// archive point that dominates it, so the population front never loses
/// ground. Returns the number of replacements.
pub fn apply_elitism(
    pop: &mut [Individual],
    archive: &[Individual],
    ideal: &Point,
    count: usize,
) -> usize {
    let present: HashSet<&str> = pop.iter().map(|i| i.smiles.as_str()).collect();
    let archive_points: Vec<Point> = archive.iter().map(|i| i.fitness.f).collect();
    let candidates: Vec<usize> = quality_order(&archive_points, ideal)
        .into_iter()
        .filter(|&a| !present.contains(archive[a].smiles.as_str()))
        .collect();
    let pop_points: Vec<Point> = pop.iter().map(|i| i.fitness.f).collect();
    let mut worst = quality_order(&pop_points, ideal);
    worst.reverse();
    let mut taken = vec![false; pop.len()];
    let mut replaced = 0;
    for a in candidates {
        if replaced == count {
            break;
        }
        let target = worst
            .iter()
            .copied()
            .find(|&p| !taken[p] && dominates(&archive[a].fitness.f, &pop_points[p]));
        if let Some(p) = target {
            taken[p] = true;
            pop[p] = archive[a].clone();
            replaced += 1;
        }
    }
    replaced
}
