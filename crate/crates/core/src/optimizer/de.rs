use crate::error::{Error, Result};
use crate::rng::Stream;

use super::population::Individual;

/// A rand/1 mutant and the donors it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct Mutant {
    pub genome: Vec<f64>,
    pub donors: [usize; 3],
}

/// Three indices, pairwise distinct and all different from `i`, by rejection
/// over consecutive lanes of `stream`.
pub fn pick_donors(i: usize, np: usize, stream: &Stream) -> [usize; 3] {
    debug_assert!(np >= 4);
    let mut cursor = stream.cursor(0);
    let mut picked = [usize::MAX; 3];
    for k in 0..3 {
        loop {
            let r = cursor.next_index(np);
            if r != i && !picked[..k].contains(&r) {
                picked[k] = r;
                break;
            }
        }
    }
    picked
}

/// `v = x_r1 + F·(x_r2 − x_r3)`, unclamped.
pub fn de_mutate(population: &[Individual], i: usize, f: f64, stream: &Stream) -> Mutant {
    let donors = pick_donors(i, population.len(), stream);
    let [a, b, c] = donors.map(|r| population[r].genome());
    let genome = a
        .iter()
        .zip(b)
        .zip(c)
        .map(|((&xa, &xb), &xc)| xa + f * (xb - xc))
        .collect();
    Mutant { genome, donors }
}

/// Binomial crossover. Lane 0 of `stream` picks the forced dimension; lane
/// `1 + j` decides dimension `j`, taking the mutant gene when the draw is
/// below `cr`.
pub fn de_crossover(target: &[f64], mutant: &[f64], cr: f64, stream: &Stream) -> Vec<f64> {
    assert_eq!(target.len(), mutant.len(), "crossover of unequal genomes");
    let d = target.len();
    let j_rand = stream.index(0, d);
    (0..d)
        .map(|j| {
            if j == j_rand || stream.uniform(1 + j as u32) < cr {
                mutant[j]
            } else {
                target[j]
            }
        })
        .collect()
}

/// Greedy selection; the trial replaces the target only if strictly better.
pub fn de_select(target: Individual, trial: Individual) -> Result<Individual> {
    let (Some(ft), Some(fu)) = (target.fitness(), trial.fitness()) else {
        return Err(Error::Usage(
            "selection between unevaluated individuals".into(),
        ));
    };
    Ok(if fu > ft { trial } else { target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::FitnessValue;
    use crate::rng::Phase;

    fn pop(genomes: &[&[f64]]) -> Vec<Individual> {
        genomes
            .iter()
            .map(|g| Individual::new(g.to_vec()))
            .collect()
    }

    #[test]
    fn donors_are_distinct() {
        for i in 0..4 {
            for g in 0..200 {
                let s = Stream::new(3, Phase::DeIndices, g, i);
                let d = pick_donors(i, 4, &s);
                assert!(!d.contains(&i));
                assert!(d[0] != d[1] && d[1] != d[2] && d[0] != d[2]);
            }
        }
    }

    #[test]
    fn zero_factor_copies_first_donor() {
        let p = pop(&[
            &[0.1, 0.2],
            &[0.3, -0.4],
            &[0.5, 0.6],
            &[-0.7, 0.8],
            &[0.9, 1.0],
        ]);
        let s = Stream::new(0, Phase::DeIndices, 1, 0);
        let m = de_mutate(&p, 0, 0.0, &s);
        assert_eq!(m.genome, p[m.donors[0]].genome());
    }

    #[test]
    fn hand_arithmetic() {
        // with only four individuals and i = 3 the donors are a permutation
        // of {0, 1, 2}; place values so the expected result is known
        let s = Stream::new(11, Phase::DeIndices, 0, 3);
        let donors = pick_donors(3, 4, &s);
        let mut genomes = vec![vec![0.0]; 4];
        genomes[donors[0]] = vec![0.2];
        genomes[donors[1]] = vec![0.5];
        genomes[donors[2]] = vec![0.1];
        let p: Vec<_> = genomes.into_iter().map(Individual::new).collect();
        let m = de_mutate(&p, 3, 0.1, &s);
        assert!((m.genome[0] - 0.24).abs() < 1e-15);
    }

    #[test]
    fn equal_difference_donors_cancel() {
        let p = pop(&[&[0.3], &[0.3], &[0.3], &[0.3]]);
        for f in [0.01, 0.5, 2.0] {
            let m = de_mutate(&p, 0, f, &Stream::new(1, Phase::DeIndices, 0, 0));
            assert_eq!(m.genome, vec![0.3]);
        }
    }

    #[test]
    fn crossover_extremes() {
        let target = vec![0.0; 16];
        let mutant: Vec<f64> = (1..=16).map(f64::from).collect();
        let s = Stream::new(2, Phase::DeCrossover, 4, 1);
        assert_eq!(de_crossover(&target, &mutant, 1.0, &s), mutant);
        let t = de_crossover(&target, &mutant, 0.0, &s);
        assert_eq!(t.iter().filter(|&&x| x != 0.0).count(), 1);
    }

    #[test]
    fn crossover_replay() {
        let target = vec![-1.0; 10];
        let mutant = vec![1.0; 10];
        let s = Stream::new(77, Phase::DeCrossover, 2, 5);
        let trial = de_crossover(&target, &mutant, 0.5, &s);
        // replay the documented lane layout with the raw generator
        let raw = |lane: u32| {
            let r = crate::rng::philox4x32_10([lane, 5, 2, Phase::DeCrossover as u32], [77, 0]);
            (u64::from(r[0]) << 32) | u64::from(r[1])
        };
        let j_rand = ((u128::from(raw(0)) * 10) >> 64) as usize;
        for j in 0..10 {
            let u = (raw(1 + j as u32) >> 11) as f64 / (1u64 << 53) as f64;
            let want = if j == j_rand || u < 0.5 { 1.0 } else { -1.0 };
            assert_eq!(trial[j], want, "dimension {j}");
        }
    }

    fn with_fitness(v: f64) -> Individual {
        let mut i = Individual::new(vec![v]);
        i.set_fitness(FitnessValue(v));
        i
    }

    #[test]
    fn selection_rules() {
        assert_eq!(
            de_select(with_fitness(1.0), with_fitness(2.0))
                .unwrap()
                .genome(),
            &[2.0]
        );
        assert_eq!(
            de_select(with_fitness(2.0), with_fitness(1.0))
                .unwrap()
                .genome(),
            &[2.0]
        );
        let mut tie = Individual::new(vec![9.0]);
        tie.set_fitness(FitnessValue(1.0));
        assert_eq!(de_select(with_fitness(1.0), tie).unwrap().genome(), &[1.0]);
        assert!(de_select(Individual::new(vec![0.0]), with_fitness(1.0)).is_err());
    }
}
