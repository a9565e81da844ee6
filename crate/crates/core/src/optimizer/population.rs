use crate::error::{Error, Result};
use crate::objectives::{FitnessValue, Objective};
use crate::rng::{Phase, Stream};

/// A continuous genome, its ±1 projection and a cached fitness.
///
/// The genome is the single source of truth: `projection[j]` is `+1` iff
/// `genome[j] >= 0`, and any genome change drops the cached fitness.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    genome: Vec<f64>,
    projection: Vec<i8>,
    fitness: Option<FitnessValue>,
}

#[inline]
fn project(x: f64) -> i8 {
    if x >= 0.0 {
        1
    } else {
        -1
    }
}

impl Individual {
    pub fn new(genome: Vec<f64>) -> Self {
        let projection = genome.iter().map(|&x| project(x)).collect();
        Self {
            genome,
            projection,
            fitness: None,
        }
    }

    /// Genome set to the orientations themselves.
    pub fn from_signs(signs: &[i8]) -> Self {
        Self::new(signs.iter().map(|&s| f64::from(s)).collect())
    }

    pub fn genome(&self) -> &[f64] {
        &self.genome
    }

    pub fn projection(&self) -> &[i8] {
        &self.projection
    }

    pub fn fitness(&self) -> Option<FitnessValue> {
        self.fitness
    }

    pub fn set_genome(&mut self, genome: Vec<f64>) {
        self.projection = genome.iter().map(|&x| project(x)).collect();
        self.genome = genome;
        self.fitness = None;
    }

    pub fn set_fitness(&mut self, fitness: FitnessValue) {
        self.fitness = Some(fitness);
    }

    pub fn evaluate<O: Objective + ?Sized>(&mut self, objective: &O) -> FitnessValue {
        let f = objective.fitness(&self.projection);
        self.fitness = Some(f);
        f
    }

    pub fn evaluated<O: Objective + ?Sized>(mut self, objective: &O) -> Self {
        self.evaluate(objective);
        self
    }

    pub(crate) fn fitness_value(&self) -> f64 {
        self.fitness.map_or(f64::NEG_INFINITY, FitnessValue::value)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub individuals: Vec<Individual>,
    pub generation: usize,
    pub seed: u64,
}

impl Population {
    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    /// Fitness values in index order; unevaluated individuals read as −∞.
    pub fn fitness_values(&self) -> Vec<f64> {
        self.individuals
            .iter()
            .map(Individual::fitness_value)
            .collect()
    }
}

/// Uniform genomes in `[min, max]`; value `(i, j)` comes from the stream keyed
/// by `(seed, 0, i, j)`.
pub fn init_population(np: usize, d: usize, bounds: (f64, f64), seed: u64) -> Result<Population> {
    if np < 4 {
        return Err(Error::Config(format!(
            "np={np} but at least 4 are required"
        )));
    }
    if d == 0 {
        return Err(Error::Config("dimension must be >= 1".into()));
    }
    let (lo, hi) = bounds;
    let individuals = (0..np)
        .map(|i| {
            let stream = Stream::new(seed, Phase::Init, 0, i);
            Individual::new(
                (0..d)
                    .map(|j| lo + (hi - lo) * stream.uniform(j as u32))
                    .collect(),
            )
        })
        .collect();
    Ok(Population {
        individuals,
        generation: 0,
        seed,
    })
}
