//! Generation loops.
//!
//! Each generation is a sequence of barrier phases. Inside a phase every
//! individual is updated from a read-only snapshot with its own keyed random
//! stream, so results do not depend on how the backend schedules work.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::parexec::BatchBackend;
use crate::rng::{Phase, Stream};

use super::adaptive::{adaptive_f_update, AdaptiveState};
use super::de::{de_crossover, de_mutate, de_select};
use super::gwo::{gwo_discrete_update, gwo_reference_update};
use super::params::HwsdaConfig;
use super::population::{init_population, Individual, Population};

/// One row of the convergence trace. For the reference GWO the `f` column
/// holds its coefficient `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub f: f64,
    pub pop_std: f64,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub best: Individual,
    /// `generations + 1` rows; row 0 describes the initial population.
    pub trace: Vec<TraceRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Hwsda,
    De,
    Gwo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Hwsda, Algorithm::De, Algorithm::Gwo];

    pub fn run<O, B>(self, config: &HwsdaConfig, objective: &O, backend: &B) -> Result<RunResult>
    where
        O: Objective + ?Sized,
        B: BatchBackend,
    {
        match self {
            Algorithm::Hwsda => run_hwsda(config, objective, backend),
            Algorithm::De => run_de(config, objective, backend),
            Algorithm::Gwo => run_gwo_reference(config, objective, backend),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Hwsda => "HWSDA",
            Algorithm::De => "DE",
            Algorithm::Gwo => "GWO",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hwsda" => Ok(Algorithm::Hwsda),
            "de" => Ok(Algorithm::De),
            "gwo" => Ok(Algorithm::Gwo),
            other => Err(Error::Usage(format!(
                "unknown algorithm `{other}` (hwsda|de|gwo)"
            ))),
        }
    }
}

struct Stats {
    best: f64,
    best_index: usize,
    mean: f64,
    std: f64,
    range: f64,
}

fn stats(values: &[f64]) -> Stats {
    let n = values.len() as f64;
    let mut best_index = 0;
    let mut min = f64::INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best_index] {
            best_index = i;
        }
        min = min.min(v);
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Stats {
        best: values[best_index],
        best_index,
        mean,
        std: var.sqrt(),
        range: values[best_index] - min,
    }
}

fn check_dimension<O: Objective + ?Sized>(objective: &O) -> Result<usize> {
    match objective.dimension() {
        0 => Err(Error::Config("objective has dimension 0".into())),
        d => Ok(d),
    }
}

fn initial_population<O, B>(config: &HwsdaConfig, objective: &O, backend: &B) -> Result<Population>
where
    O: Objective + ?Sized,
    B: BatchBackend,
{
    config.validate()?;
    let d = check_dimension(objective)?;
    let mut pop = init_population(
        config.np,
        d,
        (config.de.init_min, config.de.init_max),
        config.seed,
    )?;
    pop.individuals = backend.map(&pop.individuals, |_, ind| ind.clone().evaluated(objective))?;
    Ok(pop)
}

/// DE step for every individual: rand/1 mutation, binomial crossover,
/// evaluation and greedy selection.
fn de_generation<O, B>(
    pop: &Population,
    f: f64,
    cr: f64,
    objective: &O,
    backend: &B,
) -> Result<Vec<Individual>>
where
    O: Objective + ?Sized,
    B: BatchBackend,
{
    let g = pop.generation;
    let seed = pop.seed;
    let snapshot = &pop.individuals;
    backend
        .map(snapshot, |i, target| {
            let mutant = de_mutate(snapshot, i, f, &Stream::new(seed, Phase::DeIndices, g, i));
            let trial = de_crossover(
                target.genome(),
                &mutant.genome,
                cr,
                &Stream::new(seed, Phase::DeCrossover, g, i),
            );
            let trial = Individual::new(trial).evaluated(objective);
            de_select(target.clone(), trial)
        })?
        .into_iter()
        .collect()
}

/// Tracks the quantities behind [`AdaptiveState`] across generations.
struct Feedback {
    initial_std: f64,
    improved: Vec<bool>,
    window: usize,
    last_best: f64,
}

impl Feedback {
    fn new(initial: &Stats, window: usize) -> Self {
        Self {
            initial_std: initial.std,
            improved: Vec::new(),
            window,
            last_best: initial.best,
        }
    }

    fn observe(&mut self, s: &Stats, g: usize, total: usize) -> AdaptiveState {
        self.improved.push(s.best > self.last_best);
        self.last_best = s.best;
        let recent = &self.improved[self.improved.len().saturating_sub(self.window)..];
        let rate = recent.iter().filter(|&&b| b).count() as f64 / recent.len() as f64;
        AdaptiveState {
            pop_std: s.std,
            fit_range: s.range,
            convergence_rate: rate,
            initial_std: self.initial_std,
            generation: g,
            total_generations: total,
        }
    }
}

fn row(g: usize, s: &Stats, f: f64) -> TraceRow {
    TraceRow {
        generation: g,
        best: s.best,
        mean: s.mean,
        f,
        pop_std: s.std,
    }
}

fn de_family<O, B>(
    config: &HwsdaConfig,
    objective: &O,
    backend: &B,
    with_gwo: bool,
) -> Result<RunResult>
where
    O: Objective + ?Sized,
    B: BatchBackend,
{
    let mut pop = initial_population(config, objective, backend)?;
    let total = config.generations;
    let s0 = stats(&pop.fitness_values());
    let mut feedback = Feedback::new(&s0, config.adaptive.convergence_window);
    let mut f = config.de.f;
    let mut trace = Vec::with_capacity(total + 1);
    trace.push(row(0, &s0, f));
    let k = config.gwo.leader_count;

    for g in 1..=total {
        pop.generation = g;
        pop.individuals = de_generation(&pop, f, config.de.cr, objective, backend)?;

        if with_gwo {
            let fitness = pop.fitness_values();
            let leaders = backend.top_k(&fitness, k);
            let leader_states: Vec<&[i8]> = leaders
                .iter()
                .map(|&l| pop.individuals[l].projection())
                .collect();
            let rates = config.gwo.rates(g, total);
            let seed = config.seed;
            let updated = backend.map(&pop.individuals, |i, wolf| {
                if leaders.contains(&i) {
                    return None;
                }
                let stream = Stream::new(seed, Phase::GwoDiscrete, g, i);
                let genome =
                    gwo_discrete_update(wolf.projection(), &leader_states, &rates, &stream);
                Some(Individual::new(genome).evaluated(objective))
            })?;
            for (slot, candidate) in pop.individuals.iter_mut().zip(updated) {
                if let Some(candidate) = candidate {
                    if candidate.fitness_value() > slot.fitness_value() {
                        *slot = candidate;
                    }
                }
            }
        }

        let s = stats(&pop.fitness_values());
        let state = feedback.observe(&s, g, total);
        f = adaptive_f_update(&state, &config.de, &config.adaptive);
        trace.push(row(g, &s, f));
    }

    let best = stats(&pop.fitness_values()).best_index;
    Ok(RunResult {
        best: pop.individuals.swap_remove(best),
        trace,
    })
}

/// Hybrid loop: DE step, leader reduction, discrete grey-wolf update of the
/// non-leaders, greedy re-selection, parameter update.
pub fn run_hwsda<O, B>(config: &HwsdaConfig, objective: &O, backend: &B) -> Result<RunResult>
where
    O: Objective + ?Sized,
    B: BatchBackend,
{
    de_family(config, objective, backend, true)
}

/// The DE part of [`run_hwsda`] alone, with the same adaptive schedule.
pub fn run_de<O, B>(config: &HwsdaConfig, objective: &O, backend: &B) -> Result<RunResult>
where
    O: Objective + ?Sized,
    B: BatchBackend,
{
    de_family(config, objective, backend, false)
}

/// Classic continuous grey-wolf optimizer with three leaders, `a` decaying
/// linearly from `config.gwo.a` to `config.gwo.a_end`, and sign projection
/// for evaluation.
/// Leaders are the best three positions seen so far.
pub fn run_gwo_reference<O, B>(
    config: &HwsdaConfig,
    objective: &O,
    backend: &B,
) -> Result<RunResult>
where
    O: Objective + ?Sized,
    B: BatchBackend,
{
    const LEADERS: usize = 3;
    let mut pop = initial_population(config, objective, backend)?;
    let total = config.generations;
    let a0 = config.gwo.a_at(0, total);

    let mut archive: Vec<Individual> = Vec::with_capacity(LEADERS);
    let merge = |archive: &mut Vec<Individual>, pop: &Population| {
        let fitness = pop.fitness_values();
        let top = backend.top_k(&fitness, LEADERS);
        let mut pool: Vec<Individual> = std::mem::take(archive);
        pool.extend(top.iter().map(|&i| pop.individuals[i].clone()));
        let values: Vec<f64> = pool.iter().map(Individual::fitness_value).collect();
        let keep = crate::parexec::reduce_best(&values, LEADERS, 1);
        *archive = keep.into_iter().map(|i| pool[i].clone()).collect();
    };

    merge(&mut archive, &pop);
    let s0 = stats(&pop.fitness_values());
    let mut trace = Vec::with_capacity(total + 1);
    trace.push(TraceRow {
        best: archive[0].fitness_value(),
        ..row(0, &s0, a0)
    });

    for g in 1..=total {
        pop.generation = g;
        let a = config.gwo.a_at(g, total);
        let leaders: Vec<&[f64]> = archive.iter().map(Individual::genome).collect();
        let seed = config.seed;
        let literal = config.gwo.divide_by_leader_count;
        pop.individuals = backend.map(&pop.individuals, |i, wolf| {
            let stream = Stream::new(seed, Phase::GwoReference, g, i);
            Individual::new(gwo_reference_update(
                wolf.genome(),
                &leaders,
                a,
                literal,
                &stream,
            ))
            .evaluated(objective)
        })?;
        merge(&mut archive, &pop);
        let s = stats(&pop.fitness_values());
        trace.push(TraceRow {
            best: archive[0].fitness_value(),
            ..row(g, &s, a)
        });
    }

    Ok(RunResult {
        best: archive.swap_remove(0),
        trace,
    })
}
