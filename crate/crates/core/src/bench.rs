//! Repeated-trial statistics, algorithm comparisons and exhaustive search.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::io::fmt_sig;
use crate::objectives::{Objective, Problem};
use crate::optimizer::{Algorithm, HwsdaConfig};
use crate::parexec::{BatchBackend, Executor};

pub const DEFAULT_TRIALS: usize = 30;
pub const MIN_COMPARISON_TRIALS: usize = 10;
pub const ORACLE_MAX_DOMAINS: usize = 20;

/// What one trial reports back.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub final_fitness: f64,
    pub deff_norm: f64,
    pub best_signs: Vec<i8>,
}

/// Anything that can be run once per seed.
pub trait TrialAlgorithm: Sync {
    fn label(&self) -> String;
    fn run_trial(&self, seed: u64) -> Result<TrialOutcome>;
}

/// A problem plus optimizer settings. The seed in `config` is replaced per trial.
pub struct Scenario {
    pub problem: Problem,
    pub config: HwsdaConfig,
    pub executor: Executor,
}

/// One of the built-in algorithms bound to a scenario.
pub struct ScenarioRunner<'a> {
    pub scenario: &'a Scenario,
    pub algorithm: Algorithm,
}

impl TrialAlgorithm for ScenarioRunner<'_> {
    fn label(&self) -> String {
        self.algorithm.to_string()
    }

    fn run_trial(&self, seed: u64) -> Result<TrialOutcome> {
        let s = self.scenario;
        let config = HwsdaConfig {
            seed,
            ..s.config.clone()
        };
        let result = self.algorithm.run(&config, &s.problem, &s.executor)?;
        let signs = result.best.projection().to_vec();
        let final_fitness = s.problem.fitness(&signs).value();
        Ok(TrialOutcome {
            final_fitness,
            deff_norm: s.problem.mean_deff_norm(&signs),
            best_signs: signs,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub final_fitness: f64,
    pub time_s: f64,
    pub deff_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunStatistics {
    pub algorithm: String,
    pub average: f64,
    pub max: f64,
    pub min: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub std: f64,
    pub mean_time_s: f64,
    pub mean_deff_norm: f64,
    pub trials: Vec<TrialRecord>,
}

impl RunStatistics {
    pub fn from_records(algorithm: impl Into<String>, trials: Vec<TrialRecord>) -> Self {
        let n = trials.len() as f64;
        let finals: Vec<f64> = trials.iter().map(|t| t.final_fitness).collect();
        let average = finals.iter().sum::<f64>() / n;
        let std = if trials.len() > 1 {
            (finals.iter().map(|x| (x - average).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            algorithm: algorithm.into(),
            // clamp guards the rounding of the mean of equal values
            average: average.clamp(
                finals.iter().copied().fold(f64::INFINITY, f64::min),
                finals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ),
            max: finals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            min: finals.iter().copied().fold(f64::INFINITY, f64::min),
            std,
            mean_time_s: trials.iter().map(|t| t.time_s).sum::<f64>() / n,
            mean_deff_norm: trials.iter().map(|t| t.deff_norm).sum::<f64>() / n,
            trials,
        }
    }

    pub fn trial_count(&self) -> usize {
        self.trials.len()
    }

    pub fn aggregate_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}\n",
            self.algorithm,
            fmt_sig(self.average),
            fmt_sig(self.max),
            fmt_sig(self.min),
            fmt_sig(self.std),
            fmt_sig(self.mean_time_s),
            fmt_sig(self.mean_deff_norm),
        )
    }

    pub fn trials_csv(&self) -> String {
        let mut s = String::from(TRIALS_HEADER);
        for t in &self.trials {
            s.push_str(&format!(
                "{},{},{},{}\n",
                t.trial,
                t.seed,
                fmt_sig(t.final_fitness),
                fmt_sig(t.time_s)
            ));
        }
        s
    }
}

pub const AGGREGATE_HEADER: &str = "algorithm,average,max,min,std,mean_time_s,mean_deff_norm\n";
pub const TRIALS_HEADER: &str = "trial,seed,final_fitness,time_s\n";

fn timed(algorithm: &dyn TrialAlgorithm, trial: usize, base_seed: u64) -> Result<TrialRecord> {
    let seed = base_seed.wrapping_add(trial as u64);
    let t0 = Instant::now();
    let out = algorithm.run_trial(seed)?;
    let time_s = t0.elapsed().as_secs_f64();
    Ok(TrialRecord {
        trial,
        seed,
        final_fitness: out.final_fitness,
        time_s,
        deff_norm: out.deff_norm,
    })
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::Usage("trials must be at least 1".into()));
    }
    Ok(())
}

/// Trial `t` runs with seed `base_seed + t`.
pub fn run_trials(
    algorithm: &dyn TrialAlgorithm,
    trials: usize,
    base_seed: u64,
) -> Result<RunStatistics> {
    check_trials(trials)?;
    let records = (0..trials)
        .map(|t| timed(algorithm, t, base_seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunStatistics::from_records(algorithm.label(), records))
}

/// Like [`run_trials`] with trials spread over `executor`. Fitness columns
/// are identical to the sequential run; timings are not comparable.
pub fn run_trials_parallel(
    algorithm: &dyn TrialAlgorithm,
    trials: usize,
    base_seed: u64,
    executor: &Executor,
) -> Result<RunStatistics> {
    check_trials(trials)?;
    let indices: Vec<usize> = (0..trials).collect();
    let records = executor
        .map(&indices, |_, &t| timed(algorithm, t, base_seed))?
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(RunStatistics::from_records(algorithm.label(), records))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<RunStatistics>,
}

impl ComparisonReport {
    pub fn get(&self, algorithm: &str) -> Option<&RunStatistics> {
        self.rows.iter().find(|r| r.algorithm == algorithm)
    }

    /// mean(a) / mean(b).
    pub fn mean_ratio(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.get(a)?.average / self.get(b)?.average)
    }

    /// Every ordered pair of distinct rows with its mean ratio.
    pub fn pairwise_ratios(&self) -> Vec<(String, String, f64)> {
        let mut out = Vec::new();
        for a in &self.rows {
            for b in &self.rows {
                if a.algorithm != b.algorithm {
                    out.push((
                        a.algorithm.clone(),
                        b.algorithm.clone(),
                        a.average / b.average,
                    ));
                }
            }
        }
        out
    }

    pub fn aggregate_csv(&self) -> String {
        let mut s = String::from(AGGREGATE_HEADER);
        for r in &self.rows {
            s.push_str(&r.aggregate_row());
        }
        s
    }

    pub fn ratios_csv(&self) -> String {
        let mut s = String::from("numerator,denominator,mean_ratio\n");
        for (a, b, r) in self.pairwise_ratios() {
            s.push_str(&format!("{a},{b},{}\n", fmt_sig(r)));
        }
        s
    }

    /// Writes `aggregate.csv`, `ratios.csv` and `trials_<ALG>.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut paths = vec![dir.join("aggregate.csv"), dir.join("ratios.csv")];
        crate::io::write_file(&paths[0], self.aggregate_csv())?;
        crate::io::write_file(&paths[1], self.ratios_csv())?;
        for r in &self.rows {
            let p = dir.join(format!("trials_{}.csv", r.algorithm));
            crate::io::write_file(&p, r.trials_csv())?;
            paths.push(p);
        }
        Ok(paths)
    }
}

/// Runs each algorithm over the same seeds.
pub fn compare(
    algorithms: &[&dyn TrialAlgorithm],
    trials: usize,
    base_seed: u64,
) -> Result<ComparisonReport> {
    if trials < MIN_COMPARISON_TRIALS {
        return Err(Error::Usage(format!(
            "comparisons need at least {MIN_COMPARISON_TRIALS} trials, got {trials}"
        )));
    }
    let rows = algorithms
        .iter()
        .map(|a| run_trials(*a, trials, base_seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport { rows })
}

/// HWSDA, DE-only and GWO-only on one scenario.
pub fn compare_algorithms(
    scenario: &Scenario,
    trials: usize,
    base_seed: u64,
) -> Result<ComparisonReport> {
    let runners: Vec<ScenarioRunner<'_>> = Algorithm::ALL
        .iter()
        .map(|&algorithm| ScenarioRunner {
            scenario,
            algorithm,
        })
        .collect();
    let refs: Vec<&dyn TrialAlgorithm> = runners.iter().map(|r| r as _).collect();
    compare(&refs, trials, base_seed)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub signs: Vec<i8>,
    pub fitness: f64,
    pub evaluated: u64,
}

/// The `index`-th pattern in enumeration order: bit `n-1-j` of `index`
/// clear means domain `j` is +1, so the all-up pattern comes first.
pub fn enumerated_pattern(index: u64, n: usize) -> Vec<i8> {
    (0..n)
        .map(|j| if index >> (n - 1 - j) & 1 == 0 { 1 } else { -1 })
        .collect()
}

/// Exhaustive maximum over all 2^N patterns. Ties keep the earliest pattern
/// in enumeration order.
pub fn brute_force_oracle<O>(objective: &O, backend: &impl BatchBackend) -> Result<OracleResult>
where
    O: Objective + ?Sized,
{
    let n = objective.dimension();
    if n > ORACLE_MAX_DOMAINS {
        return Err(Error::OracleTooLarge {
            n,
            patterns: 1u128 << n.min(127),
        });
    }
    let total = 1u64 << n;
    // blocks of 2^k patterns, each reduced to its first-best
    let block_bits = n.min(10);
    let blocks: Vec<u64> = (0..total >> block_bits).collect();
    let best = backend.map(&blocks, |_, &b| {
        let start = b << block_bits;
        let mut best = (f64::NEG_INFINITY, start);
        for idx in start..start + (1u64 << block_bits) {
            let f = objective.fitness(&enumerated_pattern(idx, n)).value();
            if f > best.0 {
                best = (f, idx);
            }
        }
        best
    })?;
    let (fitness, index) =
        best.into_iter().fold(
            (f64::NEG_INFINITY, 0),
            |acc, x| if x.0 > acc.0 { x } else { acc },
        );
    Ok(OracleResult {
        signs: enumerated_pattern(index, n),
        fitness,
        evaluated: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::FitnessValue;

    struct Constant(f64);

    impl TrialAlgorithm for Constant {
        fn label(&self) -> String {
            format!("C{}", self.0)
        }

        fn run_trial(&self, _seed: u64) -> Result<TrialOutcome> {
            Ok(TrialOutcome {
                final_fitness: self.0,
                deff_norm: 0.5,
                best_signs: vec![1],
            })
        }
    }

    struct SeedEcho;

    impl TrialAlgorithm for SeedEcho {
        fn label(&self) -> String {
            "echo".into()
        }

        fn run_trial(&self, seed: u64) -> Result<TrialOutcome> {
            Ok(TrialOutcome {
                final_fitness: seed as f64,
                deff_norm: 0.0,
                best_signs: vec![],
            })
        }
    }

    #[test]
    fn constant_stub_statistics() {
        let s = run_trials(&Constant(5.0), DEFAULT_TRIALS, 0).unwrap();
        assert_eq!(s.trial_count(), 30);
        assert_eq!((s.average, s.max, s.min, s.std), (5.0, 5.0, 5.0, 0.0));
        assert_eq!(s.mean_deff_norm, 0.5);
    }

    #[test]
    fn seeds_follow_base() {
        let s = run_trials(&SeedEcho, 4, 100).unwrap();
        let seeds: Vec<u64> = s.trials.iter().map(|t| t.seed).collect();
        assert_eq!(seeds, vec![100, 101, 102, 103]);
        assert_eq!(s.average, 101.5);
        assert_eq!((s.min, s.max), (100.0, 103.0));
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let p = run_trials_parallel(&SeedEcho, 4, 100, &Executor::new(3)).unwrap();
        assert_eq!(
            p.trials.iter().map(|t| t.final_fitness).collect::<Vec<_>>(),
            vec![100.0, 101.0, 102.0, 103.0]
        );
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_trials(&Constant(1.0), 0, 0).is_err());
    }

    #[test]
    fn stub_ratios_exact() {
        let (a, b) = (Constant(6.0), Constant(1.5));
        let r = compare(&[&a, &b], 10, 0).unwrap();
        assert_eq!(r.mean_ratio("C6", "C1.5"), Some(4.0));
        assert_eq!(r.mean_ratio("C1.5", "C6"), Some(0.25));
        assert_eq!(r.pairwise_ratios().len(), 2);
        assert!(compare(&[&a, &b], 9, 0).is_err());
        assert!(r.aggregate_csv().starts_with(AGGREGATE_HEADER));
        assert!(r.aggregate_csv().contains("\nC6,6,6,6,0,"));
    }

    struct Table(Vec<f64>);

    impl Objective for Table {
        fn dimension(&self) -> usize {
            self.0.len().trailing_zeros() as usize
        }

        fn fitness(&self, signs: &[i8]) -> FitnessValue {
            let idx = signs
                .iter()
                .fold(0usize, |acc, &s| acc << 1 | usize::from(s < 0));
            FitnessValue(self.0[idx])
        }
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(enumerated_pattern(0, 3), vec![1, 1, 1]);
        assert_eq!(enumerated_pattern(1, 3), vec![1, 1, -1]);
        assert_eq!(enumerated_pattern(6, 3), vec![-1, -1, 1]);
    }

    #[test]
    fn oracle_ties_pick_first() {
        let t = Table(vec![0.0, 3.0, 1.0, 3.0]);
        let r = brute_force_oracle(&t, &Executor::new(2)).unwrap();
        assert_eq!((r.signs, r.fitness, r.evaluated), (vec![1, -1], 3.0, 4));
        let mut values = vec![0.0; 1 << 12];
        values[3000] = 1.0;
        values[4000] = 1.0;
        let r = brute_force_oracle(&Table(values), &Executor::new(4)).unwrap();
        assert_eq!(r.signs, enumerated_pattern(3000, 12));
    }

    #[test]
    fn oracle_refuses_large() {
        struct Big;
        impl Objective for Big {
            fn dimension(&self) -> usize {
                21
            }
            fn fitness(&self, _: &[i8]) -> FitnessValue {
                FitnessValue(0.0)
            }
        }
        let err = brute_force_oracle(&Big, &Executor::sequential()).unwrap_err();
        assert!(matches!(
            err,
            Error::OracleTooLarge {
                n: 21,
                patterns: 2097152
            }
        ));
    }
}
