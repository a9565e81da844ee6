//! Command-line front end: `design`, `sweep`, `bench`, `oracle`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{
    brute_force_oracle, run_trials, run_trials_parallel, ComparisonReport, Scenario,
    ScenarioRunner, DEFAULT_TRIALS, MIN_COMPARISON_TRIALS,
};
use crate::error::{Error, Result};
use crate::io::{
    convergence_csv, export_grayscale, export_pattern, import_pattern, load_config, spectrum_csv,
    RunConfig,
};
use crate::objectives::Objective;
use crate::optimizer::{run_hwsda, Algorithm};
use crate::parexec::Executor;
use crate::physics::{sweep_spectrum, DispersionModel, DomainPattern, Process};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qpm",
    version,
    about = "Domain-pattern design for poled nonlinear crystals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize a pattern and write pattern.txt, pattern.pgm, convergence.csv, resolved.cfg.
    Design(DesignArgs),
    /// Write |d_eff| against pump wavelength for a stored pattern.
    Sweep(SweepArgs),
    /// Repeat runs over consecutive seeds and write aggregate and per-trial CSVs.
    Bench(BenchArgs),
    /// Exhaustive search over every pattern (at most 20 domains).
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct Overrides {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// 0 uses every core.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long)]
    pub np: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
}

impl Overrides {
    fn resolve(&self) -> Result<RunConfig> {
        let mut c = load_config(&self.config)?;
        if let Some(s) = self.seed {
            c.optimizer.seed = s;
        }
        if let Some(w) = self.workers {
            c.workers = w;
        }
        if let Some(d) = &self.output_dir {
            c.output_dir = d.clone();
        }
        if let Some(np) = self.np {
            c.optimizer.np = np;
        }
        if let Some(g) = self.generations {
            c.optimizer.generations = g;
        }
        c.optimizer.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub common: Overrides,
    #[arg(long, default_value_t = 16)]
    pub pgm_row_height: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub pattern: PathBuf,
    /// Takes process, temperature and Sellmeier terms from this file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, conflicts_with = "config")]
    pub process: Option<Process>,
    #[arg(long, default_value_t = 25.0, conflicts_with = "config")]
    pub temperature_c: f64,
    /// Explicit list; otherwise --start-nm/--stop-nm/--points.
    #[arg(long, value_delimiter = ',')]
    pub wavelengths_nm: Vec<f64>,
    #[arg(long)]
    pub start_nm: Option<f64>,
    #[arg(long)]
    pub stop_nm: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[arg(long, default_value = "spectrum.csv")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Overrides,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Defaults to the configured seed.
    #[arg(long)]
    pub base_seed: Option<u64>,
    #[arg(long, value_delimiter = ',', default_value = "hwsda,de,gwo")]
    pub algorithms: Vec<Algorithm>,
    /// Run trials concurrently, each with a single-threaded optimizer.
    #[arg(long)]
    pub parallel_trials: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Domain count; the crystal length becomes n times the domain thickness.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

/// Parse `argv` (program name first), run, and return the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(summary) => {
            print!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

/// Runs one subcommand and returns the text meant for stdout.
pub fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Design(a) => design(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Bench(a) => bench(&a),
        Command::Oracle(a) => oracle(&a),
    }
}

fn design(args: &DesignArgs) -> Result<String> {
    let config = args.common.resolve()?;
    let problem = config.problem()?;
    let executor = Executor::new(config.workers);
    let result = run_hwsda(&config.optimizer, &problem, &executor)?;
    let signs = result.best.projection();
    let pattern = DomainPattern::new(config.domain_thickness_um, signs.to_vec())?;

    let dir = &config.output_dir;
    export_pattern(&pattern, &dir.join("pattern.txt"))?;
    export_grayscale(&pattern, &dir.join("pattern.pgm"), args.pgm_row_height)?;
    crate::io::write_file(&dir.join("convergence.csv"), convergence_csv(&result.trace))?;
    config.write_resolved(dir)?;

    let g = problem.g_values(signs);
    Ok(format!(
        "fitness = {}\ng = {}\nmean_deff_norm = {}\noutput_dir = {}\n",
        problem.fitness(signs).value(),
        g.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        problem.mean_deff_norm(signs),
        dir.display()
    ))
}

fn sweep_grid(args: &SweepArgs) -> Result<Vec<f64>> {
    if !args.wavelengths_nm.is_empty() {
        return Ok(args.wavelengths_nm.clone());
    }
    let (Some(a), Some(b)) = (args.start_nm, args.stop_nm) else {
        return Err(Error::Usage(
            "give --wavelengths-nm or both --start-nm and --stop-nm".into(),
        ));
    };
    Ok(match args.points {
        0 => return Err(Error::Usage("--points must be at least 1".into())),
        1 => vec![a],
        n => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    })
}

fn sweep(args: &SweepArgs) -> Result<String> {
    let pattern = import_pattern(&args.pattern)?;
    let (model, process) = match &args.config {
        Some(path) => {
            let c = load_config(path)?;
            (c.dispersion_model()?, c.process.process())
        }
        None => (
            DispersionModel::congruent_ln(args.temperature_c),
            args.process
                .ok_or_else(|| Error::Usage("--process or --config is required".into()))?,
        ),
    };
    let points = sweep_spectrum(&pattern, &model, &sweep_grid(args)?, process)?;
    crate::io::write_file(&args.output, spectrum_csv(&points))?;
    let peak = points.iter().fold(
        None::<&crate::physics::SpectrumPoint>,
        |best, p| match best {
            Some(b) if b.deff_abs >= p.deff_abs => Some(b),
            _ => Some(p),
        },
    );
    Ok(match peak {
        Some(p) => format!(
            "points = {}\npeak_wavelength_nm = {}\npeak_deff_norm = {}\n",
            points.len(),
            p.wavelength_nm,
            p.deff_norm
        ),
        None => String::new(),
    })
}

fn bench(args: &BenchArgs) -> Result<String> {
    let config = args.common.resolve()?;
    let base_seed = args.base_seed.unwrap_or(config.optimizer.seed);
    let trial_exec = Executor::new(config.workers);
    let scenario = Scenario {
        problem: config.problem()?,
        config: config.optimizer.clone(),
        executor: if args.parallel_trials {
            Executor::sequential()
        } else {
            trial_exec
        },
    };
    if args.algorithms.len() > 1 && args.trials < MIN_COMPARISON_TRIALS {
        return Err(Error::Usage(format!(
            "comparing algorithms needs --trials >= {MIN_COMPARISON_TRIALS}"
        )));
    }
    let rows = args
        .algorithms
        .iter()
        .map(|&algorithm| {
            let runner = ScenarioRunner {
                scenario: &scenario,
                algorithm,
            };
            if args.parallel_trials {
                run_trials_parallel(&runner, args.trials, base_seed, &trial_exec)
            } else {
                run_trials(&runner, args.trials, base_seed)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let report = ComparisonReport { rows };
    report.write(&config.output_dir)?;
    config.write_resolved(&config.output_dir)?;
    Ok(report.aggregate_csv())
}

fn oracle(args: &OracleArgs) -> Result<String> {
    let mut config = load_config(&args.config)?;
    if let Some(n) = args.n {
        if n == 0 {
            return Err(Error::Usage("--n must be at least 1".into()));
        }
        config.crystal_length_um = n as f64 * config.domain_thickness_um;
    }
    if let Some(w) = args.workers {
        config.workers = w;
    }
    if let Some(d) = &args.output_dir {
        config.output_dir = d.clone();
    }
    let problem = config.problem()?;
    let result = brute_force_oracle(&problem, &Executor::new(config.workers))?;
    let pattern = DomainPattern::new(config.domain_thickness_um, result.signs.clone())?;
    let path = config.output_dir.join("oracle_pattern.txt");
    export_pattern(&pattern, &path)?;
    Ok(format!(
        "fitness = {}\npatterns = {}\npattern = {}\n",
        result.fitness,
        result.evaluated,
        display_path(&path)
    ))
}

fn display_path(p: &Path) -> String {
    p.display().to_string()
}
