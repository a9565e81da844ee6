//! Differential evolution, grey-wolf updates and the hybrid run loop.

mod adaptive;
mod de;
mod gwo;
mod params;
mod population;
mod run;

pub use adaptive::{adaptive_f_update, base_f, decay_coeff, AdaptiveState};
pub use de::{de_crossover, de_mutate, de_select, pick_donors, Mutant};
pub use gwo::{
    gwo_discrete_update, gwo_reference_update, rank_leaders, reference_update_with,
    reference_weights,
};
pub use params::{AdaptiveConfig, DeParams, GwoParams, GwoRates, HwsdaConfig};
pub use population::{init_population, Individual, Population};
pub use run::{run_de, run_gwo_reference, run_hwsda, Algorithm, RunResult, TraceRow};
