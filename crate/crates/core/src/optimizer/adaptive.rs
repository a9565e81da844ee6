use std::f64::consts::FRAC_PI_2;

use super::params::{progress, AdaptiveConfig, DeParams};

/// Diversity and progress indicators feeding the variation-factor update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveState {
    /// Standard deviation of the population's fitness.
    pub pop_std: f64,
    /// max − min of the population's fitness.
    pub fit_range: f64,
    /// Fraction of recent generations in which the best fitness improved.
    pub convergence_rate: f64,
    /// Fitness standard deviation of generation 0; sets the threshold scale.
    pub initial_std: f64,
    pub generation: usize,
    pub total_generations: usize,
}

impl AdaptiveState {
    pub fn decay_coeff(&self, cfg: &AdaptiveConfig) -> f64 {
        decay_coeff(self.generation, self.total_generations, cfg.decay_end)
    }
}

/// Quadratic decay from 1.0 at g = 0 to `end` at g = G.
pub fn decay_coeff(g: usize, total: usize, end: f64) -> f64 {
    let x = progress(g, total);
    1.0 - (1.0 - end) * x * x
}

/// Cosine envelope mapped onto `[f_min, f_max]`: f_max at g = 0, f_min at g = G.
pub fn base_f(g: usize, total: usize, params: &DeParams) -> f64 {
    let x = progress(g, total);
    params.f_min + (params.f_max - params.f_min) * (FRAC_PI_2 * x).cos()
}

/// Variation factor for the next generation.
pub fn adaptive_f_update(state: &AdaptiveState, params: &DeParams, cfg: &AdaptiveConfig) -> f64 {
    let mut f = base_f(state.generation, state.total_generations, params);
    if cfg.branches {
        let sigma0 = state.initial_std;
        let theta_low = cfg.theta_low * sigma0;
        let theta_high = cfg.theta_high * sigma0;
        // ε_scale = σ₀/10³, so the range trigger 10³·ε_scale is σ₀ itself
        let range_trigger = sigma0;
        if state.pop_std < theta_low || state.convergence_rate < cfg.convergence_threshold {
            f *= cfg.exploration_boost;
        }
        if state.pop_std > theta_high || state.fit_range < range_trigger {
            f *= cfg.exploitation_factor;
        }
    }
    f *= state.decay_coeff(cfg);
    f.clamp(params.f_min, params.f_max)
}
