use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeParams {
    /// Variation factor used in the first generation.
    pub f: f64,
    pub cr: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub init_min: f64,
    pub init_max: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            f: 0.1,
            cr: 0.9,
            f_min: 0.01,
            f_max: 0.1,
            init_min: -1.0,
            init_max: 1.0,
        }
    }
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.f_min > 0.0 && self.f_min <= self.f_max && self.f_max <= 2.0) {
            return Err(Error::Config(format!(
                "need 0 < f_min <= f_max <= 2, got f_min={} f_max={}",
                self.f_min, self.f_max
            )));
        }
        if !(self.f >= self.f_min && self.f <= self.f_max) {
            return Err(Error::Config(format!(
                "f={} outside [{}, {}]",
                self.f, self.f_min, self.f_max
            )));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::Config(format!("cr={} outside [0, 1]", self.cr)));
        }
        if !(self.init_min <= self.init_max)
            || !self.init_min.is_finite()
            || !self.init_max.is_finite()
        {
            return Err(Error::Config(format!(
                "invalid init bounds [{}, {}]",
                self.init_min, self.init_max
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GwoParams {
    /// Starting value of the reference GWO's `a`.
    pub a: f64,
    /// Final value of `a`; the decay from `a` is linear.
    pub a_end: f64,
    pub leader_count: usize,
    /// Initial disturbance rate; decays linearly to 0.
    pub disturbance_rate: f64,
    /// Initial social learning rate; decays linearly to 0.
    pub social_learning_rate: f64,
    /// Initial late-phase flip rate; decays linearly to 0.
    pub flip_rate: f64,
    /// Progress g/G at which the discrete update switches to exploitation.
    pub phase_split: f64,
    /// Scales the disturbance strength.
    pub discreteness_factor: f64,
    /// Divide the reference weighted update by the leader count.
    pub divide_by_leader_count: bool,
}

impl Default for GwoParams {
    fn default() -> Self {
        Self {
            a: 0.1,
            a_end: 0.01,
            leader_count: 4,
            disturbance_rate: 0.1,
            social_learning_rate: 0.05,
            flip_rate: 0.02,
            phase_split: 0.5,
            discreteness_factor: 1.0,
            divide_by_leader_count: false,
        }
    }
}

impl GwoParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=2.0).contains(&self.a) {
            return Err(Error::Config(format!("gwo a={} outside [0, 2]", self.a)));
        }
        if !(0.0..=self.a).contains(&self.a_end) {
            return Err(Error::Config(format!(
                "gwo a_end={} outside [0, a={}]",
                self.a_end, self.a
            )));
        }
        if !(3..=4).contains(&self.leader_count) {
            return Err(Error::Config(format!(
                "leader_count={} must be 3 or 4",
                self.leader_count
            )));
        }
        for (name, v) in [
            ("disturbance_rate", self.disturbance_rate),
            ("social_learning_rate", self.social_learning_rate),
            ("flip_rate", self.flip_rate),
            ("phase_split", self.phase_split),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name}={v} outside [0, 1]")));
            }
        }
        if !(self.discreteness_factor >= 0.0) || !self.discreteness_factor.is_finite() {
            return Err(Error::Config(format!(
                "discreteness_factor={} must be >= 0",
                self.discreteness_factor
            )));
        }
        Ok(())
    }

    /// The reference GWO's `a` at generation `g` of `total`.
    pub fn a_at(&self, g: usize, total: usize) -> f64 {
        self.a_end + (self.a - self.a_end) * (1.0 - progress(g, total))
    }

    /// Rates in effect at generation `g` of `total`.
    pub fn rates(&self, g: usize, total: usize) -> GwoRates {
        let x = progress(g, total);
        let remaining = 1.0 - x;
        GwoRates {
            p_dist: (self.disturbance_rate * self.discreteness_factor * remaining).clamp(0.0, 1.0),
            p_sl: self.social_learning_rate * remaining,
            p_flip: self.flip_rate * remaining,
            late: x >= self.phase_split,
        }
    }
}

pub(crate) fn progress(g: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        (g as f64 / total as f64).min(1.0)
    }
}

/// Probabilities used by one discrete grey-wolf update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GwoRates {
    pub p_dist: f64,
    pub p_sl: f64,
    pub p_flip: f64,
    pub late: bool,
}

/// Population-state feedback on the variation factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveConfig {
    /// When false only the cosine envelope and the quadratic decay apply.
    pub branches: bool,
    /// Low-diversity threshold as a fraction of the generation-0 fitness std.
    pub theta_low: f64,
    /// High-diversity threshold as a fraction of the generation-0 fitness std.
    pub theta_high: f64,
    pub convergence_threshold: f64,
    pub convergence_window: usize,
    pub exploration_boost: f64,
    pub exploitation_factor: f64,
    /// Quadratic decay coefficient at g = G (1.0 at g = 0).
    pub decay_end: f64,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            branches: true,
            theta_low: 0.05,
            theta_high: 0.5,
            convergence_threshold: 0.1,
            convergence_window: 10,
            exploration_boost: 1.2,
            exploitation_factor: 0.8,
            decay_end: 0.8,
        }
    }
}

impl AdaptiveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.8..=1.0).contains(&self.decay_end) {
            return Err(Error::Config(format!(
                "decay_end={} outside [0.8, 1.0]",
                self.decay_end
            )));
        }
        if self.convergence_window == 0 {
            return Err(Error::Config("convergence_window must be >= 1".into()));
        }
        for (name, v) in [
            ("theta_low", self.theta_low),
            ("theta_high", self.theta_high),
            ("convergence_threshold", self.convergence_threshold),
            ("exploration_boost", self.exploration_boost),
            ("exploitation_factor", self.exploitation_factor),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name}={v} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HwsdaConfig {
    pub np: usize,
    pub generations: usize,
    pub seed: u64,
    pub de: DeParams,
    pub gwo: GwoParams,
    pub adaptive: AdaptiveConfig,
}

impl Default for HwsdaConfig {
    fn default() -> Self {
        Self {
            np: 200,
            generations: 300,
            seed: 1,
            de: DeParams::default(),
            gwo: GwoParams::default(),
            adaptive: AdaptiveConfig::default(),
        }
    }
}

impl HwsdaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.np < 4 {
            return Err(Error::Config(format!(
                "np={} but at least 4 are required",
                self.np
            )));
        }
        if self.gwo.leader_count > self.np {
            return Err(Error::Config(format!(
                "leader_count={} exceeds np={}",
                self.gwo.leader_count, self.np
            )));
        }
        self.de.validate()?;
        self.gwo.validate()?;
        self.adaptive.validate()
    }
}
