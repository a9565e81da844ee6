//! Scalar fitness for single-process and multi-wavelength designs.
//!
//! The optimizer always maximizes. Multi-wavelength objectives are
//! minimization problems and are negated here, at the boundary.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::physics::{
    phase_mismatches, DispersionModel, DomainPattern, PhaseMismatchPair, Process, ShgKernel,
    ThgKernel,
};

/// Larger is better.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct FitnessValue(pub f64);

impl FitnessValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Anything the optimizer can maximize over ±1 vectors.
pub trait Objective: Sync {
    fn dimension(&self) -> usize;
    fn fitness(&self, signs: &[i8]) -> FitnessValue;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    SingleShg,
    SingleThg,
    MultiShg,
    MultiThg,
}

impl Variant {
    pub fn process(self) -> Process {
        match self {
            Variant::SingleShg | Variant::MultiShg => Process::Shg,
            Variant::SingleThg | Variant::MultiThg => Process::Thg,
        }
    }

    pub fn is_multi(self) -> bool {
        matches!(self, Variant::MultiShg | Variant::MultiThg)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::SingleShg => "single_shg",
            Variant::SingleThg => "single_thg",
            Variant::MultiShg => "multi_shg",
            Variant::MultiThg => "multi_thg",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "single_shg" => Variant::SingleShg,
            "single_thg" => Variant::SingleThg,
            "multi_shg" => Variant::MultiShg,
            "multi_thg" => Variant::MultiThg,
            other => {
                return Err(Error::Usage(format!(
                    "unknown process `{other}` (single_shg|single_thg|multi_shg|multi_thg)"
                )))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// |d_eff| in μm (SHG) or μm² (THG).
    Raw,
    /// |d_eff| divided by L (SHG) or L²/2 (THG).
    Normalized,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Raw => "raw",
            Normalization::Normalized => "normalized",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Normalization::Raw),
            "normalized" => Ok(Normalization::Normalized),
            other => Err(Error::Usage(format!(
                "unknown normalization `{other}` (raw|normalized)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveSpec {
    pub variant: Variant,
    pub pump_wavelengths_nm: Vec<f64>,
    pub g0: f64,
    pub beta: f64,
    pub normalization: Normalization,
}

impl ObjectiveSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.pump_wavelengths_nm.len();
        if n == 0 {
            return Err(Error::Config(
                "at least one pump wavelength is required".into(),
            ));
        }
        if self.variant.is_multi() {
            if n < 2 {
                return Err(Error::Config(format!(
                    "{} needs at least two pump wavelengths, got {n}",
                    self.variant
                )));
            }
            if !(self.g0 > 0.0) {
                return Err(Error::Config(format!(
                    "g0 must be positive, got {}",
                    self.g0
                )));
            }
        } else if n != 1 {
            return Err(Error::Config(format!(
                "{} takes exactly one pump wavelength, got {n}",
                self.variant
            )));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return Err(Error::Config(format!(
                "beta must be >= 0, got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

/// Default target level: twice the largest possible |d_eff| (normalized 1.0),
/// so that |G₀ − G_i| = G₀ − G_i for every attainable G_i.
pub fn default_g0(process: Process, normalization: Normalization, length_um: f64) -> f64 {
    match normalization {
        Normalization::Normalized => 2.0,
        Normalization::Raw => 2.0 * process.normalizer(length_um),
    }
}

/// Where the phase mismatches come from.
#[derive(Clone, Debug, PartialEq)]
pub enum MismatchSource {
    Dispersion(DispersionModel),
    /// One pair per pump wavelength, in order.
    Override(Vec<PhaseMismatchPair>),
}

impl MismatchSource {
    pub fn mismatches(&self, pump_wavelengths_nm: &[f64]) -> Result<Vec<PhaseMismatchPair>> {
        match self {
            MismatchSource::Dispersion(model) => pump_wavelengths_nm
                .iter()
                .map(|&nm| phase_mismatches(model, nm))
                .collect(),
            MismatchSource::Override(pairs) => {
                if pairs.len() != pump_wavelengths_nm.len() {
                    return Err(Error::Config(format!(
                        "{} dk_override pairs for {} pump wavelengths",
                        pairs.len(),
                        pump_wavelengths_nm.len()
                    )));
                }
                Ok(pairs.clone())
            }
        }
    }
}

/// `Σ|G₀ − G_i| + β·(G_max − G_min)`; to be minimized.
pub fn multi_objective(g: &[f64], g0: f64, beta: f64) -> f64 {
    let spread = if g.is_empty() {
        0.0
    } else {
        let max = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = g.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    };
    g.iter().map(|gi| (g0 - gi).abs()).sum::<f64>() + beta * spread
}

#[derive(Clone, Debug)]
enum Kernel {
    Shg(ShgKernel),
    Thg(ThgKernel),
}

/// An [`ObjectiveSpec`] bound to a geometry, with every per-domain integral
/// precomputed. Evaluating a pattern is then a linear pass over the domains.
#[derive(Clone, Debug)]
pub struct Problem {
    spec: ObjectiveSpec,
    thickness_um: f64,
    count: usize,
    mismatches: Vec<PhaseMismatchPair>,
    kernels: Vec<Kernel>,
    scale: f64,
}

impl Problem {
    pub fn new(
        spec: ObjectiveSpec,
        source: &MismatchSource,
        thickness_um: f64,
        count: usize,
    ) -> Result<Self> {
        spec.validate()?;
        Self::build(spec, source, thickness_um, count)
    }

    fn build(
        spec: ObjectiveSpec,
        source: &MismatchSource,
        thickness_um: f64,
        count: usize,
    ) -> Result<Self> {
        // validates geometry
        DomainPattern::uniform(thickness_um, count)?;
        let mismatches = source.mismatches(&spec.pump_wavelengths_nm)?;
        let process = spec.variant.process();
        let kernels = mismatches
            .iter()
            .map(|&m| match process {
                Process::Shg => Kernel::Shg(ShgKernel::new(thickness_um, count, m.dk1)),
                Process::Thg => Kernel::Thg(ThgKernel::new(thickness_um, count, m)),
            })
            .collect();
        let scale = match spec.normalization {
            Normalization::Raw => 1.0,
            Normalization::Normalized => 1.0 / process.normalizer(count as f64 * thickness_um),
        };
        Ok(Self {
            spec,
            thickness_um,
            count,
            mismatches,
            kernels,
            scale,
        })
    }

    pub fn spec(&self) -> &ObjectiveSpec {
        &self.spec
    }

    pub fn thickness_um(&self) -> f64 {
        self.thickness_um
    }

    pub fn mismatches(&self) -> &[PhaseMismatchPair] {
        &self.mismatches
    }

    /// G_i: |d_eff| at each pump wavelength, scaled per the objective's normalization.
    pub fn g_values(&self, signs: &[i8]) -> Vec<f64> {
        self.kernels
            .iter()
            .map(|k| {
                let d = match k {
                    Kernel::Shg(k) => k.evaluate(signs),
                    Kernel::Thg(k) => k.evaluate(signs),
                };
                d.norm() * self.scale
            })
            .collect()
    }

    /// Mean normalized |d_eff| over the pump wavelengths.
    pub fn mean_deff_norm(&self, signs: &[i8]) -> f64 {
        let length = self.count as f64 * self.thickness_um;
        let to_norm = 1.0 / (self.scale * self.spec.variant.process().normalizer(length));
        let g = self.g_values(signs);
        g.iter().sum::<f64>() / g.len() as f64 * to_norm
    }
}

impl Objective for Problem {
    fn dimension(&self) -> usize {
        self.count
    }

    fn fitness(&self, signs: &[i8]) -> FitnessValue {
        let g = self.g_values(signs);
        if self.spec.variant.is_multi() {
            FitnessValue(-multi_objective(&g, self.spec.g0, self.spec.beta))
        } else {
            FitnessValue(g[0])
        }
    }
}

/// |d_eff| of the objective's single process at its pump wavelength.
pub fn fitness_single(
    pattern: &DomainPattern,
    spec: &ObjectiveSpec,
    source: &MismatchSource,
) -> Result<FitnessValue> {
    if spec.variant.is_multi() {
        return Err(Error::Usage(format!(
            "fitness_single called with variant {}",
            spec.variant
        )));
    }
    let problem = Problem::new(spec.clone(), source, pattern.thickness_um(), pattern.len())?;
    Ok(problem.fitness(pattern.signs()))
}

/// Negated multi-wavelength objective.
pub fn fitness_multi(
    pattern: &DomainPattern,
    spec: &ObjectiveSpec,
    source: &MismatchSource,
) -> Result<FitnessValue> {
    if !spec.variant.is_multi() {
        return Err(Error::Usage(format!(
            "fitness_multi called with variant {}",
            spec.variant
        )));
    }
    let problem = Problem::new(spec.clone(), source, pattern.thickness_um(), pattern.len())?;
    Ok(problem.fitness(pattern.signs()))
}

/// Multi-wavelength fitness without the n ≥ 2 check, for reductions to a
/// single wavelength.
#[cfg(test)]
fn fitness_multi_unchecked(
    pattern: &DomainPattern,
    spec: &ObjectiveSpec,
    source: &MismatchSource,
) -> Result<FitnessValue> {
    let problem = Problem::build(spec.clone(), source, pattern.thickness_um(), pattern.len())?;
    let g = problem.g_values(pattern.signs());
    Ok(FitnessValue(-multi_objective(&g, spec.g0, spec.beta)))
}
