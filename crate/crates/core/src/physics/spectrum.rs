use std::fmt;
use std::str::FromStr;

use super::deff::{deff_shg, deff_thg};
use super::dispersion::{phase_mismatches, DispersionModel};
use super::pattern::DomainPattern;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Process {
    Shg,
    Thg,
}

impl Process {
    /// The value |d_eff| takes for an all-up pattern with zero mismatch.
    pub fn normalizer(self, length_um: f64) -> f64 {
        match self {
            Process::Shg => length_um,
            Process::Thg => 0.5 * length_um * length_um,
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Process::Shg => "shg",
            Process::Thg => "thg",
        })
    }
}

impl FromStr for Process {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shg" => Ok(Process::Shg),
            "thg" => Ok(Process::Thg),
            other => Err(Error::Usage(format!("unknown process `{other}` (shg|thg)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumPoint {
    pub wavelength_nm: f64,
    pub deff_abs: f64,
    pub deff_norm: f64,
}

/// |d_eff| of `pattern` at each pump wavelength, in input order.
pub fn sweep_spectrum(
    pattern: &DomainPattern,
    model: &DispersionModel,
    wavelengths_nm: &[f64],
    process: Process,
) -> Result<Vec<SpectrumPoint>> {
    let norm = process.normalizer(pattern.length_um());
    wavelengths_nm
        .iter()
        .map(|&wavelength_nm| {
            let mismatch = phase_mismatches(model, wavelength_nm)?;
            let deff_abs = match process {
                Process::Shg => deff_shg(pattern, mismatch.dk1).norm(),
                Process::Thg => deff_thg(pattern, mismatch).norm(),
            };
            Ok(SpectrumPoint {
                wavelength_nm,
                deff_abs,
                deff_norm: deff_abs / norm,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_up_dispersionless_is_unity() {
        let m = DispersionModel::dispersionless(2.1, 0.2, 5.0).unwrap();
        let p = DomainPattern::uniform(0.5, 40).unwrap();
        let wl = [900.0, 1064.0, 1550.0];
        for process in [Process::Shg, Process::Thg] {
            for pt in sweep_spectrum(&p, &m, &wl, process).unwrap() {
                assert!((pt.deff_norm - 1.0).abs() < 1e-12, "{process}: {pt:?}");
            }
        }
    }

    #[test]
    fn single_point_matches_evaluator() {
        let m = DispersionModel::default();
        let p = DomainPattern::new(1.0, vec![1, -1, 1, 1, -1, -1, 1]).unwrap();
        let pts = sweep_spectrum(&p, &m, &[1404.0], Process::Thg).unwrap();
        let dk = phase_mismatches(&m, 1404.0).unwrap();
        assert_eq!(pts[0].deff_abs, deff_thg(&p, dk).norm());
    }

    #[test]
    fn out_of_range_propagates() {
        let p = DomainPattern::uniform(1.0, 4).unwrap();
        assert!(sweep_spectrum(&p, &DispersionModel::default(), &[1000.0], Process::Thg).is_err());
    }
}
