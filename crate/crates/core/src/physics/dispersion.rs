use std::f64::consts::PI;

use super::deff::PhaseMismatchPair;
use super::nm_to_um;
use crate::error::{Error, Result};

/// Coefficients of the temperature-dependent Sellmeier form
///
/// ```text
/// n² = a1 + b1·f + (a2 + b2·f) / (λ² − (a3 + b3·f)²) + (a4 + b4·f) / (λ² − a5²) − a6·λ²
/// f  = (T − 24.5)(T + 570.82)
/// ```
///
/// with λ in micrometres and T in degrees Celsius. `a3` and `a5` are
/// resonance wavelengths (μm); `a2`, `a4` carry μm², `a6` μm⁻².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SellmeierCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
}

impl SellmeierCoefficients {
    /// Extraordinary index of congruent lithium niobate (Jundt 1997).
    pub const CONGRUENT_LN_EXTRAORDINARY: Self = Self {
        a1: 5.35583,
        a2: 0.100473,
        a3: 0.20692,
        a4: 100.0,
        a5: 11.34927,
        a6: 1.5334e-2,
        b1: 4.629e-7,
        b2: 3.862e-8,
        b3: -0.89e-8,
        b4: 2.657e-5,
    };

    /// Only the constant term: n = √a1 at every wavelength.
    pub fn constant(a1: f64) -> Self {
        Self {
            a1,
            a2: 0.0,
            a3: 0.0,
            a4: 0.0,
            a5: 0.0,
            a6: 0.0,
            b1: 0.0,
            b2: 0.0,
            b3: 0.0,
            b4: 0.0,
        }
    }

    pub fn named(&self) -> [(&'static str, f64); 10] {
        [
            ("a1", self.a1),
            ("a2", self.a2),
            ("a3", self.a3),
            ("a4", self.a4),
            ("a5", self.a5),
            ("a6", self.a6),
            ("b1", self.b1),
            ("b2", self.b2),
            ("b3", self.b3),
            ("b4", self.b4),
        ]
    }

    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "a1" => &mut self.a1,
            "a2" => &mut self.a2,
            "a3" => &mut self.a3,
            "a4" => &mut self.a4,
            "a5" => &mut self.a5,
            "a6" => &mut self.a6,
            "b1" => &mut self.b1,
            "b2" => &mut self.b2,
            "b3" => &mut self.b3,
            "b4" => &mut self.b4,
            _ => return false,
        };
        *slot = value;
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DispersionModel {
    pub coefficients: SellmeierCoefficients,
    pub temperature_c: f64,
    pub lambda_min_um: f64,
    pub lambda_max_um: f64,
}

impl Default for DispersionModel {
    fn default() -> Self {
        Self::congruent_ln(25.0)
    }
}

impl DispersionModel {
    pub fn new(
        coefficients: SellmeierCoefficients,
        temperature_c: f64,
        lambda_min_um: f64,
        lambda_max_um: f64,
    ) -> Result<Self> {
        if !temperature_c.is_finite() {
            return Err(Error::Config(format!(
                "temperature {temperature_c} is not finite"
            )));
        }
        if !(lambda_min_um > 0.0 && lambda_min_um < lambda_max_um && lambda_max_um.is_finite()) {
            return Err(Error::Config(format!(
                "invalid wavelength range [{lambda_min_um}, {lambda_max_um}] um"
            )));
        }
        Ok(Self {
            coefficients,
            temperature_c,
            lambda_min_um,
            lambda_max_um,
        })
    }

    /// Default congruent LiNbO₃ extraordinary model, valid 0.4–5 μm.
    pub fn congruent_ln(temperature_c: f64) -> Self {
        Self {
            coefficients: SellmeierCoefficients::CONGRUENT_LN_EXTRAORDINARY,
            temperature_c,
            lambda_min_um: 0.4,
            lambda_max_um: 5.0,
        }
    }

    /// Wavelength-independent index over `[lambda_min_um, lambda_max_um]`.
    pub fn dispersionless(n: f64, lambda_min_um: f64, lambda_max_um: f64) -> Result<Self> {
        Self::new(
            SellmeierCoefficients::constant(n * n),
            25.0,
            lambda_min_um,
            lambda_max_um,
        )
    }

    pub fn refractive_index(&self, wavelength_um: f64) -> Result<f64> {
        if !(wavelength_um >= self.lambda_min_um) {
            return Err(Error::WavelengthOutOfRange {
                wavelength_um,
                min_um: self.lambda_min_um,
                max_um: self.lambda_max_um,
                side: "below",
            });
        }
        if wavelength_um > self.lambda_max_um {
            return Err(Error::WavelengthOutOfRange {
                wavelength_um,
                min_um: self.lambda_min_um,
                max_um: self.lambda_max_um,
                side: "above",
            });
        }
        let c = &self.coefficients;
        let t = self.temperature_c;
        let f = (t - 24.5) * (t + 570.82);
        let l2 = wavelength_um * wavelength_um;
        let uv = c.a3 + c.b3 * f;
        let n2 = c.a1
            + c.b1 * f
            + (c.a2 + c.b2 * f) / (l2 - uv * uv)
            + (c.a4 + c.b4 * f) / (l2 - c.a5 * c.a5)
            - c.a6 * l2;
        if !(n2 > 1.0) || !n2.is_finite() {
            return Err(Error::UnphysicalIndex {
                wavelength_um,
                n_squared: n2,
            });
        }
        Ok(n2.sqrt())
    }

    /// Wavenumber 2πn/λ in rad/μm.
    pub fn wavenumber(&self, wavelength_um: f64) -> Result<f64> {
        Ok(2.0 * PI * self.refractive_index(wavelength_um)? / wavelength_um)
    }
}

/// Δk₁ = k(λ/2) − 2k(λ) and Δk₂ = k(λ/3) − k(λ/2) − k(λ) for a pump at
/// `pump_nm`.
pub fn phase_mismatches(model: &DispersionModel, pump_nm: f64) -> Result<PhaseMismatchPair> {
    let lambda = nm_to_um(pump_nm);
    let k1 = model.wavenumber(lambda)?;
    let k2 = model.wavenumber(lambda / 2.0)?;
    let k3 = model.wavenumber(lambda / 3.0)?;
    Ok(PhaseMismatchPair {
        dk1: k2 - 2.0 * k1,
        dk2: k3 - k2 - k1,
    })
}
