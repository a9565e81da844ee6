//! Reference computations shared by the integration tests. Nothing here
//! calls into the library's evaluators.

#![allow(dead_code)]

use num_complex::Complex64;

pub const SUBSTEPS: usize = 10_000;

/// Two-point Gauss–Legendre nodes on [-1, 1].
const GL_NODE: f64 = 0.577_350_269_189_625_8;

fn cis(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), -theta.sin())
}

/// ∫ over [a, b] of e^{-i dk z} by two-point Gauss–Legendre.
fn gl2_exp(a: f64, b: f64, dk: f64) -> Complex64 {
    let m = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    (cis(dk * (m - r * GL_NODE)) + cis(dk * (m + r * GL_NODE))) * r
}

/// Composite quadrature of ∫₀ᴸ d(z) e^{-iΔk z} dz.
pub fn quad_shg(signs: &[i8], t: f64, dk: f64) -> Complex64 {
    let h = t / SUBSTEPS as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &s) in signs.iter().enumerate() {
        let mut dom = Complex64::new(0.0, 0.0);
        for k in 0..SUBSTEPS {
            let a = j as f64 * t + k as f64 * h;
            dom += gl2_exp(a, a + h, dk);
        }
        acc += dom * f64::from(s);
    }
    acc
}

/// Composite quadrature of ∫₀ᴸ d(z) e^{-iΔk₂z} ∫₀ᶻ d(x) e^{-iΔk₁x} dx dz.
/// The inner integral is carried as a running value and extended to each
/// outer node with its own Gauss–Legendre step.
pub fn quad_thg(signs: &[i8], t: f64, dk1: f64, dk2: f64) -> Complex64 {
    let h = t / SUBSTEPS as f64;
    let mut inner = Complex64::new(0.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &s) in signs.iter().enumerate() {
        let s = f64::from(s);
        for k in 0..SUBSTEPS {
            let a = j as f64 * t + k as f64 * h;
            let m = a + 0.5 * h;
            let r = 0.5 * h;
            let mut step = Complex64::new(0.0, 0.0);
            for z in [m - r * GL_NODE, m + r * GL_NODE] {
                let inner_z = inner + gl2_exp(a, z, dk1) * s;
                step += cis(dk2 * z) * inner_z * s;
            }
            acc += step * r;
            inner += gl2_exp(a, a + h, dk1) * s;
        }
    }
    acc
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Extraordinary index of congruent lithium niobate, written out from the
/// published Sellmeier form.
pub fn ln_index(lambda_um: f64, temperature_c: f64) -> f64 {
    let f = (temperature_c - 24.5) * (temperature_c + 570.82);
    let l2 = lambda_um * lambda_um;
    let n2 = 5.35583
        + 4.629e-7 * f
        + (0.100473 + 3.862e-8 * f) / (l2 - (0.20692 - 0.89e-8 * f).powi(2))
        + (100.0 + 2.657e-5 * f) / (l2 - 11.34927 * 11.34927)
        - 1.5334e-2 * l2;
    n2.sqrt()
}

pub fn ln_mismatches(pump_nm: f64, temperature_c: f64) -> (f64, f64) {
    let k = |lam: f64| 2.0 * std::f64::consts::PI * ln_index(lam, temperature_c) / lam;
    let l = pump_nm / 1000.0;
    (k(l / 2.0) - 2.0 * k(l), k(l / 3.0) - k(l / 2.0) - k(l))
}

/// SplitMix64, for test inputs only.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * ((self.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
    }

    pub fn signs(&mut self, n: usize) -> Vec<i8> {
        (0..n)
            .map(|_| if self.next_u64() >> 63 == 0 { 1 } else { -1 })
            .collect()
    }
}

/// A scratch config file body with explicit mismatches.
pub fn override_config(
    n: usize,
    thickness: f64,
    process: &str,
    pumps: &[f64],
    dk: &[(f64, f64)],
    extra: &str,
) -> String {
    let pumps: Vec<String> = pumps.iter().map(|p| p.to_string()).collect();
    let dk: Vec<String> = dk.iter().map(|(a, b)| format!("{a}:{b}")).collect();
    format!(
        "crystal_length_um = {}\ndomain_thickness_um = {thickness}\nprocess = {process}\n\
         pump_wavelengths_nm = {}\ndk_override = {}\n{extra}",
        n as f64 * thickness,
        pumps.join(", "),
        dk.join(", ")
    )
}
