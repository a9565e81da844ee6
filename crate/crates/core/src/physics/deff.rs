//! Closed-form domain integrals.
//!
//! For a pattern of `N` domains of thickness `t`, domain `j` spans
//! `[j·t, (j+1)·t]`. The single-exponential integral over domain `j` is
//! `t·φ(Δk·t)·e^{-iΔk·j·t}` and the within-domain cascaded term is
//! `t²·Ψ(Δk₁t, Δk₂t)·e^{-i(Δk₁+Δk₂)·j·t}`, where φ and Ψ are first and second
//! divided differences of the exponential on the imaginary axis. Both are
//! evaluated without cancellation for arbitrarily small mismatches.

use num_complex::Complex64;

use super::pattern::DomainPattern;

pub type ComplexValue = Complex64;

/// Phase mismatches of the SHG (`dk1`) and SFG (`dk2`) steps, rad/μm.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PhaseMismatchPair {
    pub dk1: f64,
    pub dk2: f64,
}

impl PhaseMismatchPair {
    pub fn new(dk1: f64, dk2: f64) -> Self {
        Self { dk1, dk2 }
    }
}

/// Below this |argument| sinc switches to its Taylor series.
const SINC_SERIES_BELOW: f64 = 1e-3;
/// Below this spread of nodes the second divided difference uses a Taylor series.
const DD2_SERIES_BELOW: f64 = 0.05;

#[inline]
fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_BELOW {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

#[inline]
fn cis_neg(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, -s)
}

/// `∫₀¹ e^{-iθs} ds`.
pub fn domain_integral_factor(theta: f64) -> Complex64 {
    cis_neg(0.5 * theta) * sinc(0.5 * theta)
}

/// First divided difference of `x ↦ e^{-ix}·(−i)`-scaled exponential at
/// nodes θa, θb: `(e^{-iθa} − e^{-iθb}) / (−i(θa − θb))`.
#[inline]
fn dd1(theta_a: f64, theta_b: f64) -> Complex64 {
    cis_neg(theta_b) * domain_integral_factor(theta_a - theta_b)
}

/// `∫₀¹ e^{-iβs} ∫₀ˢ e^{-iαr} dr ds`, the second divided difference of the
/// exponential at the nodes `0, −iβ, −i(α+β)`.
pub fn triangle_integral_factor(alpha: f64, beta: f64) -> Complex64 {
    let mut nodes = [0.0, beta, alpha + beta];
    nodes.sort_by(f64::total_cmp);
    let [lo, mid, hi] = nodes;
    let spread = hi - lo;
    if spread < DD2_SERIES_BELOW {
        // e^{-ic} Σ_m h_m(y) / (m+2)!, y_k = −i(θ_k − c)
        let c = (lo + mid + hi) / 3.0;
        let y = [
            Complex64::new(0.0, -(lo - c)),
            Complex64::new(0.0, -(mid - c)),
            Complex64::new(0.0, -(hi - c)),
        ];
        const TERMS: usize = 12;
        // complete homogeneous symmetric polynomials, built one variable at a time
        let mut h = [Complex64::new(0.0, 0.0); TERMS];
        h[0] = Complex64::new(1.0, 0.0);
        for m in 1..TERMS {
            h[m] = h[m - 1] * y[0];
        }
        for yk in &y[1..] {
            for m in 1..TERMS {
                h[m] += *yk * h[m - 1];
            }
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut fact = 2.0;
        for (m, hm) in h.iter().enumerate() {
            sum += hm / fact;
            fact *= (m + 3) as f64;
        }
        cis_neg(c) * sum
    } else {
        let num = dd1(hi, mid) - dd1(mid, lo);
        num / Complex64::new(0.0, -spread)
    }
}

/// Precomputed per-domain SHG integrals for one geometry and mismatch.
#[derive(Clone, Debug)]
pub struct ShgKernel {
    coeffs: Vec<Complex64>,
}

impl ShgKernel {
    pub fn new(thickness_um: f64, count: usize, dk: f64) -> Self {
        let scale = thickness_um * domain_integral_factor(dk * thickness_um);
        let coeffs = (0..count)
            .map(|j| scale * cis_neg(dk * (j as f64 * thickness_um)))
            .collect();
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Integral over domain `j` with orientation +1.
    pub fn domain(&self, j: usize) -> Complex64 {
        self.coeffs[j]
    }

    pub fn evaluate(&self, signs: &[i8]) -> Complex64 {
        debug_assert_eq!(signs.len(), self.coeffs.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (&s, &g) in signs.iter().zip(&self.coeffs) {
            if s > 0 {
                acc += g;
            } else {
                acc -= g;
            }
        }
        acc
    }
}

/// Precomputed per-domain integrals for the cascaded (SHG → SFG) double integral.
#[derive(Clone, Debug)]
pub struct ThgKernel {
    inner: Vec<Complex64>,
    outer: Vec<Complex64>,
    /// Σ_j of the within-domain terms. Their sign factor is s_j² = 1, so the
    /// sum does not depend on the pattern.
    within: Complex64,
}

impl ThgKernel {
    pub fn new(thickness_um: f64, count: usize, mismatch: PhaseMismatchPair) -> Self {
        let t = thickness_um;
        let PhaseMismatchPair { dk1, dk2 } = mismatch;
        let g1 = t * domain_integral_factor(dk1 * t);
        let g2 = t * domain_integral_factor(dk2 * t);
        let h = t * t * triangle_integral_factor(dk1 * t, dk2 * t);
        let mut inner = Vec::with_capacity(count);
        let mut outer = Vec::with_capacity(count);
        let mut within = Complex64::new(0.0, 0.0);
        for j in 0..count {
            let z = j as f64 * t;
            inner.push(g1 * cis_neg(dk1 * z));
            outer.push(g2 * cis_neg(dk2 * z));
            within += h * cis_neg((dk1 + dk2) * z);
        }
        Self {
            inner,
            outer,
            within,
        }
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn evaluate(&self, signs: &[i8]) -> Complex64 {
        debug_assert_eq!(signs.len(), self.inner.len());
        // prefix: inner integral from 0 to the left edge of the current domain
        let mut prefix = Complex64::new(0.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for ((&s, &g1), &g2) in signs.iter().zip(&self.inner).zip(&self.outer) {
            if s > 0 {
                acc += prefix * g2;
                prefix += g1;
            } else {
                acc -= prefix * g2;
                prefix -= g1;
            }
        }
        acc + self.within
    }
}

/// `∫₀ᴸ d(z)·e^{-iΔk·z} dz` (μm).
pub fn deff_shg(pattern: &DomainPattern, dk: f64) -> ComplexValue {
    ShgKernel::new(pattern.thickness_um(), pattern.len(), dk).evaluate(pattern.signs())
}

/// `∫₀ᴸ d(z)·e^{-iΔk₂z} ∫₀ᶻ d(x)·e^{-iΔk₁x} dx dz` (μm²).
pub fn deff_thg(pattern: &DomainPattern, mismatch: PhaseMismatchPair) -> ComplexValue {
    ThgKernel::new(pattern.thickness_um(), pattern.len(), mismatch).evaluate(pattern.signs())
}
