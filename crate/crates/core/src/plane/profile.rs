//! Validated support-function profiles on the circle of normal angles.

use crate::error::{Error, Result};
use crate::spectral::PeriodicSamples;

/// Relative floor below which the strict positivity conditions count as violated.
pub const CONVEXITY_FLOOR: f64 = 1e-8;
/// Allowed relative defect in `h(θ + π) = h(θ)`.
pub const SYMMETRY_TOL: f64 = 1e-10;

fn first_below(values: &[f64], floor: f64) -> Option<(usize, usize, f64)> {
    let bad: Vec<usize> = (0..values.len()).filter(|&i| values[i] <= floor).collect();
    bad.first().map(|&i| (bad.len(), i, values[i]))
}

fn invalid(what: &'static str, condition: &'static str, hit: (usize, usize, f64)) -> Error {
    Error::Invalid {
        what,
        condition,
        count: hit.0,
        first: hit.1,
        value: hit.2,
    }
}

/// Support function of the dual unit ball; determines the Minkowski norm.
#[derive(Debug, Clone, PartialEq)]
pub struct NormProfile {
    h: PeriodicSamples,
    h_t: PeriodicSamples,
    h_tt: PeriodicSamples,
}

impl NormProfile {
    /// Checks `h > 0`, `h(θ+π) = h(θ)` and `h'' + h > 0`.
    pub fn new(h: PeriodicSamples) -> Result<Self> {
        let n = h.len();
        let scale = h.values().iter().map(|v| v.abs()).sum::<f64>() / n as f64;
        if let Some(hit) = first_below(h.values(), CONVEXITY_FLOOR * scale) {
            return Err(invalid("norm profile h", "h > 0", hit));
        }
        let asym: Vec<f64> = (0..n)
            .map(|j| SYMMETRY_TOL * scale - (h.values()[j] - h.values()[(j + n / 2) % n]).abs())
            .collect();
        if let Some(hit) = first_below(&asym, 0.0) {
            return Err(invalid("norm profile h", "h(θ+π) = h(θ)", hit));
        }
        let h_t = h.derivative(1)?;
        let h_tt = h.derivative(2)?;
        let radius = h.zip_with(&h_tt, |a, b| a + b)?;
        if let Some(hit) = first_below(radius.values(), CONVEXITY_FLOOR * scale) {
            return Err(invalid("norm profile h", "h'' + h > 0", hit));
        }
        Ok(Self { h, h_t, h_tt })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(PeriodicSamples::from_fn(n, f)?)
    }

    /// The Euclidean norm, `h ≡ 1`.
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(PeriodicSamples::constant(n, 1.0)?)
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn h(&self) -> &PeriodicSamples {
        &self.h
    }

    pub fn h_theta(&self) -> &PeriodicSamples {
        &self.h_t
    }

    pub fn h_theta_theta(&self) -> &PeriodicSamples {
        &self.h_tt
    }

    /// `h'' + h`, the radius of curvature of the isoperimetrix.
    pub fn radius(&self) -> PeriodicSamples {
        self.h
            .zip_with(&self.h_tt, |a, b| a + b)
            .expect("same length")
    }

    pub fn resample(&self, n: usize) -> Result<Self> {
        Self::new(self.h.resample(n)?)
    }
}

/// Euclidean support function `p(θ)` of a strictly convex curve, θ the normal angle.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportProfile {
    p: PeriodicSamples,
    p_t: PeriodicSamples,
    p_tt: PeriodicSamples,
}

impl SupportProfile {
    /// Checks `p'' + p > 0` (positive Euclidean curvature).
    pub fn new(p: PeriodicSamples) -> Result<Self> {
        let p_t = p.derivative(1)?;
        let p_tt = p.derivative(2)?;
        let radius = p.zip_with(&p_tt, |a, b| a + b)?;
        let scale = radius.mean();
        if scale <= 0.0 {
            return Err(Error::Invalid {
                what: "support profile p",
                condition: "p'' + p > 0",
                count: p.len(),
                first: 0,
                value: scale,
            });
        }
        if let Some(hit) = first_below(radius.values(), CONVEXITY_FLOOR * scale) {
            return Err(invalid("support profile p", "p'' + p > 0", hit));
        }
        Ok(Self { p, p_t, p_tt })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(PeriodicSamples::from_fn(n, f)?)
    }

    pub fn circle(n: usize, radius: f64) -> Result<Self> {
        Self::new(PeriodicSamples::constant(n, radius)?)
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn p(&self) -> &PeriodicSamples {
        &self.p
    }

    pub fn p_theta(&self) -> &PeriodicSamples {
        &self.p_t
    }

    pub fn p_theta_theta(&self) -> &PeriodicSamples {
        &self.p_tt
    }

    /// `p'' + p = 1/k`, the Euclidean radius of curvature.
    pub fn radius(&self) -> PeriodicSamples {
        self.p
            .zip_with(&self.p_tt, |a, b| a + b)
            .expect("same length")
    }

    /// `λ p`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.p.map(|v| v * factor)?)
    }

    pub fn resample(&self, n: usize) -> Result<Self> {
        Self::new(self.p.resample(n)?)
    }
}
