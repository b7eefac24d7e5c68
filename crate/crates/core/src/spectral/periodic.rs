//! Uniformly sampled 2π-periodic functions: trigonometric interpolation,
//! spectral differentiation and the trapezoidal rule.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::compensated_sum;
use crate::error::{Error, Result};

/// Samples of a periodic function at `θ_j = 2πj/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSamples {
    values: Vec<f64>,
}

/// Real Fourier series `a0 + Σ a_k cos kθ + b_k sin kθ (+ nyquist·cos(Kθ))`.
///
/// `nyquist` is the coefficient of `cos((K+1)θ)` where `K = a.len()`; it is
/// produced by analysis of an even number of samples and is zero otherwise.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierCoefficients {
    pub a0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub nyquist: f64,
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

fn check_len(n: usize) -> Result<()> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::BadSampleCount(n));
    }
    Ok(())
}

impl PeriodicSamples {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_len(values.len())?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_len(n)?;
        Self::new((0..n).map(|j| f(node(j, n))).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn node(&self, j: usize) -> f64 {
        node(j, self.len())
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|j| self.node(j))
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.values.iter().copied()) / self.len() as f64
    }

    /// Pointwise map; the result must stay finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two equally sized sample sets.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    fn spectrum(&self) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        plan(buf.len(), false).process(&mut buf);
        buf
    }

    fn from_spectrum(mut buf: Vec<Complex64>) -> Result<Self> {
        let n = buf.len();
        plan(n, true).process(&mut buf);
        Self::new(buf.into_iter().map(|c| c.re / n as f64).collect())
    }

    pub fn analyze(&self) -> FourierCoefficients {
        let n = self.len();
        let spec = self.spectrum();
        let scale = 2.0 / n as f64;
        let half = n / 2;
        FourierCoefficients {
            a0: spec[0].re / n as f64,
            a: (1..half).map(|k| spec[k].re * scale).collect(),
            b: (1..half).map(|k| -spec[k].im * scale).collect(),
            nyquist: spec[half].re / n as f64,
        }
    }

    /// Spectral derivative of the trigonometric interpolant.
    pub fn derivative(&self, order: usize) -> Result<Self> {
        if !(1..=3).contains(&order) {
            return Err(Error::BadDerivativeOrder(order));
        }
        let n = self.len();
        let half = n / 2;
        let mut spec = self.spectrum();
        for (k, c) in spec.iter_mut().enumerate() {
            if k == half && order % 2 == 1 {
                *c = Complex64::new(0.0, 0.0);
                continue;
            }
            let wave = if k <= half {
                k as f64
            } else {
                k as f64 - n as f64
            };
            *c *= Complex64::new(0.0, wave).powu(order as u32);
        }
        Self::from_spectrum(spec)
    }

    /// Trapezoidal rule `(2π/n) Σ values`.
    pub fn integral(&self) -> f64 {
        2.0 * PI / self.len() as f64 * compensated_sum(self.values.iter().copied())
    }

    /// Evaluates the trigonometric interpolant at an arbitrary angle.
    pub fn eval(&self, theta: f64) -> f64 {
        self.analyze().eval(theta)
    }

    /// Re-samples the trigonometric interpolant on `n` nodes.
    pub fn resample(&self, n: usize) -> Result<Self> {
        check_len(n)?;
        if n == self.len() {
            return Ok(self.clone());
        }
        if n < self.len() {
            return Err(Error::BandTooWide {
                band: self.len() / 2,
                n,
            });
        }
        self.analyze().synthesize(n)
    }
}

fn node(j: usize, n: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

impl FourierCoefficients {
    /// Highest mode carried, counting a nonzero Nyquist term.
    pub fn band(&self) -> usize {
        if self.nyquist != 0.0 {
            self.a.len().max(self.b.len()) + 1
        } else {
            self.a.len().max(self.b.len())
        }
    }

    pub fn cos(&self, k: usize) -> f64 {
        if k == 0 {
            self.a0
        } else if k == self.a.len().max(self.b.len()) + 1 {
            self.nyquist
        } else {
            self.a.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn sin(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.b.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    /// Value of the series at `theta`.
    pub fn eval(&self, theta: f64) -> f64 {
        let len = self.a.len().max(self.b.len());
        let terms = (1..=len).map(|k| {
            let kt = k as f64 * theta;
            self.cos(k) * kt.cos() + self.sin(k) * kt.sin()
        });
        let nyq = self.nyquist * ((len + 1) as f64 * theta).cos();
        compensated_sum(
            std::iter::once(self.a0)
                .chain(terms)
                .chain(std::iter::once(nyq)),
        )
    }

    /// Samples the series on `n` uniform nodes; requires band ≤ n/2 − 1.
    pub fn synthesize(&self, n: usize) -> Result<PeriodicSamples> {
        check_len(n)?;
        let len = self.a.len().max(self.b.len());
        if len > n / 2 - 1 || self.band() > n / 2 {
            return Err(Error::BandTooWide {
                band: self.band(),
                n,
            });
        }
        let mut spec = vec![Complex64::new(0.0, 0.0); n];
        spec[0] = Complex64::new(self.a0 * n as f64, 0.0);
        let half = n as f64 / 2.0;
        for k in 1..=len {
            let c = Complex64::new(self.cos(k), -self.sin(k)) * half;
            spec[k] = c;
            spec[n - k] = c.conj();
        }
        if self.nyquist != 0.0 {
            let k = len + 1;
            if k == n / 2 {
                spec[k] = Complex64::new(self.nyquist * n as f64, 0.0);
            } else {
                spec[k] = Complex64::new(self.nyquist * half, 0.0);
                spec[n - k] = spec[k];
            }
        }
        PeriodicSamples::from_spectrum(spec)
    }

    /// Energy `Σ (a_k² + b_k²)` over modes `k >= from`.
    pub fn energy_from(&self, from: usize) -> f64 {
        (from.max(1)..=self.band())
            .map(|k| self.cos(k).powi(2) + self.sin(k).powi(2))
            .sum()
    }
}

/// Spectral derivative of order 1, 2 or 3.
pub fn periodic_derivative(f: &PeriodicSamples, order: usize) -> Result<PeriodicSamples> {
    f.derivative(order)
}

/// Trapezoidal integral over one period.
pub fn periodic_integral(f: &PeriodicSamples) -> f64 {
    f.integral()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_err(a: &PeriodicSamples, f: impl Fn(f64) -> f64) -> f64 {
        a.nodes()
            .zip(a.values())
            .map(|(t, v)| (v - f(t)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            PeriodicSamples::new(vec![0.0; 7]),
            Err(Error::BadSampleCount(7))
        );
        assert_eq!(
            PeriodicSamples::new(vec![0.0; 6]),
            Err(Error::BadSampleCount(6))
        );
        assert_eq!(
            PeriodicSamples::new(vec![0.0; 9]),
            Err(Error::BadSampleCount(9))
        );
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert_eq!(PeriodicSamples::new(v), Err(Error::NonFinite(3)));
        let f = PeriodicSamples::constant(8, 1.0).unwrap();
        assert_eq!(f.derivative(4), Err(Error::BadDerivativeOrder(4)));
        assert_eq!(f.derivative(0), Err(Error::BadDerivativeOrder(0)));
    }

    #[test]
    fn second_derivative_of_cosine() {
        let f = PeriodicSamples::from_fn(32, f64::cos).unwrap();
        let d2 = f.derivative(2).unwrap();
        let e = max_err(&d2, |t| -t.cos());
        assert!(e < 1e-13, "{e}");
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let f = PeriodicSamples::constant(16, 3.0).unwrap();
        for order in 1..=3 {
            assert!(f
                .derivative(order)
                .unwrap()
                .values()
                .iter()
                .all(|v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn first_derivative_mixed_modes() {
        let f = PeriodicSamples::from_fn(64, |t| (2.0 * t).cos() + 0.5 * (3.0 * t).sin()).unwrap();
        let d = f.derivative(1).unwrap();
        // closed-form differentiation
        let exact = |t: f64| -2.0 * (2.0 * t).sin() + 1.5 * (3.0 * t).cos();
        let e = max_err(&d, exact);
        assert!(e < 1e-12, "{e}");
        let d3 = f.derivative(3).unwrap();
        let exact3 = |t: f64| 8.0 * (2.0 * t).sin() - 13.5 * (3.0 * t).cos();
        assert!(max_err(&d3, exact3) < 1e-10);
    }

    #[test]
    fn trapezoid_values() {
        let one = PeriodicSamples::constant(8, 1.0).unwrap();
        assert!((one.integral() - 2.0 * PI).abs() < 1e-15);
        for k in 1..=5 {
            let f = PeriodicSamples::from_fn(16, |t| (k as f64 * t).cos()).unwrap();
            assert!(f.integral().abs() < 1e-13);
        }
        let f = PeriodicSamples::from_fn(16, |t| {
            (1.0 + 0.1 * (2.0 * t).cos()) * (1.0 - 0.3 * (2.0 * t).cos())
        })
        .unwrap();
        // ∫(1 + 0.1c)(1 - 0.3c) = 2π + (−0.03)·π
        assert!((f.integral() - 1.97 * PI).abs() < 1e-14);
    }

    #[test]
    fn analysis_and_synthesis() {
        let f = PeriodicSamples::from_fn(16, |t| {
            0.5 + (3.0 * t).sin() - 0.25 * (7.0 * t).cos() + 0.1 * (8.0 * t).cos()
        })
        .unwrap();
        let c = f.analyze();
        assert!((c.a0 - 0.5).abs() < 1e-15);
        assert!((c.sin(3) - 1.0).abs() < 1e-15);
        assert!((c.cos(7) + 0.25).abs() < 1e-15);
        assert!((c.nyquist - 0.1).abs() < 1e-15);
        assert!(c.cos(5).abs() < 1e-15);
        let back = c.synthesize(16).unwrap();
        assert!(max_err(&back, |t| f.eval(t)) < 1e-14);
        let up = f.resample(64).unwrap();
        for (j, v) in f.values().iter().enumerate() {
            assert!((up.values()[4 * j] - v).abs() < 1e-14);
        }
        assert!(f.resample(8).is_err());
    }

    #[test]
    fn synthesis_enforces_band() {
        let c = FourierCoefficients {
            a0: 1.0,
            a: vec![0.0; 4],
            b: vec![0.0, 0.0, 0.0, 1.0],
            nyquist: 0.0,
        };
        assert!(c.synthesize(8).is_err());
        assert!(c.synthesize(10).is_ok());
    }
}
