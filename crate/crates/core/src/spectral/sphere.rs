//! Gauss–Legendre × uniform-longitude grids on the unit sphere.
//!
//! Colatitude nodes are the Gauss–Legendre points in `x = cos θ`, so no node
//! sits on a pole and polynomial integrands in `x` are integrated exactly.
//! Derivatives are taken mode by mode in longitude: the `m`-th Fourier
//! coefficient of a smooth field behaves like `sin^{|m|} θ · poly(cos θ)`, so
//! dividing out one factor of `sin θ` for odd `m` leaves a polynomial in `x`
//! that the Gauss–Legendre differentiation matrix handles spectrally.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::compensated_sum;
use crate::error::{Error, Result};

/// Quadrature nodes, weights and the colatitude differentiation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    n_theta: usize,
    n_phi: usize,
    theta: Vec<f64>,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    phi: Vec<f64>,
    /// Solid-angle weight of every node on ring `i`.
    ring_weights: Vec<f64>,
    /// Row-major `n_theta × n_theta` derivative matrix in `x = cos θ`.
    diff: Vec<f64>,
}

/// Gauss–Legendre nodes (descending in `x`) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let step = p1 / dp;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Arc<Self>> {
        if n_theta < 4 || n_phi < 8 || n_phi % 2 != 0 {
            return Err(Error::BadGrid { n_theta, n_phi });
        }
        let (x, gl_w) = gauss_legendre(n_theta);
        let sin_theta: Vec<f64> = x.iter().map(|&c| (1.0 - c * c).sqrt()).collect();
        if sin_theta.iter().any(|&s| s <= 0.0) {
            return Err(Error::Domain("grid places a node on a pole".into()));
        }
        let theta = x.iter().map(|c| c.acos()).collect();
        let phi = (0..n_phi)
            .map(|j| 2.0 * PI * j as f64 / n_phi as f64)
            .collect();
        let dphi = 2.0 * PI / n_phi as f64;
        let ring_weights = gl_w.iter().map(|w| w * dphi).collect();

        // Barycentric weights for Gauss–Legendre points: (-1)^j sqrt((1-x²) w).
        let bary: Vec<f64> = (0..n_theta)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * (sin_theta[j] * sin_theta[j] * gl_w[j]).sqrt()
            })
            .collect();
        let mut diff = vec![0.0; n_theta * n_theta];
        for i in 0..n_theta {
            let mut diag = Vec::with_capacity(n_theta);
            for j in 0..n_theta {
                if i != j {
                    let d = bary[j] / bary[i] / (x[i] - x[j]);
                    diff[i * n_theta + j] = d;
                    diag.push(-d);
                }
            }
            diff[i * n_theta + i] = compensated_sum(diag);
        }

        Ok(Arc::new(Self {
            n_theta,
            n_phi,
            theta,
            cos_theta: x,
            sin_theta,
            phi,
            ring_weights,
            diff,
        }))
    }

    /// Grid with `n_phi = 2 n_theta`.
    pub fn square(n_theta: usize) -> Result<Arc<Self>> {
        Self::new(n_theta, 2 * n_theta)
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ring: usize, col: usize) -> usize {
        ring * self.n_phi + col
    }

    pub fn theta(&self, ring: usize) -> f64 {
        self.theta[ring]
    }

    pub fn cos_theta(&self, ring: usize) -> f64 {
        self.cos_theta[ring]
    }

    pub fn sin_theta(&self, ring: usize) -> f64 {
        self.sin_theta[ring]
    }

    pub fn phi(&self, col: usize) -> f64 {
        self.phi[col]
    }

    pub fn weight(&self, ring: usize) -> f64 {
        self.ring_weights[ring]
    }

    /// Iterator over `(ring, col)` in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_theta).flat_map(move |i| (0..self.n_phi).map(move |j| (i, j)))
    }

    /// Unit normal `z` at a node.
    pub fn point(&self, ring: usize, col: usize) -> [f64; 3] {
        let (s, c) = (self.sin_theta[ring], self.cos_theta[ring]);
        let (sp, cp) = self.phi[col].sin_cos();
        [s * cp, s * sp, c]
    }

    /// Unit vector along increasing colatitude.
    pub fn e_theta(&self, ring: usize, col: usize) -> [f64; 3] {
        let (s, c) = (self.sin_theta[ring], self.cos_theta[ring]);
        let (sp, cp) = self.phi[col].sin_cos();
        [c * cp, c * sp, -s]
    }

    /// Unit vector along increasing longitude.
    pub fn e_phi(&self, col: usize) -> [f64; 3] {
        let (sp, cp) = self.phi[col].sin_cos();
        [-sp, cp, 0.0]
    }

    fn apply_diff(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n_theta;
        (0..n)
            .map(|i| {
                let row = &self.diff[i * n..(i + 1) * n];
                let re = compensated_sum(row.iter().zip(v).map(|(d, c)| d * c.re));
                let im = compensated_sum(row.iter().zip(v).map(|(d, c)| d * c.im));
                Complex64::new(re, im)
            })
            .collect()
    }
}

/// Real samples on a [`SphereGrid`] in ring-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereScalarField {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
}

/// Raw coordinate partial derivatives `∂θ, ∂φ, ∂θθ, ∂θφ, ∂φφ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePartials {
    pub d_theta: Vec<f64>,
    pub d_phi: Vec<f64>,
    pub d_theta_theta: Vec<f64>,
    pub d_theta_phi: Vec<f64>,
    pub d_phi_phi: Vec<f64>,
}

/// Covariant derivatives in the orthonormal frame `(∂θ, (sin θ)^{-1} ∂φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereOperators {
    pub grad_theta: SphereScalarField,
    pub grad_phi: SphereScalarField,
    pub hess_theta_theta: SphereScalarField,
    pub hess_theta_phi: SphereScalarField,
    pub hess_phi_phi: SphereScalarField,
    pub laplacian: SphereScalarField,
}

impl SphereOperators {
    /// `|∇f|²` at every node.
    pub fn grad_norm_sq(&self) -> SphereScalarField {
        self.grad_theta
            .zip_with(&self.grad_phi, |a, b| a * a + b * b)
            .expect("operator fields share a grid")
    }

    /// `Hess f(e_θ,e_θ) + Hess f(e_φ,e_φ)`.
    pub fn hessian_trace(&self) -> SphereScalarField {
        self.hess_theta_theta
            .zip_with(&self.hess_phi_phi, |a, b| a + b)
            .expect("operator fields share a grid")
    }
}

impl SphereScalarField {
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch(values.len(), grid.len()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(θ, φ)` at every node.
    pub fn from_fn(grid: &Arc<SphereGrid>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = grid
            .nodes()
            .map(|(i, j)| f(grid.theta(i), grid.phi(j)))
            .collect();
        Self::new(grid.clone(), values)
    }

    /// Samples `f(z)` for the unit vector `z` at every node.
    pub fn from_point_fn(grid: &Arc<SphereGrid>, f: impl Fn([f64; 3]) -> f64) -> Result<Self> {
        let values = grid.nodes().map(|(i, j)| f(grid.point(i, j))).collect();
        Self::new(grid.clone(), values)
    }

    pub fn constant(grid: &Arc<SphereGrid>, c: f64) -> Result<Self> {
        Self::new(grid.clone(), vec![c; grid.len()])
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, ring: usize, col: usize) -> f64 {
        self.values[self.grid.index(ring, col)]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.grid.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Self::new(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
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

    /// `∫ f dσ` by the tensor Gauss–Legendre × trapezoid rule.
    pub fn integral(&self) -> f64 {
        let n_phi = self.grid.n_phi;
        compensated_sum((0..self.grid.n_theta).map(|i| {
            self.grid.weight(i)
                * compensated_sum(self.values[i * n_phi..(i + 1) * n_phi].iter().copied())
        }))
    }

    /// `(1/4π) ∫ f dσ`.
    pub fn mean(&self) -> f64 {
        self.integral() / (4.0 * PI)
    }

    /// Coordinate partial derivatives.
    pub fn partials(&self) -> SpherePartials {
        let g = &*self.grid;
        let (nt, np) = (g.n_theta, g.n_phi);
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(np);
        let inv = planner.plan_fft_inverse(np);

        let mut spec: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        for ring in spec.chunks_mut(np) {
            fwd.process(ring);
        }

        let zero = Complex64::new(0.0, 0.0);
        let mut t = vec![zero; nt * np];
        let mut tt = vec![zero; nt * np];
        let mut p = vec![zero; nt * np];
        let mut tp = vec![zero; nt * np];
        let mut pp = vec![zero; nt * np];
        let nyquist = np / 2;
        for k in 0..np {
            let m = if k <= nyquist {
                k as i64
            } else {
                k as i64 - np as i64
            };
            let odd = m.unsigned_abs() % 2 == 1;
            let col: Vec<Complex64> = (0..nt).map(|i| spec[i * np + k]).collect();
            let reduced: Vec<Complex64> = if odd {
                col.iter().zip(&g.sin_theta).map(|(c, s)| c / s).collect()
            } else {
                col.clone()
            };
            let d1 = g.apply_diff(&reduced);
            let d2 = g.apply_diff(&d1);
            let im = Complex64::new(0.0, m as f64);
            for i in 0..nt {
                let (s, c) = (g.sin_theta[i], g.cos_theta[i]);
                let (ft, ftt) = if odd {
                    (
                        reduced[i] * c - d1[i] * (s * s),
                        -reduced[i] * s - d1[i] * (3.0 * s * c) + d2[i] * (s * s * s),
                    )
                } else {
                    (-d1[i] * s, -d1[i] * c + d2[i] * (s * s))
                };
                let idx = i * np + k;
                t[idx] = ft;
                tt[idx] = ftt;
                pp[idx] = col[i] * -(m as f64 * m as f64);
                if k != nyquist {
                    p[idx] = col[i] * im;
                    tp[idx] = ft * im;
                }
            }
        }

        let back = |mut buf: Vec<Complex64>| -> Vec<f64> {
            for ring in buf.chunks_mut(np) {
                inv.process(ring);
            }
            buf.into_iter().map(|c| c.re / np as f64).collect()
        };
        SpherePartials {
            d_theta: back(t),
            d_phi: back(p),
            d_theta_theta: back(tt),
            d_theta_phi: back(tp),
            d_phi_phi: back(pp),
        }
    }

    /// Gradient, covariant Hessian and Laplace–Beltrami operator.
    pub fn operators(&self) -> SphereOperators {
        let g = &self.grid;
        let d = self.partials();
        let np = g.n_phi;
        let make = |f: &dyn Fn(usize, f64, f64) -> f64| -> SphereScalarField {
            let values = (0..g.len())
                .map(|idx| {
                    let i = idx / np;
                    f(idx, g.sin_theta[i], g.cos_theta[i])
                })
                .collect();
            SphereScalarField {
                grid: g.clone(),
                values,
            }
        };
        SphereOperators {
            grad_theta: make(&|k, _, _| d.d_theta[k]),
            grad_phi: make(&|k, s, _| d.d_phi[k] / s),
            hess_theta_theta: make(&|k, _, _| d.d_theta_theta[k]),
            hess_theta_phi: make(&|k, s, c| (d.d_theta_phi[k] - c / s * d.d_phi[k]) / s),
            hess_phi_phi: make(&|k, s, c| d.d_phi_phi[k] / (s * s) + c / s * d.d_theta[k]),
            laplacian: make(&|k, s, c| {
                d.d_theta_theta[k] + c / s * d.d_theta[k] + d.d_phi_phi[k] / (s * s)
            }),
        }
    }
}

/// Gradient, covariant Hessian and Laplacian of `h`.
pub fn sphere_operators(h: &SphereScalarField) -> SphereOperators {
    h.operators()
}

/// `∫_{S²} f dσ`.
pub fn sphere_integral(f: &SphereScalarField) -> f64 {
    f.integral()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &SphereScalarField, b: &SphereScalarField) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(SphereGrid::new(2, 8).is_err());
        assert!(SphereGrid::new(8, 9).is_err());
        assert!(SphereGrid::new(8, 6).is_err());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12);
        for k in 0..24 {
            let exact = if k % 2 == 1 {
                0.0
            } else {
                2.0 / (k as f64 + 1.0)
            };
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((q - exact).abs() < 1e-14, "x^{k}: {q} vs {exact}");
        }
    }

    #[test]
    fn diff_matrix_is_exact_on_polynomials() {
        let g = SphereGrid::new(10, 8).unwrap();
        let v: Vec<Complex64> = g
            .cos_theta
            .iter()
            .map(|&x| Complex64::new(x.powi(7) - 2.0 * x, x * x))
            .collect();
        let d = g.apply_diff(&v);
        for (i, &x) in g.cos_theta.iter().enumerate() {
            assert!((d[i].re - (7.0 * x.powi(6) - 2.0)).abs() < 1e-12);
            assert!((d[i].im - 2.0 * x).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_quadrature() {
        let g = SphereGrid::square(16).unwrap();
        let one = SphereScalarField::constant(&g, 1.0).unwrap();
        assert!((sphere_integral(&one) - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
        let z2 = SphereScalarField::from_point_fn(&g, |z| z[2] * z[2]).unwrap();
        assert!((z2.integral() - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let g = SphereGrid::square(12).unwrap();
        let ops = SphereScalarField::constant(&g, 1.0).unwrap().operators();
        for f in [
            &ops.grad_theta,
            &ops.grad_phi,
            &ops.hess_theta_theta,
            &ops.hess_theta_phi,
            &ops.hess_phi_phi,
            &ops.laplacian,
        ] {
            assert!(f.values().iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn first_degree_harmonics_are_eigenfunctions() {
        let g = SphereGrid::square(64).unwrap();
        for axis in 0..3 {
            let f = SphereScalarField::from_point_fn(&g, |z| z[axis]).unwrap();
            let ops = f.operators();
            let expected = f.map(|v| -2.0 * v).unwrap();
            assert!(max_abs_diff(&ops.laplacian, &expected) < 1e-8);
            // Hess z_a = -z_a σ on the round sphere.
            let minus = f.map(|v| -v).unwrap();
            assert!(max_abs_diff(&ops.hess_theta_theta, &minus) < 1e-9);
            assert!(max_abs_diff(&ops.hess_phi_phi, &minus) < 1e-9);
            assert!(ops.hess_theta_phi.values().iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn gradient_of_height_function() {
        let g = SphereGrid::square(16).unwrap();
        let f = SphereScalarField::from_point_fn(&g, |z| z[0]).unwrap();
        let ops = f.operators();
        for (i, j) in g.nodes() {
            let idx = g.index(i, j);
            assert!((ops.grad_theta.values()[idx] - g.e_theta(i, j)[0]).abs() < 1e-12);
            assert!((ops.grad_phi.values()[idx] - g.e_phi(j)[0]).abs() < 1e-12);
        }
    }
}
