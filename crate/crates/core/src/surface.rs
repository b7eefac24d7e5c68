//! Strictly convex surfaces in R³ described by their support function on S².
//!
//! Everything is computed in the Gauss-map chart: the surface is
//! `f = h z + ∇h`, its radius-of-curvature tensor is `r = Hess h + h σ` with
//! eigenvalues the principal radii `ρ₁ ≥ ρ₂`, and integrals over the surface
//! are pulled back with `dσ = 𝒦 dμ`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::{InequalityReport, Relation, Resolution};
use crate::spectral::{harmonic_sum, SphereGrid, SphereScalarField};

/// Minimum admissible principal radius, relative to the mean of `h`.
pub const CONVEXITY_FLOOR: f64 = 1e-6;

/// Default tolerance of the focal volume identity.
pub const FOCAL_TOLERANCE: f64 = 1e-7;

fn resolution(grid: &SphereGrid) -> Resolution {
    Resolution::Sphere {
        n_theta: grid.n_theta(),
        n_phi: grid.n_phi(),
    }
}

/// Entries of the symmetric radius tensor in the frame `(e_θ, e_φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusTensor {
    pub theta_theta: SphereScalarField,
    pub theta_phi: SphereScalarField,
    pub phi_phi: SphereScalarField,
}

/// A validated support function.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportField {
    h: SphereScalarField,
    grad: [SphereScalarField; 2],
    tensor: RadiusTensor,
}

impl SupportField {
    /// Rejects fields whose radius tensor has an eigenvalue below
    /// `CONVEXITY_FLOOR · mean(h)`, listing the offending nodes.
    pub fn new(h: SphereScalarField) -> Result<Self> {
        let ops = h.operators();
        let tensor = RadiusTensor {
            theta_theta: ops.hess_theta_theta.zip_with(&h, |a, b| a + b)?,
            theta_phi: ops.hess_theta_phi.clone(),
            phi_phi: ops.hess_phi_phi.zip_with(&h, |a, b| a + b)?,
        };
        let floor = CONVEXITY_FLOOR * h.mean();
        let nodes: Vec<usize> = (0..h.values().len())
            .filter(|&k| {
                let (_, low) = eigen(
                    tensor.theta_theta.values()[k],
                    tensor.theta_phi.values()[k],
                    tensor.phi_phi.values()[k],
                );
                !(low >= floor && floor > 0.0)
            })
            .collect();
        if !nodes.is_empty() {
            return Err(Error::NotConvexSurface { nodes });
        }
        Ok(Self {
            grad: [ops.grad_theta, ops.grad_phi],
            h,
            tensor,
        })
    }

    /// `h ≡ r`.
    pub fn sphere(grid: &Arc<SphereGrid>, r: f64) -> Result<Self> {
        Self::new(SphereScalarField::constant(grid, r)?)
    }

    /// `constant + Σ c Y_lm`.
    pub fn from_harmonics(
        grid: &Arc<SphereGrid>,
        constant: f64,
        terms: &[(usize, i64, f64)],
    ) -> Result<Self> {
        Self::new(harmonic_sum(grid, constant, terms)?)
    }

    /// Axially symmetric field from its values at the grid's colatitude nodes
    /// (north to south).
    pub fn zonal(grid: &Arc<SphereGrid>, profile: &[f64]) -> Result<Self> {
        if profile.len() != grid.n_theta() {
            return Err(Error::LengthMismatch(profile.len(), grid.n_theta()));
        }
        let values = grid.nodes().map(|(i, _)| profile[i]).collect();
        Self::new(SphereScalarField::new(grid.clone(), values)?)
    }

    /// Axially symmetric field `h = f(θ)`.
    pub fn from_zonal_fn(grid: &Arc<SphereGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(SphereScalarField::from_fn(grid, |t, _| f(t))?)
    }

    /// Ellipsoid with semi-axes `a, b, c`: `h(z) = √(a²z₁² + b²z₂² + c²z₃²)`.
    pub fn ellipsoid(grid: &Arc<SphereGrid>, axes: [f64; 3]) -> Result<Self> {
        if axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::Domain(format!(
                "ellipsoid semi-axes must be positive, got {axes:?}"
            )));
        }
        Self::new(SphereScalarField::from_point_fn(grid, |z| {
            (0..3).map(|i| (axes[i] * z[i]).powi(2)).sum::<f64>().sqrt()
        })?)
    }

    pub fn h(&self) -> &SphereScalarField {
        &self.h
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        self.h.grid()
    }

    pub fn radius_tensor(&self) -> &RadiusTensor {
        &self.tensor
    }

    /// `h + ⟨v, z⟩`: the same surface translated by `v`.
    pub fn translated(&self, v: [f64; 3]) -> Result<Self> {
        let shift = SphereScalarField::from_point_fn(self.grid(), |z| {
            v[0] * z[0] + v[1] * z[1] + v[2] * z[2]
        })?;
        Self::new(self.h.zip_with(&shift, |a, b| a + b)?)
    }

    /// `λ h`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.h.map(|v| lambda * v)?)
    }

    /// `|∇h|²`.
    fn grad_norm_sq(&self) -> SphereScalarField {
        self.grad[0]
            .zip_with(&self.grad[1], |a, b| a * a + b * b)
            .expect("same grid")
    }

    /// Position map `f = h z + ∇h`.
    pub fn position(&self) -> SphereMap {
        let g = self.grid();
        let points = g
            .nodes()
            .enumerate()
            .map(|(k, (i, j))| {
                let (z, et, ep) = (g.point(i, j), g.e_theta(i, j), g.e_phi(j));
                let (h, gt, gp) = (
                    self.h.values()[k],
                    self.grad[0].values()[k],
                    self.grad[1].values()[k],
                );
                std::array::from_fn(|c| h * z[c] + gt * et[c] + gp * ep[c])
            })
            .collect();
        SphereMap {
            grid: g.clone(),
            points,
        }
    }
}

/// Eigenvalues `(larger, smaller)` of `[[a, b], [b, c]]`.
fn eigen(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let half_gap = (0.5 * (a - c)).hypot(b);
    (mean + half_gap, mean - half_gap)
}

/// `ρ₁ ≥ ρ₂` at every node.
pub fn principal_radii(h: &SupportField) -> (SphereScalarField, SphereScalarField) {
    let t = &h.tensor;
    let (hi, lo): (Vec<f64>, Vec<f64>) = (0..t.theta_theta.values().len())
        .map(|k| {
            eigen(
                t.theta_theta.values()[k],
                t.theta_phi.values()[k],
                t.phi_phi.values()[k],
            )
        })
        .unzip();
    let g = h.grid().clone();
    (
        SphereScalarField::new(g.clone(), hi).expect("finite"),
        SphereScalarField::new(g, lo).expect("finite"),
    )
}

/// `ρ₁ − ρ₂ = 2√(((r_θθ − r_φφ)/2)² + r_θφ²)`, free of cancellation.
fn radius_gap(h: &SupportField) -> SphereScalarField {
    let t = &h.tensor;
    let values = (0..t.theta_theta.values().len())
        .map(|k| {
            2.0 * (0.5 * (t.theta_theta.values()[k] - t.phi_phi.values()[k]))
                .hypot(t.theta_phi.values()[k])
        })
        .collect();
    SphereScalarField::new(h.grid().clone(), values).expect("finite")
}

/// A map `S² → R³` sampled on a sphere grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereMap {
    grid: Arc<SphereGrid>,
    points: Vec<[f64; 3]>,
}

impl SphereMap {
    pub fn new(grid: Arc<SphereGrid>, points: Vec<[f64; 3]>) -> Result<Self> {
        if points.len() != grid.len() {
            return Err(Error::LengthMismatch(points.len(), grid.len()));
        }
        if let Some(k) = points.iter().position(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite(k));
        }
        Ok(Self { grid, points })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn component(&self, c: usize) -> SphereScalarField {
        SphereScalarField::new(
            self.grid.clone(),
            self.points.iter().map(|p| p[c]).collect(),
        )
        .expect("finite")
    }

    /// `ψ + u z`.
    pub fn normal_graph(&self, u: &SphereScalarField) -> Result<Self> {
        if u.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let g = &self.grid;
        let points = g
            .nodes()
            .zip(&self.points)
            .zip(u.values())
            .map(|(((i, j), p), &u)| {
                let z = g.point(i, j);
                std::array::from_fn(|c| p[c] + u * z[c])
            })
            .collect();
        Self::new(g.clone(), points)
    }

    /// `(∂θψ, (sin θ)^{-1} ∂φψ)` at every node.
    fn tangents(&self) -> Vec<([f64; 3], [f64; 3])> {
        let parts: Vec<_> = (0..3).map(|c| self.component(c).partials()).collect();
        self.grid
            .nodes()
            .enumerate()
            .map(|(k, (i, _))| {
                let s = self.grid.sin_theta(i);
                (
                    std::array::from_fn(|c| parts[c].d_theta[k]),
                    std::array::from_fn(|c| parts[c].d_phi[k] / s),
                )
            })
            .collect()
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `V = ⅓ ∫ det[ψ, ∂θψ, ∂φψ] dθ dφ`.
pub fn oriented_volume(map: &SphereMap) -> f64 {
    let values = map
        .tangents()
        .into_iter()
        .zip(&map.points)
        .map(|((t, p), &x)| dot(x, cross(t, p)) / 3.0)
        .collect();
    SphereScalarField::new(map.grid.clone(), values)
        .expect("finite")
        .integral()
}

/// Principal radii and the integrals of the surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGeometry {
    pub position: SphereMap,
    pub rho1: SphereScalarField,
    pub rho2: SphereScalarField,
    /// `∫H dμ = 2∫h dσ`.
    pub integral_mean_curvature: f64,
    /// `|M| = ∫h² dσ − ½∫|∇h|² dσ`.
    pub area: f64,
    /// `∫|A°|²/𝒦 dμ = ½∫(ρ₁ − ρ₂)² dσ`.
    pub tracefree: f64,
    /// `∫𝒦 dμ`, from the area element of the position map.
    pub gauss: f64,
}

pub fn surface_from_support(h: &SupportField) -> SurfaceGeometry {
    let (rho1, rho2) = principal_radii(h);
    let gap = radius_gap(h);
    let position = h.position();
    let area_element: Vec<f64> = position
        .tangents()
        .into_iter()
        .map(|(t, p)| dot(cross(t, p), cross(t, p)).sqrt())
        .collect();
    let gauss = SphereScalarField::new(
        h.grid().clone(),
        area_element
            .iter()
            .zip(rho1.values().iter().zip(rho2.values()))
            .map(|(a, (r1, r2))| a / (r1 * r2))
            .collect(),
    )
    .expect("finite")
    .integral();
    let h2 = h.h.map(|v| v * v).expect("finite").integral();
    SurfaceGeometry {
        integral_mean_curvature: 2.0 * h.h.integral(),
        area: h2 - 0.5 * h.grad_norm_sq().integral(),
        tracefree: 0.5 * gap.map(|d| d * d).expect("finite").integral(),
        gauss,
        position,
        rho1,
        rho2,
    }
}

/// `(1/16π)(∫H dμ)² − |M|` from the principal radii against
/// `½∫|∇h|² dσ − ∫(h − h̄)² dσ` from `h` alone.
pub fn deficit_identity_check(h: &SupportField, tol: f64) -> InequalityReport {
    let (rho1, rho2) = principal_radii(h);
    let mean_curvature = rho1
        .zip_with(&rho2, |a, b| a + b)
        .expect("same grid")
        .integral();
    let area = rho1
        .zip_with(&rho2, |a, b| a * b)
        .expect("same grid")
        .integral();
    let lhs = mean_curvature * mean_curvature / (16.0 * PI) - area;
    let mean = h.h.mean();
    let dirichlet = 0.5 * h.grad_norm_sq().integral();
    let variance = h.h.map(|v| (v - mean).powi(2)).expect("finite").integral();
    let rhs = dirichlet - variance;
    // both sides are differences of terms of size |M|
    let scale = lhs.abs().max(rhs.abs()).max(1e-4 * area);
    InequalityReport::new(
        "minkowski_deficit_identity",
        Relation::Identity,
        lhs,
        rhs,
        scale,
        resolution(h.grid()),
        tol,
    )
    .with("integral_mean_curvature", mean_curvature)
    .with("area", area)
    .with("dirichlet_half", dirichlet)
    .with("variance", variance)
}

/// Focal maps `b_i = f − ρ_i z` and their oriented volumes.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalData {
    pub b1: SphereMap,
    pub b2: SphereMap,
    pub volume1: f64,
    pub volume2: f64,
}

pub fn focal_maps(h: &SupportField) -> FocalData {
    let (rho1, rho2) = principal_radii(h);
    let f = h.position();
    let b1 = f
        .normal_graph(&rho1.map(|v| -v).expect("finite"))
        .expect("same grid");
    let b2 = f
        .normal_graph(&rho2.map(|v| -v).expect("finite"))
        .expect("same grid");
    FocalData {
        volume1: oriented_volume(&b1),
        volume2: oriented_volume(&b2),
        b1,
        b2,
    }
}

/// `V[b₁] − V[b₂]` against `(1/6)∫(ρ₁ − ρ₂)³ dσ`. Agreement is required to
/// `tol` relative, plus `1e-12·|V[f]|` to absorb roundoff when both vanish.
pub fn focal_volume_identity(h: &SupportField, tol: f64) -> InequalityReport {
    let focal = focal_maps(h);
    let gap = radius_gap(h);
    let lhs = focal.volume1 - focal.volume2;
    let rhs = gap.map(|d| d.powi(3)).expect("finite").integral() / 6.0;
    let volume = oriented_volume(&h.position());
    let scale = lhs.abs().max(rhs.abs()) + 1e-12 * volume.abs() / tol;
    let mut report = InequalityReport::new(
        "focal_volume_identity",
        Relation::Identity,
        lhs,
        rhs,
        scale,
        resolution(h.grid()),
        tol,
    )
    .with("volume_b1", focal.volume1)
    .with("volume_b2", focal.volume2)
    .with("volume", volume)
    .with("min_radius_gap", gap.min())
    .with("max_radius_gap", gap.max());
    report.check(lhs >= -1e-10 * scale.max(volume.abs()), || {
        format!("focal volume difference {lhs:e} is negative")
    });
    report
}

/// `V[f + u z]` by the normal-graph series
/// `V[f] + ∫(u ρ₁ρ₂ + ½(ρ₁ + ρ₂)u² + ⅓u³) dσ`.
pub fn normal_graph_volume_series(h: &SupportField, u: &SphereScalarField) -> Result<f64> {
    if u.grid() != h.grid() {
        return Err(Error::GridMismatch);
    }
    let (rho1, rho2) = principal_radii(h);
    let base =
        h.h.values()
            .iter()
            .zip(rho1.values().iter().zip(rho2.values()))
            .map(|(h, (a, b))| h * a * b / 3.0)
            .collect();
    let series = u
        .values()
        .iter()
        .zip(rho1.values().iter().zip(rho2.values()))
        .map(|(u, (a, b))| u * a * b + 0.5 * (a + b) * u * u + u * u * u / 3.0)
        .collect();
    let integral = |v: Vec<f64>| SphereScalarField::new(h.grid().clone(), v).map(|f| f.integral());
    Ok(integral(base)? + integral(series)?)
}

/// The series value against the direct pullback volume of `f + u z`.
pub fn normal_graph_volume_check(
    h: &SupportField,
    u: &SphereScalarField,
    tol: f64,
) -> Result<InequalityReport> {
    let series = normal_graph_volume_series(h, u)?;
    let direct = oriented_volume(&h.position().normal_graph(u)?);
    Ok(InequalityReport::new(
        "normal_graph_volume",
        Relation::Identity,
        series,
        direct,
        series.abs().max(direct.abs()),
        resolution(h.grid()),
        tol,
    )
    .with("series", series)
    .with("pullback", direct))
}

/// The chain `0 ≤ deficit ≤ bound1 ≤ bound2` for one surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceReport {
    /// `(∫H dμ)² − 16π|M|`.
    pub deficit: f64,
    /// `(8π/3) ∫|A°|²/𝒦 dμ`.
    pub bound1: f64,
    /// `(8π/3)(4π)^{1/3}(∫|A°|³/𝒦² dμ)^{2/3}`.
    pub bound2: f64,
    /// `bound2` with the cubic integral replaced by `(3/√2)(V[b₁] − V[b₂])`.
    pub bound2_focal: f64,
    /// `(4π)^{1/3}(∫|A°|³/𝒦² dμ)^{2/3}`.
    pub holder_intermediate: f64,
    pub geometry: SurfaceGeometry,
    /// lhs = deficit, rhs = bound1; the remaining links are extra checks.
    pub report: InequalityReport,
}

pub fn reverse_minkowski_report(h: &SupportField, tol: f64) -> SurfaceReport {
    let geometry = surface_from_support(h);
    let gap = radius_gap(h);
    let cubic = gap.map(|d| d.powi(3)).expect("finite").integral() / (2.0 * 2f64.sqrt());
    let focal = focal_maps(h);
    let focal_cubic = (3.0 / 2f64.sqrt()) * (focal.volume1 - focal.volume2);
    let ih = geometry.integral_mean_curvature;
    let deficit = ih * ih - 16.0 * PI * geometry.area;
    let bound1 = 8.0 * PI / 3.0 * geometry.tracefree;
    let holder_intermediate = (4.0 * PI).cbrt() * cubic.powf(2.0 / 3.0);
    let bound2 = 8.0 * PI / 3.0 * holder_intermediate;
    let bound2_focal = 8.0 * PI / 3.0 * (4.0 * PI).cbrt() * focal_cubic.max(0.0).powf(2.0 / 3.0);
    let scale = ih * ih;
    let mut report = InequalityReport::new(
        "reverse_minkowski",
        Relation::Inequality,
        deficit,
        bound1,
        scale,
        resolution(h.grid()),
        tol,
    )
    .with("integral_mean_curvature", ih)
    .with("area", geometry.area)
    .with("tracefree", geometry.tracefree)
    .with("gauss", geometry.gauss)
    .with("cubic_tracefree", cubic)
    .with("holder_intermediate", holder_intermediate)
    .with("deficit", deficit)
    .with("bound1", bound1)
    .with("bound2", bound2)
    .with("focal_volume_difference", focal.volume1 - focal.volume2)
    .with("bound2_focal", bound2_focal);
    report.equality =
        deficit.abs() <= tol * scale && bound1.abs() <= tol * scale && bound2.abs() <= tol * scale;
    report.check(deficit >= -tol * scale, || {
        format!("Minkowski deficit {deficit:e} is negative")
    });
    report.check(bound1 <= bound2 * (1.0 + 1e-8) + tol * scale, || {
        format!("tracefree bound {bound1:e} exceeds the cubic bound {bound2:e}")
    });
    report.check((geometry.gauss - 4.0 * PI).abs() <= 1e-8 * 4.0 * PI, || {
        format!("total Gauss curvature {:e} differs from 4π", geometry.gauss)
    });
    SurfaceReport {
        deficit,
        bound1,
        bound2,
        bound2_focal,
        holder_intermediate,
        geometry,
        report,
    }
}
