//! Convex curves on the unit sphere.
//!
//! A curve is stored as unit vectors at uniform parameter nodes; derivatives
//! come from the trigonometric interpolant of each coordinate, so no arclength
//! reparametrization is needed. With `t = γ_s` and `η = γ × t` the frame
//! equations are `t_s = −γ + k_g η`, `η_s = −k_g t`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::plane::PlanarFront;
use crate::report::{InequalityReport, Relation, Resolution};
use crate::spectral::{compensated_sum, PeriodicSamples};

/// Samples whose norm differs from 1 by more than this are rejected.
pub const UNIT_TOL: f64 = 1e-12;
/// Geodesic curvature at or below this is not strictly convex.
pub const CONVEXITY_FLOOR: f64 = 1e-9;
/// `var(k_g) / mean(1 + k_g²)` below this classifies a geodesic circle.
pub const CIRCLE_THRESHOLD: f64 = 1e-10;

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    norm([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

/// Closed, approximately simple curve of unit vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCurve {
    points: Vec<[f64; 3]>,
}

impl SphericalCurve {
    pub fn new(points: Vec<[f64; 3]>) -> Result<Self> {
        let n = points.len();
        if n < 8 || n % 2 != 0 {
            return Err(Error::BadSampleCount(n));
        }
        if let Some(k) = points.iter().position(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite(k));
        }
        let off: Vec<(usize, f64)> = points
            .iter()
            .enumerate()
            .map(|(k, &p)| (k, norm(p) - 1.0))
            .filter(|(_, e)| e.abs() > UNIT_TOL)
            .collect();
        if let Some(&(first, value)) = off.first() {
            return Err(Error::Invalid {
                what: "spherical curve",
                condition: "unit norm",
                count: off.len(),
                first,
                value,
            });
        }
        check_simple(&points)?;
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Applies a linear map (a rotation) to every sample.
    pub fn transformed(&self, m: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(
            self.points
                .iter()
                .map(|&p| std::array::from_fn(|r| dot(m[r], p)))
                .collect(),
        )
    }

    fn component(&self, c: usize) -> PeriodicSamples {
        PeriodicSamples::new(self.points.iter().map(|p| p[c]).collect()).expect("validated")
    }
}

/// Whether the short great-circle arcs `ab` and `cd` cross.
fn arcs_cross(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> bool {
    let n1 = cross(a, b);
    let n2 = cross(c, d);
    let sum = |p: [f64; 3], q: [f64; 3]| [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
    dot(c, n1) * dot(d, n1) < 0.0
        && dot(a, n2) * dot(b, n2) < 0.0
        && dot(sum(a, b), sum(c, d)) > 0.0
}

/// The polygon of great-circle arcs through the samples must not cross
/// itself, and no two samples may coincide.
fn check_simple(points: &[[f64; 3]]) -> Result<()> {
    let n = points.len();
    let arc = |i: usize| (points[i], points[(i + 1) % n]);
    if (0..n).any(|i| dist(arc(i).0, arc(i).1) > 1.9) {
        return Err(Error::Domain(
            "spherical curve has samples more than a hemisphere apart".into(),
        ));
    }
    let bad: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 2..n).filter_map(move |j| {
                if i == 0 && j == n - 1 {
                    return None;
                }
                let ((a, b), (c, d)) = (arc(i), arc(j));
                (dist(a, c) < 1e-12 || arcs_cross(a, b, c, d)).then_some((i, j))
            })
        })
        .collect();
    match bad.first() {
        Some(&(i, j)) => Err(Error::Domain(format!(
            "spherical curve is not simple: segments {i} and {j} meet ({} crossing pairs)",
            bad.len()
        ))),
        None => Ok(()),
    }
}

/// Central projection of the plane `z = height` onto the sphere.
pub fn gnomonic_lift(planar: &PlanarFront, height: f64) -> Result<SphericalCurve> {
    if !(height.is_finite() && height > 0.0) {
        return Err(Error::Domain(format!(
            "gnomonic height must be positive, got {height}"
        )));
    }
    let limit = height * (0.45 * PI).tan();
    let radius = planar
        .points()
        .map(|p| p[0].hypot(p[1]))
        .fold(0.0, f64::max);
    if radius >= limit {
        return Err(Error::Domain(format!(
            "planar curve reaches radius {radius}, outside the disc of radius {limit} that stays in the hemisphere"
        )));
    }
    SphericalCurve::new(
        planar
            .points()
            .map(|[x, y]| {
                let r = (x * x + y * y + height * height).sqrt();
                [x / r, y / r, height / r]
            })
            .collect(),
    )
}

/// Orthonormal frame, geodesic curvature and arclength weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFrame {
    pub points: Vec<[f64; 3]>,
    pub tangent: Vec<[f64; 3]>,
    pub conormal: Vec<[f64; 3]>,
    /// Geodesic curvature at every node.
    pub k_g: PeriodicSamples,
    /// `|γ_u|`.
    pub speed: PeriodicSamples,
    /// Euclidean curvature of the space curve, `|γ_u × γ_uu| / |γ_u|³`.
    pub euclidean_curvature: Vec<f64>,
}

impl CurveFrame {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Trapezoid weights `|γ_u| · 2π/n`.
    pub fn ds(&self) -> Vec<f64> {
        let du = 2.0 * PI / self.len() as f64;
        self.speed.values().iter().map(|v| v * du).collect()
    }

    /// `∫ f ds`.
    fn integrate(&self, f: impl Fn(usize) -> f64) -> f64 {
        let du = 2.0 * PI / self.len() as f64;
        du * compensated_sum((0..self.len()).map(|j| f(j) * self.speed.values()[j]))
    }

    /// `k_g` differentiated in arclength.
    pub fn k_g_s(&self) -> PeriodicSamples {
        let dk = self.k_g.derivative(1).expect("valid samples");
        dk.zip_with(&self.speed, |d, v| d / v).expect("same length")
    }

    /// Largest |(γ,t,η)ᵀ(γ,t,η) − I| entry.
    pub fn orthonormality_defect(&self) -> f64 {
        (0..self.len())
            .map(|j| {
                let f = [self.points[j], self.tangent[j], self.conormal[j]];
                let mut worst: f64 = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        let target = if a == b { 1.0 } else { 0.0 };
                        worst = worst.max((dot(f[a], f[b]) - target).abs());
                    }
                }
                worst
            })
            .fold(0.0, f64::max)
    }
}

pub fn frame_and_curvature(curve: &SphericalCurve) -> Result<CurveFrame> {
    let comps: Vec<PeriodicSamples> = (0..3).map(|c| curve.component(c)).collect();
    let d1: Vec<PeriodicSamples> = comps
        .iter()
        .map(|c| c.derivative(1))
        .collect::<Result<_>>()?;
    let d2: Vec<PeriodicSamples> = comps
        .iter()
        .map(|c| c.derivative(2))
        .collect::<Result<_>>()?;
    let n = curve.len();
    let at =
        |f: &[PeriodicSamples], j: usize| -> [f64; 3] { std::array::from_fn(|c| f[c].values()[j]) };
    let mut tangent = Vec::with_capacity(n);
    let mut conormal = Vec::with_capacity(n);
    let mut k_g = Vec::with_capacity(n);
    let mut speed = Vec::with_capacity(n);
    let mut euclidean_curvature = Vec::with_capacity(n);
    for j in 0..n {
        let (g, g1, g2) = (curve.points[j], at(&d1, j), at(&d2, j));
        let v = norm(g1);
        if v == 0.0 {
            return Err(Error::Domain(format!("curve is singular at sample {j}")));
        }
        let t = g1.map(|c| c / v);
        let eta = cross(g, t);
        tangent.push(t);
        conormal.push(eta);
        k_g.push(dot(g2, eta) / (v * v));
        speed.push(v);
        euclidean_curvature.push(norm(cross(g1, g2)) / (v * v * v));
    }
    let low: Vec<(usize, f64)> = k_g
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, k)| k.is_nan() || k <= CONVEXITY_FLOOR)
        .collect();
    if let Some(&(first, value)) = low.first() {
        return Err(Error::Invalid {
            what: "geodesic curvature",
            condition: "strict convexity k_g > 0",
            count: low.len(),
            first,
            value,
        });
    }
    Ok(CurveFrame {
        points: curve.points.clone(),
        tangent,
        conormal,
        k_g: PeriodicSamples::new(k_g)?,
        speed: PeriodicSamples::new(speed)?,
        euclidean_curvature,
    })
}

/// Length, enclosed area and total geodesic curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthArea {
    pub length: f64,
    /// `2π − K_γ` by Gauss–Bonnet.
    pub area: f64,
    pub total_curvature: f64,
}

impl LengthArea {
    /// The spherical isoperimetric inequality `A(4π − A) ≤ L²`.
    pub fn space_form_report(&self, n: usize, tol: f64) -> InequalityReport {
        let lhs = self.area * (4.0 * PI - self.area);
        let rhs = self.length * self.length;
        InequalityReport::new(
            "spherical_isoperimetric",
            Relation::Inequality,
            lhs,
            rhs,
            rhs.max(4.0 * PI * PI),
            Resolution::Curve { n },
            tol,
        )
        .with("length", self.length)
        .with("area", self.area)
        .with("total_geodesic_curvature", self.total_curvature)
    }
}

pub fn length_area(frame: &CurveFrame) -> Result<LengthArea> {
    let length = frame.integrate(|_| 1.0);
    let total_curvature = frame.integrate(|j| frame.k_g.values()[j]);
    let area = 2.0 * PI - total_curvature;
    if !(area > 0.0 && area < 2.0 * PI) {
        return Err(Error::Domain(format!(
            "enclosed area {area} outside (0, 2π): orientation or convexity failure"
        )));
    }
    Ok(LengthArea {
        length,
        area,
        total_curvature,
    })
}

/// `𝓡 = ∬ (k(s) − k(σ))² / (√((1+k(s)²)(1+k(σ)²)) + 1 + k(s)k(σ)) ds dσ`.
///
/// Rows are summed in parallel and combined in index order, so the result is
/// independent of the thread count.
pub fn remainder_functional(frame: &CurveFrame) -> f64 {
    let k = frame.k_g.values();
    let w = frame.ds();
    let rows: Vec<f64> = (0..k.len())
        .into_par_iter()
        .map(|i| {
            let a = k[i];
            let ra = (1.0 + a * a).sqrt();
            w[i] * compensated_sum((0..k.len()).map(|j| {
                let b = k[j];
                w[j] * (a - b) * (a - b) / (ra * (1.0 + b * b).sqrt() + 1.0 + a * b)
            }))
        })
        .collect();
    compensated_sum(rows)
}

/// Every functional in the sharpened spherical isoperimetric identity.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereCurveReport {
    pub length: f64,
    pub area: f64,
    pub total_curvature: f64,
    /// `J = ∫ √(1 + k_g²) ds`.
    pub j: f64,
    pub remainder: f64,
    /// Lower bound for the remainder from the oscillation of `k_g`.
    pub oscillation_bound: f64,
    /// `var(k_g) / mean(1 + k_g²)` in arclength.
    pub circle_statistic: f64,
    /// lhs = `L² − A(4π − A)`, rhs = `J² − 4π²`; equality flags a geodesic circle.
    pub report: InequalityReport,
}

impl SphereCurveReport {
    /// `lhs − (rhs − 𝓡)`.
    pub fn identity_residual(&self) -> f64 {
        self.report.lhs - (self.report.rhs - self.remainder)
    }
}

pub fn reverse_iso_identity_report(curve: &SphericalCurve, tol: f64) -> Result<SphereCurveReport> {
    let frame = frame_and_curvature(curve)?;
    let la = length_area(&frame)?;
    let k = frame.k_g.values();
    let j = frame.integrate(|i| (1.0 + k[i] * k[i]).sqrt());
    let remainder = remainder_functional(&frame);
    let (length, area, total) = (la.length, la.area, la.total_curvature);
    let lhs = length * length - area * (4.0 * PI - area);
    let rhs = j * j - 4.0 * PI * PI;
    let scale = (length * length).max(4.0 * PI * PI);

    let mean_k = total / length;
    let oscillation = frame.integrate(|i| (k[i] - mean_k).powi(2));
    let sup = frame
        .k_g
        .resample(4 * frame.len())?
        .values()
        .iter()
        .fold(0.0, |m: f64, v| m.max(v.abs()));
    let oscillation_bound = 2.0 * length / (2.0 * (1.0 + sup * sup)) * oscillation;
    let circle_statistic =
        (oscillation / length) / (frame.integrate(|i| 1.0 + k[i] * k[i]) / length);
    let single = j * j - length * length - total * total;

    let mut report = InequalityReport::new(
        "spherical_reverse_isoperimetric",
        Relation::Inequality,
        lhs,
        rhs,
        scale,
        Resolution::Curve { n: curve.len() },
        tol,
    )
    .with("length", length)
    .with("area", area)
    .with("total_geodesic_curvature", total)
    .with("j", j)
    .with("remainder", remainder)
    .with("remainder_single_integral", single)
    .with("oscillation_bound", oscillation_bound)
    .with("k_g_sup", sup)
    .with("circle_statistic", circle_statistic);
    report.equality = circle_statistic < CIRCLE_THRESHOLD;
    let residual = lhs - (rhs - remainder);
    report.check(residual.abs() <= tol * scale, || {
        format!(
            "identity residual {residual:e}: L = {length:e}, A = {area:e}, K = {total:e}, J = {j:e}, R = {remainder:e}"
        )
    });
    report.check(remainder >= -1e-12 * scale, || {
        format!("remainder {remainder:e} is negative")
    });
    report.check(
        (remainder - single).abs() <= 1e-8 * remainder.abs().max(single.abs()) + 1e-13 * j * j,
        || format!("remainder {remainder:e} disagrees with J² − L² − K² = {single:e}"),
    );
    report.check(remainder >= oscillation_bound - 1e-9 * scale, || {
        format!("remainder {remainder:e} below the oscillation bound {oscillation_bound:e}")
    });
    report.check(lhs >= -1e-9 * scale, || {
        format!("spherical isoperimetric deficit {lhs:e} is negative")
    });
    Ok(SphereCurveReport {
        length,
        area,
        total_curvature: total,
        j,
        remainder,
        oscillation_bound,
        circle_statistic,
        report,
    })
}

/// The spherical evolute `ℰ = (k_g γ + η)/√(1 + k_g²)`, a front on S².
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalEvolute {
    pub points: Vec<[f64; 3]>,
    /// `|ℰ_s| = |k_g'| / (1 + k_g²)`.
    pub speed: Vec<f64>,
    /// Parameters in `[0, 2π)` where `k_g'` changes sign.
    pub cusps: Vec<f64>,
}

pub fn spherical_evolute(frame: &CurveFrame) -> SphericalEvolute {
    let k = frame.k_g.values();
    let ks = frame.k_g_s();
    let points = (0..frame.len())
        .map(|j| {
            let r = (1.0 + k[j] * k[j]).sqrt();
            std::array::from_fn(|c| (k[j] * frame.points[j][c] + frame.conormal[j][c]) / r)
        })
        .collect();
    let speed = ks
        .values()
        .iter()
        .zip(k)
        .map(|(d, k)| d.abs() / (1.0 + k * k))
        .collect();
    SphericalEvolute {
        points,
        speed,
        cusps: cusps(frame, &ks),
    }
}

/// Sign changes of `dk_g/du`, refined by bisection on its interpolant.
fn cusps(frame: &CurveFrame, ks: &PeriodicSamples) -> Vec<f64> {
    let k_max = frame.k_g.max().abs().max(frame.k_g.min().abs());
    let ks_max = ks.max().abs().max(ks.min().abs());
    if ks_max < 1e-9 * (1.0 + k_max) {
        return Vec::new();
    }
    let du = frame.k_g.derivative(1).expect("valid samples");
    let coeffs = du.analyze();
    let n = du.len();
    let v = du.values();
    let mut out = Vec::new();
    for j in 0..n {
        let (a, b) = (v[j], v[(j + 1) % n]);
        if a == 0.0 {
            out.push(du.node(j));
            continue;
        }
        if a * b < 0.0 {
            let (mut lo, mut hi) = (du.node(j), du.node(j) + 2.0 * PI / n as f64);
            let fa = a;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if coeffs.eval(mid) * fa > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push((0.5 * (lo + hi)).rem_euclid(2.0 * PI));
        }
    }
    out
}
