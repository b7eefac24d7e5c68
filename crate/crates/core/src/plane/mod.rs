//! Curves in a smooth Minkowski plane, described by support functions.
//!
//! Both the curve's Euclidean support function `p` and the norm profile `h`
//! are sampled at the same outward normal angles `θ_j`. The unit tangent and
//! inward normal there are `τ = (−sin θ, cos θ)` and `n = −(cos θ, sin θ)`; the
//! Minkowski normal is `N = −h_θ τ + h n` and the Minkowski arclength is
//! `dσ = h (p'' + p) dθ`. With these choices the Minkowski curvature is
//! `κ = (h'' + h)/(p'' + p)` and the isoperimetrix is the curve `θ ↦ N(θ)`.

mod front;
mod profile;

use std::f64::consts::PI;

pub use front::{signed_area, PlanarFront};
pub use profile::{NormProfile, SupportProfile, CONVEXITY_FLOOR, SYMMETRY_TOL};

use crate::error::{Error, Result};
use crate::report::{InequalityReport, Relation, Resolution};
use crate::spectral::PeriodicSamples;

fn same_len(p: &SupportProfile, h: &NormProfile) -> Result<()> {
    if p.len() != h.len() {
        return Err(Error::LengthMismatch(p.len(), h.len()));
    }
    Ok(())
}

fn samples(values: Vec<f64>) -> PeriodicSamples {
    PeriodicSamples::new(values).expect("derived from validated samples")
}

/// Curve `γ = p (cos θ, sin θ) + p_θ (−sin θ, cos θ)`.
pub fn curve_from_support(p: &SupportProfile) -> PlanarFront {
    let (v, d) = (p.p().values(), p.p_theta().values());
    let (x, y) = p
        .p()
        .nodes()
        .enumerate()
        .map(|(j, t)| {
            let (s, c) = t.sin_cos();
            (v[j] * c - d[j] * s, v[j] * s + d[j] * c)
        })
        .unzip();
    PlanarFront::new(samples(x), samples(y), true).expect("same length")
}

/// Minkowski normal `N(θ) = −(h e_θ + h_θ e_θ^⊥)` at every node.
fn minkowski_normal(h: &NormProfile) -> (Vec<f64>, Vec<f64>) {
    let (v, d) = (h.h().values(), h.h_theta().values());
    h.h()
        .nodes()
        .enumerate()
        .map(|(j, t)| {
            let (s, c) = t.sin_cos();
            (-(v[j] * c - d[j] * s), -(v[j] * s + d[j] * c))
        })
        .unzip()
}

/// Minkowski arclength density `h (p'' + p)` with respect to `dθ`.
fn arclength_density(p: &SupportProfile, h: &NormProfile) -> PeriodicSamples {
    h.h()
        .zip_with(&p.radius(), |a, b| a * b)
        .expect("same length")
}

/// `𝓛(γ) = ∫ h (p'' + p) dθ`.
pub fn minkowski_length(p: &SupportProfile, h: &NormProfile) -> Result<f64> {
    same_len(p, h)?;
    Ok(arclength_density(p, h).integral())
}

/// `κ = (h'' + h)/(p'' + p)`.
pub fn minkowski_curvature(p: &SupportProfile, h: &NormProfile) -> Result<PeriodicSamples> {
    same_len(p, h)?;
    h.radius().zip_with(&p.radius(), |a, b| a / b)
}

/// The isoperimetrix `θ ↦ N(θ)`.
pub fn isoperimetrix(h: &NormProfile) -> PlanarFront {
    let (x, y) = minkowski_normal(h);
    PlanarFront::new(samples(x), samples(y), true).expect("same length")
}

/// Normal graph `γ + φ N`; a front in general.
pub fn normal_graph(
    p: &SupportProfile,
    h: &NormProfile,
    phi: &PeriodicSamples,
) -> Result<PlanarFront> {
    same_len(p, h)?;
    if phi.len() != p.len() {
        return Err(Error::LengthMismatch(phi.len(), p.len()));
    }
    let gamma = curve_from_support(p);
    let (nx, ny) = minkowski_normal(h);
    let f = phi.values();
    let x = (0..p.len())
        .map(|j| gamma.x().values()[j] + f[j] * nx[j])
        .collect();
    let y = (0..p.len())
        .map(|j| gamma.y().values()[j] + f[j] * ny[j])
        .collect();
    PlanarFront::new(samples(x), samples(y), false)
}

/// Minkowski evolute `e = γ + κ^{-1} N`.
pub fn minkowski_evolute(p: &SupportProfile, h: &NormProfile) -> Result<PlanarFront> {
    let kappa = minkowski_curvature(p, h)?;
    normal_graph(p, h, &kappa.map(|k| 1.0 / k)?)
}

/// Support function `q(α) = max_θ ⟨ℐ(θ), (cos α, sin α)⟩` of the isoperimetrix,
/// sampled on `n` nodes. Dense search on an 8× oversampled trace, then golden
/// section on the trigonometric interpolant.
pub fn isoperimetrix_support(h: &NormProfile, n: usize) -> Result<PeriodicSamples> {
    let dense_n = 8 * h.len();
    let coeffs = h.h().analyze();
    let dcoeffs = h.h_theta().analyze();
    let point = |t: f64| -> [f64; 2] {
        let (hv, dv) = (coeffs.eval(t), dcoeffs.eval(t));
        let (s, c) = t.sin_cos();
        [-(hv * c - dv * s), -(hv * s + dv * c)]
    };
    let dense: Vec<[f64; 2]> = (0..dense_n)
        .map(|j| point(2.0 * PI * j as f64 / dense_n as f64))
        .collect();
    let step = 2.0 * PI / dense_n as f64;
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    PeriodicSamples::from_fn(n, |alpha| {
        let dir = [alpha.cos(), alpha.sin()];
        let proj = |q: [f64; 2]| q[0] * dir[0] + q[1] * dir[1];
        let best = (0..dense_n)
            .max_by(|&a, &b| proj(dense[a]).total_cmp(&proj(dense[b])))
            .expect("nonempty");
        let f = |t: f64| proj(point(t));
        let (mut lo, mut hi) = ((best as f64 - 1.0) * step, (best as f64 + 1.0) * step);
        let mut x1 = hi - golden * (hi - lo);
        let mut x2 = lo + golden * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        while hi - lo > 1e-10 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + golden * (hi - lo);
                f2 = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - golden * (hi - lo);
                f1 = f(x1);
            }
        }
        f1.max(f2).max(proj(dense[best]))
    })
}

/// `∫_γ κ dσ` against `2𝒜(ℐ)`.
pub fn total_curvature_identity(
    p: &SupportProfile,
    h: &NormProfile,
    tol: f64,
) -> Result<InequalityReport> {
    let kappa = minkowski_curvature(p, h)?;
    let total = kappa
        .zip_with(&arclength_density(p, h), |k, d| k * d)?
        .integral();
    let iso = isoperimetrix(h).signed_area();
    let scale = total.abs().max(2.0 * iso.abs());
    Ok(InequalityReport::new(
        "total_curvature_identity",
        Relation::Identity,
        total,
        2.0 * iso,
        scale,
        Resolution::Circle { n: p.len() },
        tol,
    )
    .with("total_curvature", total)
    .with("area_isoperimetrix", iso))
}

/// Signed area of `γ + φN`, directly and via
/// `𝒜(γ) + ½∫κ(φ − κ^{-1})² dσ − ½∫κ^{-1} dσ`, plus the lower bound
/// `𝒜(γ + φN) ≥ 𝒜(γ) − ½∫κ^{-1} dσ`.
pub fn normal_graph_area(
    p: &SupportProfile,
    h: &NormProfile,
    phi: &PeriodicSamples,
    tol: f64,
) -> Result<InequalityReport> {
    let direct = normal_graph(p, h, phi)?.signed_area();
    let area = curve_from_support(p).signed_area();
    let kappa = minkowski_curvature(p, h)?;
    let density = arclength_density(p, h);
    let square = samples(
        (0..p.len())
            .map(|j| {
                let k = kappa.values()[j];
                k * (phi.values()[j] - 1.0 / k).powi(2) * density.values()[j]
            })
            .collect(),
    )
    .integral();
    let inverse = kappa.zip_with(&density, |k, d| d / k)?.integral();
    let formula = area + 0.5 * square - 0.5 * inverse;
    let bound = area - 0.5 * inverse;
    let scale = direct
        .abs()
        .max(formula.abs())
        .max(area.abs())
        .max(0.5 * inverse);
    let mut report = InequalityReport::new(
        "normal_graph_area",
        Relation::Identity,
        direct,
        formula,
        scale,
        Resolution::Circle { n: p.len() },
        tol,
    )
    .with("area_direct", direct)
    .with("area_formula", formula)
    .with("area_curve", area)
    .with("square_term", 0.5 * square)
    .with("inverse_curvature_term", 0.5 * inverse)
    .with("lower_bound", bound);
    report.check(direct >= bound - tol * scale, || {
        format!("graph area {direct:e} below the evolute bound {bound:e}")
    });
    Ok(report)
}

/// Functionals entering the reverse isoperimetric comparison for one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneReport {
    /// Minkowski length 𝓛 (Euclidean length for the Hurwitz report).
    pub length: f64,
    pub area_curve: f64,
    pub area_isoperimetrix: f64,
    pub area_evolute: f64,
    /// `𝓛² / (4 𝒜(γ) 𝒜(ℐ))`, at least 1.
    pub ratio: f64,
    pub report: InequalityReport,
}

impl PlaneReport {
    pub fn lhs(&self) -> f64 {
        self.report.lhs
    }

    pub fn rhs(&self) -> f64 {
        self.report.rhs
    }

    pub fn margin(&self) -> f64 {
        self.report.margin
    }

    pub fn equality(&self) -> bool {
        self.report.equality
    }
}

/// Shared bookkeeping: checks run against `length²`, the equality flag against
/// `max(|lhs|, |rhs|, 1)`.
fn plane_report(
    name: &str,
    lhs: f64,
    rhs: f64,
    length: f64,
    n: usize,
    tol: f64,
) -> InequalityReport {
    let check_scale = length * length;
    let mut report = InequalityReport::new(
        name,
        Relation::Inequality,
        lhs,
        rhs,
        check_scale,
        Resolution::Circle { n },
        tol,
    );
    report.equality = report.margin.abs() <= tol * lhs.abs().max(rhs.abs()).max(1.0);
    report.check(lhs >= -tol * check_scale, || {
        format!("isoperimetric deficit {lhs:e} is negative")
    });
    report
}

/// `0 ≤ 𝓛² − 4𝒜(γ)𝒜(ℐ) ≤ 4𝒜(ℐ)|𝒜(e)|`.
pub fn reverse_iso_report(p: &SupportProfile, h: &NormProfile, tol: f64) -> Result<PlaneReport> {
    let length = minkowski_length(p, h)?;
    let area_curve = curve_from_support(p).signed_area();
    let area_iso = isoperimetrix(h).signed_area();
    let area_evolute = minkowski_evolute(p, h)?.signed_area();
    let lhs = length * length - 4.0 * area_curve * area_iso;
    let rhs = 4.0 * area_iso * area_evolute.abs();
    let ratio = length * length / (4.0 * area_curve * area_iso);
    let mut report = plane_report(
        "reverse_isoperimetric_minkowski",
        lhs,
        rhs,
        length,
        p.len(),
        tol,
    )
    .with("minkowski_length", length)
    .with("area_curve", area_curve)
    .with("area_isoperimetrix", area_iso)
    .with("area_evolute", area_evolute)
    .with("isoperimetric_ratio", ratio);
    report.check(area_evolute <= tol * length * length, || {
        format!("evolute area {area_evolute:e} is positive")
    });
    Ok(PlaneReport {
        length,
        area_curve,
        area_isoperimetrix: area_iso,
        area_evolute,
        ratio,
        report,
    })
}

/// Euclidean `0 ≤ L² − 4πA ≤ π|A(e)|`, with the energy in Fourier modes ≥ 3
/// (zero exactly on the equality family).
pub fn hurwitz_report(p: &SupportProfile, tol: f64) -> Result<PlaneReport> {
    let length = p.p().integral();
    let area_curve = 0.5 * p.p().zip_with(&p.radius(), |a, b| a * b)?.integral();
    let evolute = minkowski_evolute(p, &NormProfile::euclidean(p.len())?)?;
    let area_evolute = evolute.signed_area();
    let area_formula = -0.5
        * p.p_theta_theta()
            .zip_with(&p.radius(), |a, b| a * b)?
            .integral();
    let lhs = length * length - 4.0 * PI * area_curve;
    let rhs = PI * area_evolute.abs();
    let coeffs = p.p().analyze();
    let high = coeffs.energy_from(3);
    // 0 when the modes >= 3 hold only roundoff
    let resolved = high > 1e-24 * (coeffs.a0 * coeffs.a0 + coeffs.energy_from(1));
    let dominant = (3..=coeffs.band())
        .filter(|_| resolved)
        .max_by(|&a, &b| {
            let e = |k: usize| coeffs.cos(k).powi(2) + coeffs.sin(k).powi(2);
            e(a).total_cmp(&e(b))
        })
        .map_or(0.0, |k| k as f64);
    let mut report = plane_report("hurwitz", lhs, rhs, length, p.len(), tol)
        .with("length", length)
        .with("area_curve", area_curve)
        .with("area_evolute", area_evolute)
        .with("area_evolute_formula", area_formula)
        .with("mode_energy_ge3", high)
        .with("dominant_high_mode", dominant);
    let scale = area_curve.abs().max(1e-300);
    report.check(
        (area_evolute - area_formula).abs() <= tol * scale.max(area_formula.abs()),
        || format!("evolute area {area_evolute:e} disagrees with −½∫p''(p''+p) = {area_formula:e}"),
    );
    Ok(PlaneReport {
        length,
        area_curve,
        area_isoperimetrix: PI,
        area_evolute,
        ratio: length * length / (4.0 * PI * area_curve),
        report,
    })
}
