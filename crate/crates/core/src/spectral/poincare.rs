//! Spectral Poincaré gap on `S¹` and `S²`:
//! `0 <= (1/n)∫|∇f|² − ∫f² <= (1/(2(n+1)))((1/n)∫(Δf)² − ∫|∇f|²)` for mean-zero `f`.

use super::periodic::PeriodicSamples;
use super::sphere::SphereScalarField;
use crate::error::Result;
use crate::report::{InequalityReport, Relation, Resolution};

fn gap_report(
    dim: usize,
    mean: f64,
    l2: f64,
    dirichlet: f64,
    bilaplace: f64,
    resolution: Resolution,
    tol: f64,
) -> InequalityReport {
    let n = dim as f64;
    let middle = dirichlet / n - l2;
    let upper = (bilaplace / n - dirichlet) / (2.0 * (n + 1.0));
    let scale = middle
        .abs()
        .max(upper.abs())
        .max(dirichlet)
        .max(f64::MIN_POSITIVE);
    let mut report = InequalityReport::new(
        if dim == 1 {
            "poincare_gap_circle"
        } else {
            "poincare_gap_sphere"
        },
        Relation::Inequality,
        middle,
        upper,
        scale,
        resolution,
        tol,
    )
    .with("dimension", n)
    .with("removed_mean", mean)
    .with("lower", 0.0)
    .with("middle", middle)
    .with("upper", upper)
    .with("l2_norm_sq", l2)
    .with("dirichlet", dirichlet)
    .with("bilaplace", bilaplace);
    report.check(middle >= -tol * scale, || {
        format!("middle {middle:e} is negative: derivative operators are inconsistent")
    });
    report
}

/// Circle version (`n = 1`): `f'` and `f''` play the gradient and Laplacian.
pub fn poincare_gap_circle(f: &PeriodicSamples, tol: f64) -> Result<InequalityReport> {
    let mean = f.mean();
    let u = f.map(|v| v - mean)?;
    let d1 = u.derivative(1)?;
    let d2 = u.derivative(2)?;
    let sq = |g: &PeriodicSamples| g.map(|v| v * v).map(|s| s.integral());
    Ok(gap_report(
        1,
        mean,
        sq(&u)?,
        sq(&d1)?,
        sq(&d2)?,
        Resolution::Circle { n: f.len() },
        tol,
    ))
}

/// Sphere version (`n = 2`).
pub fn poincare_gap_sphere(f: &SphereScalarField, tol: f64) -> Result<InequalityReport> {
    let mean = f.mean();
    let u = f.map(|v| v - mean)?;
    let ops = u.operators();
    let l2 = u.map(|v| v * v)?.integral();
    let dirichlet = ops.grad_norm_sq().integral();
    let bilaplace = ops.laplacian.map(|v| v * v)?.integral();
    let g = f.grid();
    Ok(gap_report(
        2,
        mean,
        l2,
        dirichlet,
        bilaplace,
        Resolution::Sphere {
            n_theta: g.n_theta(),
            n_phi: g.n_phi(),
        },
        tol,
    ))
}
