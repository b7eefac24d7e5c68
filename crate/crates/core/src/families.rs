//! Seeded generators for the curve, norm and surface families used in tests,
//! sweeps and the command-line tool.
//!
//! Every generator draws from a [`ChaCha8Rng`] seeded with
//! `seed_from_u64(seed)`; coefficients are drawn uniformly in the stated
//! boxes in the order documented on each function and rejected until the
//! result validates, so a seed reproduces the same family on every platform.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::plane::{NormProfile, PlanarFront, SupportProfile};
use crate::spectral::{
    harmonic_sum, FourierCoefficients, PeriodicSamples, SphereGrid, SphereScalarField,
};
use crate::sphere_curve::{gnomonic_lift, SphericalCurve};
use crate::surface::SupportField;

/// Random number generator used by every family.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Series with `a0` and the listed `(k, a_k, b_k)` modes.
pub fn series(a0: f64, modes: &[(usize, f64, f64)]) -> FourierCoefficients {
    let len = modes.iter().map(|m| m.0).max().unwrap_or(0);
    let mut c = FourierCoefficients {
        a0,
        a: vec![0.0; len],
        b: vec![0.0; len],
        nyquist: 0.0,
    };
    for &(k, a, b) in modes {
        c.a[k - 1] += a;
        c.b[k - 1] += b;
    }
    c
}

/// `Σ (k² − 1)(|a_k| + |b_k|)`: below `a0` the support function is convex.
fn convexity_load(c: &FourierCoefficients) -> f64 {
    (1..=c.band())
        .map(|k| ((k * k) as f64 - 1.0) * (c.cos(k).abs() + c.sin(k).abs()))
        .sum()
}

/// Support function of the ellipse with semi-axes `a` (along x) and `b`.
pub fn ellipse_support(n: usize, a: f64, b: f64) -> Result<SupportProfile> {
    SupportProfile::from_fn(n, |t| {
        (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt()
    })
}

/// `p = 1 + a₁cos θ + b₁sin θ + a₂cos 2θ + b₂sin 2θ` with `a₁, b₁ ∈ [−0.5, 0.5]`
/// and `a₂, b₂ ∈ [−0.2, 0.2]`, drawn in that order; the equality family of the
/// Euclidean inequality.
pub fn hurwitz_equality(rng: &mut ChaCha8Rng) -> FourierCoefficients {
    loop {
        let a1 = rng.random_range(-0.5..0.5);
        let b1 = rng.random_range(-0.5..0.5);
        let a2 = rng.random_range(-0.2..0.2);
        let b2 = rng.random_range(-0.2..0.2);
        let c = series(1.0, &[(1, a1, b1), (2, a2, b2)]);
        if convexity_load(&c) < 0.9 {
            return c;
        }
    }
}

/// Equality-family draw plus a mode `k ∈ {3, …, 6}` with cosine and sine
/// amplitudes of magnitude in `[1e-3, 0.02]` and random signs.
pub fn hurwitz_strict(rng: &mut ChaCha8Rng) -> FourierCoefficients {
    loop {
        let mut c = hurwitz_equality(rng);
        let k = rng.random_range(3..=6usize);
        let mut amp = || {
            let m = rng.random_range(1e-3..0.02);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        };
        let (a, b) = (amp(), amp());
        c.a.resize(k, 0.0);
        c.b.resize(k, 0.0);
        c.a[k - 1] = a;
        c.b[k - 1] = b;
        if convexity_load(&c) < 0.9 {
            return c;
        }
    }
}

/// `p = 1 + Σ_{k=1}^{degree} a_k cos kθ + b_k sin kθ` with coefficients drawn
/// (cos then sin, by increasing `k`) in `[−0.4, 0.4]/k²`, rejected
/// until `Σ(k²−1)(|a_k|+|b_k|) < 0.9`.
pub fn random_support_series(rng: &mut ChaCha8Rng, degree: usize) -> FourierCoefficients {
    loop {
        let modes: Vec<(usize, f64, f64)> = (1..=degree)
            .map(|k| {
                let s = 0.4 / (k * k) as f64;
                (k, rng.random_range(-s..s), rng.random_range(-s..s))
            })
            .collect();
        let c = series(1.0, &modes);
        if convexity_load(&c) < 0.9 {
            return c;
        }
    }
}

/// Centrally symmetric norm profile `h = 1 + Σ_{k even ≤ degree}` with the
/// same drawing rule as [`random_support_series`] restricted to even `k`.
pub fn random_norm_series(rng: &mut ChaCha8Rng, degree: usize) -> FourierCoefficients {
    loop {
        let modes: Vec<(usize, f64, f64)> = (2..=degree)
            .step_by(2)
            .map(|k| {
                let s = 0.4 / (k * k) as f64;
                (k, rng.random_range(-s..s), rng.random_range(-s..s))
            })
            .collect();
        let c = series(1.0, &modes);
        if convexity_load(&c) < 0.9 {
            return c;
        }
    }
}

/// Samples a series as a support profile.
pub fn support_profile(c: &FourierCoefficients, n: usize) -> Result<SupportProfile> {
    SupportProfile::new(c.synthesize(n)?)
}

/// Samples a series as a norm profile.
pub fn norm_profile(c: &FourierCoefficients, n: usize) -> Result<NormProfile> {
    NormProfile::new(c.synthesize(n)?)
}

/// Band-limited `φ = Σ_{k=0}^{4} a_k cos kθ + b_k sin kθ`, coefficients in
/// `[−0.3, 0.3]` (cos then sin by increasing `k`).
pub fn random_phi(rng: &mut ChaCha8Rng, n: usize) -> Result<PeriodicSamples> {
    let a0 = rng.random_range(-0.3..0.3);
    let modes: Vec<(usize, f64, f64)> = (1..=4)
        .map(|k| (k, rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3)))
        .collect();
    series(a0, &modes).synthesize(n)
}

/// Legendre polynomial `P_ℓ(x)` for `ℓ ≤ 4`.
pub fn legendre(l: usize, x: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => x,
        2 => 0.5 * (3.0 * x * x - 1.0),
        3 => 0.5 * (5.0 * x * x * x - 3.0 * x),
        4 => (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0,
        _ => panic!("Legendre degree {l} not tabulated"),
    }
}

/// Spheroid with semi-axes `(1, 1, c)`: `h = √(sin²θ + c² cos²θ)`.
pub fn spheroid(grid: &Arc<SphereGrid>, c: f64) -> Result<SupportField> {
    SupportField::ellipsoid(grid, [1.0, 1.0, c])
}

/// Zonal perturbation `h = 1 + ε P₂ + δ₃ P₃ + δ₄ P₄` with `ε ∈ [0.02, 0.08]`
/// of random sign, `|δ₃| ≤ 0.1|ε|`, `|δ₄| ≤ 0.03|ε|` (drawn in that order).
///
/// The radius gap is then `sin²θ |h''(x)|` with `h''` of fixed sign, so the
/// only umbilics are the poles and the ordered principal radii are smooth.
pub fn zonal_perturbation(rng: &mut ChaCha8Rng, grid: &Arc<SphereGrid>) -> Result<SupportField> {
    let eps: f64 = rng.random_range(0.02..0.08) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let d3 = rng.random_range(-0.1..0.1) * eps.abs();
    let d4 = rng.random_range(-0.03..0.03) * eps.abs();
    SupportField::from_zonal_fn(grid, |t| {
        let x = t.cos();
        1.0 + eps * legendre(2, x) + d3 * legendre(3, x) + d4 * legendre(4, x)
    })
}

/// Harmonic coefficients `(ℓ, m, ε)` for `ℓ = 1..=4`, `|m| ≤ ℓ` in increasing
/// `(ℓ, m)` order, drawn in `[−1, 1]` and rescaled so that `Σ|ε| = s` with
/// `s` uniform in `(0, 0.05]`.
pub fn random_surface_terms(rng: &mut ChaCha8Rng) -> Vec<(usize, i64, f64)> {
    let mut terms: Vec<(usize, i64, f64)> = (1..=4usize)
        .flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m, 0.0)))
        .collect();
    for t in &mut terms {
        t.2 = rng.random_range(-1.0..1.0);
    }
    let total: f64 = terms.iter().map(|t| t.2.abs()).sum();
    let s = 0.05 * (1.0 - rng.random_range(0.0..1.0));
    for t in &mut terms {
        t.2 *= s / total;
    }
    terms
}

/// `h = 1 + Σ ε_ℓm Y_ℓm` from [`random_surface_terms`], redrawn until convex.
pub fn random_surface(rng: &mut ChaCha8Rng, grid: &Arc<SphereGrid>) -> Result<SupportField> {
    loop {
        let terms = random_surface_terms(rng);
        if let Ok(h) = SupportField::from_harmonics(grid, 1.0, &terms) {
            return Ok(h);
        }
    }
}

/// Smooth normal-graph displacement `u = Σ_{ℓ ≤ 3} c_ℓm Y_ℓm`, coefficients in
/// `[−0.05, 0.05]`.
pub fn random_displacement(
    rng: &mut ChaCha8Rng,
    grid: &Arc<SphereGrid>,
) -> Result<SphereScalarField> {
    let terms: Vec<(usize, i64, f64)> = (0..=3usize)
        .flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m)))
        .map(|(l, m)| (l, m, rng.random_range(-0.05..0.05)))
        .collect();
    harmonic_sum(grid, 0.0, &terms)
}

/// Planar curve with support function `p` traced on `n` nodes.
pub fn planar_curve(c: &FourierCoefficients, n: usize) -> Result<PlanarFront> {
    Ok(crate::plane::curve_from_support(&support_profile(c, n)?))
}

/// Gnomonic image (height 1) of an ellipse with semi-axes `a`, `b`, centred at
/// `(cx, cy)`, traced as `(cx + a cos u, cy + b sin u)`.
pub fn gnomonic_ellipse(n: usize, a: f64, b: f64, centre: [f64; 2]) -> Result<SphericalCurve> {
    let points: Vec<[f64; 2]> = (0..n)
        .map(|j| {
            let u = 2.0 * PI * j as f64 / n as f64;
            [centre[0] + a * u.cos(), centre[1] + b * u.sin()]
        })
        .collect();
    gnomonic_lift(&PlanarFront::from_points(&points, true)?, 1.0)
}

/// Gnomonic oval: a random degree-3 support curve scaled by `r ∈ [0.2, 0.6]`
/// and centred at a point of `[−0.4, 0.4]²` (drawn after the series, in the
/// order r, cx, cy), lifted at height 1.
pub fn gnomonic_oval(rng: &mut ChaCha8Rng, n: usize) -> Result<SphericalCurve> {
    let c = random_support_series(rng, 3);
    let r = rng.random_range(0.2..0.6);
    let cx = rng.random_range(-0.4..0.4);
    let cy = rng.random_range(-0.4..0.4);
    let curve = planar_curve(&c, n)?;
    let points: Vec<[f64; 2]> = curve
        .points()
        .map(|[x, y]| [cx + r * x, cy + r * y])
        .collect();
    gnomonic_lift(&PlanarFront::from_points(&points, true)?, 1.0)
}

/// Geodesic circle of angular radius `alpha` about the north pole.
pub fn geodesic_circle(n: usize, alpha: f64) -> Result<SphericalCurve> {
    SphericalCurve::new(
        (0..n)
            .map(|j| {
                let u = 2.0 * PI * j as f64 / n as f64;
                [alpha.sin() * u.cos(), alpha.sin() * u.sin(), alpha.cos()]
            })
            .collect(),
    )
}
