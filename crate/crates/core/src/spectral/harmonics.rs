//! Real orthonormal spherical harmonics and quadrature projection.

use std::f64::consts::PI;
use std::sync::Arc;

use super::sphere::{SphereGrid, SphereScalarField};
use crate::error::{Error, Result};

/// Highest degree accepted by [`project_harmonic`].
pub const MAX_PROJECTION_DEGREE: usize = 6;

/// Degrees above this are rejected outright; factorial ratios stay exact in f64.
const MAX_DEGREE: usize = 20;

/// Associated Legendre function `P_l^m(x)` without the Condon–Shortley phase.
fn legendre(l: usize, m: usize, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= (2 * k + 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm2 = pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pm2) / (ll - m) as f64;
        pm2 = pm1;
        pm1 = next;
    }
    pm1
}

fn check(l: usize, m: i64) -> Result<()> {
    if l > MAX_DEGREE || m.unsigned_abs() as usize > l {
        return Err(Error::BadHarmonic {
            degree: l,
            order: m,
        });
    }
    Ok(())
}

/// Real harmonic `Y_lm(θ, φ)` normalised so that `∫ Y_lm² dσ = 1`.
///
/// `m > 0` carries `cos(mφ)`, `m < 0` carries `sin(|m|φ)`.
pub fn real_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Result<f64> {
    check(l, m)?;
    let am = m.unsigned_abs() as usize;
    let ratio: f64 = ((l - am + 1)..=(l + am))
        .map(|k| k as f64)
        .product::<f64>()
        .recip();
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    let p = legendre(l, am, theta.cos());
    Ok(match m {
        0 => norm * p,
        m if m > 0 => 2f64.sqrt() * norm * p * (am as f64 * phi).cos(),
        _ => 2f64.sqrt() * norm * p * (am as f64 * phi).sin(),
    })
}

/// `Y_lm` sampled on a grid.
pub fn harmonic_field(grid: &Arc<SphereGrid>, l: usize, m: i64) -> Result<SphereScalarField> {
    check(l, m)?;
    SphereScalarField::from_fn(grid, |t, p| real_harmonic(l, m, t, p).expect("checked"))
}

/// Coefficient `∫ f Y_lm dσ` for `l <= MAX_PROJECTION_DEGREE`.
pub fn project_harmonic(f: &SphereScalarField, l: usize, m: i64) -> Result<f64> {
    if l > MAX_PROJECTION_DEGREE {
        return Err(Error::BadHarmonic {
            degree: l,
            order: m,
        });
    }
    let y = harmonic_field(f.grid(), l, m)?;
    Ok(f.zip_with(&y, |a, b| a * b)?.integral())
}

/// Field `Σ c · Y_lm` from `(l, m, c)` triples.
pub fn harmonic_sum(
    grid: &Arc<SphereGrid>,
    constant: f64,
    terms: &[(usize, i64, f64)],
) -> Result<SphereScalarField> {
    for &(l, m, _) in terms {
        check(l, m)?;
    }
    SphereScalarField::from_fn(grid, |t, p| {
        constant
            + terms
                .iter()
                .map(|&(l, m, c)| c * real_harmonic(l, m, t, p).expect("checked"))
                .sum::<f64>()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormal_up_to_degree_six() {
        let g = SphereGrid::square(16).unwrap();
        let mut fields = Vec::new();
        for l in 0..=6usize {
            for m in -(l as i64)..=(l as i64) {
                fields.push(((l, m), harmonic_field(&g, l, m).unwrap()));
            }
        }
        for (ka, a) in &fields {
            for (kb, b) in &fields {
                let ip = a.zip_with(b, |x, y| x * y).unwrap().integral();
                let expected = if ka == kb { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-12, "{ka:?} {kb:?}: {ip}");
            }
        }
    }

    #[test]
    fn low_degree_closed_forms() {
        let (t, p) = (0.7, 1.3);
        let y10 = real_harmonic(1, 0, t, p).unwrap();
        assert!((y10 - (3.0 / (4.0 * PI)).sqrt() * t.cos()).abs() < 1e-15);
        let y11 = real_harmonic(1, 1, t, p).unwrap();
        assert!((y11 - (3.0 / (4.0 * PI)).sqrt() * t.sin() * p.cos()).abs() < 1e-15);
        let y20 = real_harmonic(2, 0, t, p).unwrap();
        let c = t.cos();
        assert!((y20 - (5.0 / (16.0 * PI)).sqrt() * (3.0 * c * c - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn harmonics_have_zero_mean() {
        let g = SphereGrid::square(12).unwrap();
        for l in 1..=4usize {
            for m in -(l as i64)..=(l as i64) {
                assert!(harmonic_field(&g, l, m).unwrap().integral().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn eigenvalues_of_laplacian() {
        let g = SphereGrid::square(24).unwrap();
        for l in 1..=6usize {
            for m in -(l as i64)..=(l as i64) {
                let y = harmonic_field(&g, l, m).unwrap();
                let lap = y.operators().laplacian;
                let lambda = (l * (l + 1)) as f64;
                let err = lap
                    .values()
                    .iter()
                    .zip(y.values())
                    .map(|(a, b)| (a + lambda * b).abs())
                    .fold(0.0, f64::max);
                assert!(err < 1e-9 * lambda, "l={l} m={m} err={err}");
            }
        }
    }

    #[test]
    fn projection_recovers_coefficients() {
        let g = SphereGrid::square(16).unwrap();
        let f = harmonic_sum(&g, 2.0, &[(2, 1, 0.3), (5, -4, -0.7)]).unwrap();
        assert!((project_harmonic(&f, 2, 1).unwrap() - 0.3).abs() < 1e-13);
        assert!((project_harmonic(&f, 5, -4).unwrap() + 0.7).abs() < 1e-13);
        assert!(project_harmonic(&f, 3, 0).unwrap().abs() < 1e-13);
        assert!(project_harmonic(&f, 7, 0).is_err());
        assert!(real_harmonic(2, 3, 0.1, 0.1).is_err());
    }
}
