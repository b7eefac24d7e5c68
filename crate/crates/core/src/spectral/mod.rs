//! Spectral calculus on the circle and on the sphere.

pub mod harmonics;
pub mod periodic;
pub mod poincare;
pub mod sphere;

pub use harmonics::{
    harmonic_field, harmonic_sum, project_harmonic, real_harmonic, MAX_PROJECTION_DEGREE,
};
pub use periodic::{periodic_derivative, periodic_integral, FourierCoefficients, PeriodicSamples};
pub use poincare::{poincare_gap_circle, poincare_gap_sphere};
pub use sphere::{
    sphere_integral, sphere_operators, SphereGrid, SphereOperators, SpherePartials,
    SphereScalarField,
};

/// Neumaier-compensated sum in iteration order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

#[cfg(test)]
mod tests {
    #[test]
    fn compensated_sum_recovers_cancellation() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(super::compensated_sum(v), 2.0);
    }
}
