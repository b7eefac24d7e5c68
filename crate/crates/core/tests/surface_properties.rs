use std::f64::consts::PI;

use isogauge::spectral::SphereGrid;
use isogauge::surface::{
    oriented_volume, reverse_minkowski_report, surface_from_support, SupportField,
};
use proptest::prelude::*;

/// `(l, m, c)` for `2 <= l <= 4` with `Σ|c| <= 0.05`, which keeps `h = 1 + Σ c Y` convex.
fn terms() -> impl Strategy<Value = Vec<(usize, i64, f64)>> {
    (prop::collection::vec(-1.0..1.0f64, 21), 0.001..0.05f64).prop_map(|(c, s)| {
        let total: f64 = c.iter().map(|v: &f64| v.abs()).sum::<f64>().max(1e-300);
        (2..=4usize)
            .flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m)))
            .zip(c)
            .map(|((l, m), c)| (l, m, c * s / total))
            .collect()
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadratic_functionals_match_harmonic_sums(t in terms()) {
        let g = SphereGrid::square(16).unwrap();
        let h = SupportField::from_harmonics(&g, 1.0, &t).unwrap();
        let rep = reverse_minkowski_report(&h, 1e-10);
        // deficit = 8π Σ c²(λ−2), ½∫(ρ₁−ρ₂)² = ½ Σ c² λ(λ−2), λ = l(l+1)
        let (mut deficit, mut tracefree) = (0.0, 0.0);
        for &(l, _, c) in &t {
            let lam = (l * (l + 1)) as f64;
            deficit += 8.0 * PI * c * c * (lam - 2.0);
            tracefree += 0.5 * c * c * lam * (lam - 2.0);
        }
        prop_assert!((rep.deficit - deficit).abs() <= 1e-12 * 64.0 * PI * PI);
        prop_assert!((rep.geometry.tracefree - tracefree).abs() <= 1e-13);
        prop_assert!(close(rep.geometry.integral_mean_curvature, 8.0 * PI, 1e-13));
        prop_assert!(rep.report.passed, "{:?}", rep.report.failures);
    }

    #[test]
    fn translation_invariant(t in terms(), v in prop::array::uniform3(-2.0..2.0f64)) {
        let g = SphereGrid::square(16).unwrap();
        let h = SupportField::from_harmonics(&g, 1.0, &t).unwrap();
        let a = surface_from_support(&h);
        let b = surface_from_support(&h.translated(v).unwrap());
        prop_assert!(close(a.area, b.area, 1e-12));
        prop_assert!(close(a.integral_mean_curvature, b.integral_mean_curvature, 1e-12));
        prop_assert!(close(a.tracefree, b.tracefree, 1e-10));
        prop_assert!(close(oriented_volume(&a.position), oriented_volume(&b.position), 1e-11));
    }

    #[test]
    fn homogeneous_under_scaling(t in terms(), lambda in 0.2..5.0f64) {
        let g = SphereGrid::square(16).unwrap();
        let h = SupportField::from_harmonics(&g, 1.0, &t).unwrap();
        let a = reverse_minkowski_report(&h, 1e-10);
        let b = reverse_minkowski_report(&h.scaled(lambda).unwrap(), 1e-10);
        let l2 = lambda * lambda;
        prop_assert!(close(b.geometry.area, l2 * a.geometry.area, 1e-12));
        prop_assert!(close(b.deficit, l2 * a.deficit, 1e-9));
        prop_assert!(close(b.bound1, l2 * a.bound1, 1e-9));
        prop_assert!(close(b.bound2, l2 * a.bound2, 1e-9));
        prop_assert!(close(b.geometry.gauss, a.geometry.gauss, 1e-12));
        let v = oriented_volume(&a.geometry.position);
        prop_assert!(close(oriented_volume(&b.geometry.position), lambda * l2 * v, 1e-12));
    }
}
