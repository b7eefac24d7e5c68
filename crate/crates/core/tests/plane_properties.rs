use std::f64::consts::PI;

use isogauge::families::{norm_profile, series, support_profile};
use isogauge::plane::{
    curve_from_support, hurwitz_report, minkowski_curvature, minkowski_length, reverse_iso_report,
    total_curvature_identity, NormProfile, SupportProfile,
};
use isogauge::spectral::{FourierCoefficients, PeriodicSamples};
use proptest::prelude::*;

const N: usize = 128;

/// Support functions `1 + Σ_{k=2..5}` with `Σ (k²−1)|c_k| < 0.8`, plus a translation.
fn support() -> impl Strategy<Value = FourierCoefficients> {
    (
        prop::collection::vec((-0.008..0.008f64, -0.008..0.008f64), 4),
        -2.0..2.0f64,
        -2.0..2.0f64,
    )
        .prop_map(|(m, tx, ty)| {
            let mut modes = vec![(1, tx, ty)];
            modes.extend(m.into_iter().enumerate().map(|(i, (a, b))| (i + 2, a, b)));
            series(1.0, &modes)
        })
}

/// Centrally symmetric norms `1 + c₂ + c₄`.
fn norm() -> impl Strategy<Value = FourierCoefficients> {
    (
        -0.02..0.02f64,
        -0.02..0.02f64,
        -0.02..0.02f64,
        -0.02..0.02f64,
    )
        .prop_map(|(a2, b2, a4, b4)| series(1.0, &[(2, a2, b2), (4, a4, b4)]))
}

fn profiles(p: &FourierCoefficients, h: &FourierCoefficients) -> (SupportProfile, NormProfile) {
    (support_profile(p, N).unwrap(), norm_profile(h, N).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_holds(ps in support(), hs in norm()) {
        let (p, h) = profiles(&ps, &hs);
        let rep = reverse_iso_report(&p, &h, 1e-10).unwrap();
        prop_assert!(rep.report.passed, "{:?}", rep.report.failures);
        prop_assert!(rep.area_evolute <= 1e-12);
        prop_assert!(rep.margin() >= -1e-10 * rep.length * rep.length);
        prop_assert!(rep.ratio >= 1.0 - 1e-12);
    }

    #[test]
    fn hurwitz_matches_fourier_sums(ps in support()) {
        let p = support_profile(&ps, N).unwrap();
        let rep = hurwitz_report(&p, 1e-10).unwrap();
        let e = |k: usize| ps.cos(k).powi(2) + ps.sin(k).powi(2);
        let l = 2.0 * PI * ps.a0;
        let area = PI * ps.a0 * ps.a0 - 0.5 * PI * (2..=5).map(|k| (k * k - 1) as f64 * e(k)).sum::<f64>();
        let evolute = -0.5 * PI * (2..=5).map(|k| ((k * k) as f64 * (k * k - 1) as f64) * e(k)).sum::<f64>();
        prop_assert!(close(rep.length, l, 1e-13));
        prop_assert!(close(rep.area_curve, area, 1e-12));
        prop_assert!(close(rep.area_evolute, evolute, 1e-10));
    }

    #[test]
    fn euclidean_norm_reduces_to_hurwitz(ps in support()) {
        let p = support_profile(&ps, N).unwrap();
        let rev = reverse_iso_report(&p, &NormProfile::euclidean(N).unwrap(), 1e-10).unwrap();
        let hur = hurwitz_report(&p, 1e-10).unwrap();
        prop_assert!(close(rev.lhs(), hur.lhs(), 1e-10));
        prop_assert!(close(rev.rhs(), 4.0 * hur.rhs(), 1e-10));
        prop_assert!(close(rev.area_isoperimetrix, PI, 1e-13));
    }

    #[test]
    fn translation_invariant(ps in support(), hs in norm(), tx in -3.0..3.0f64, ty in -3.0..3.0f64) {
        let (p, h) = profiles(&ps, &hs);
        let shift = PeriodicSamples::from_fn(N, |t| tx * t.cos() + ty * t.sin()).unwrap();
        let moved = SupportProfile::new(p.p().zip_with(&shift, |a, b| a + b).unwrap()).unwrap();
        let a = reverse_iso_report(&p, &h, 1e-10).unwrap();
        let b = reverse_iso_report(&moved, &h, 1e-10).unwrap();
        prop_assert!(close(a.length, b.length, 1e-12));
        prop_assert!(close(a.area_curve, b.area_curve, 1e-12));
        prop_assert!(close(a.area_evolute, b.area_evolute, 1e-10));
        prop_assert!(close(a.lhs(), b.lhs(), 1e-10));
    }

    #[test]
    fn homogeneous_under_scaling(ps in support(), hs in norm(), lambda in 0.1..10.0f64) {
        let (p, h) = profiles(&ps, &hs);
        let a = reverse_iso_report(&p, &h, 1e-10).unwrap();
        let b = reverse_iso_report(&p.scaled(lambda).unwrap(), &h, 1e-10).unwrap();
        prop_assert!(close(b.length, lambda * a.length, 1e-12));
        prop_assert!(close(b.area_curve, lambda * lambda * a.area_curve, 1e-12));
        prop_assert!(close(b.area_evolute, lambda * lambda * a.area_evolute, 1e-10));
        prop_assert!(close(b.ratio, a.ratio, 1e-12));
    }

    #[test]
    fn total_curvature_is_twice_isoperimetrix_area(ps in support(), hs in norm()) {
        let (p, h) = profiles(&ps, &hs);
        let rep = total_curvature_identity(&p, &h, 1e-10).unwrap();
        prop_assert!(rep.passed, "{:?}", rep.failures);
        // independent route: κ dσ = h (h'' + h) dθ
        let direct = h.h().zip_with(&h.radius(), |a, b| a * b).unwrap().integral();
        prop_assert!(close(rep.lhs, direct, 1e-12));
    }

    #[test]
    fn length_is_linear_in_support(ps in support(), hs in norm()) {
        let (p, h) = profiles(&ps, &hs);
        let twice = SupportProfile::new(p.p().map(|v| 2.0 * v).unwrap()).unwrap();
        let l1 = minkowski_length(&p, &h).unwrap();
        prop_assert!(close(minkowski_length(&twice, &h).unwrap(), 2.0 * l1, 1e-13));
        let k = minkowski_curvature(&twice, &h).unwrap();
        let k1 = minkowski_curvature(&p, &h).unwrap();
        prop_assert!(k.values().iter().zip(k1.values()).all(|(a, b)| close(2.0 * a, *b, 1e-12)));
    }

    #[test]
    fn traced_curve_area_matches_support_formula(ps in support()) {
        let p = support_profile(&ps, N).unwrap();
        let direct = curve_from_support(&p).signed_area();
        let formula = 0.5 * p.p().zip_with(&p.radius(), |a, b| a * b).unwrap().integral();
        prop_assert!(close(direct, formula, 1e-12));
    }
}
