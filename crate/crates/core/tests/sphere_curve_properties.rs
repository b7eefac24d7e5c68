use isogauge::families::gnomonic_ellipse;
use isogauge::sphere_curve::reverse_iso_identity_report;
use proptest::prelude::*;

/// Rotation matrix of a unit quaternion.
fn rotation(q: [f64; 4]) -> [[f64; 3]; 3] {
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / n);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rotation_invariant(
        a in 0.2..0.8f64,
        b in 0.2..0.8f64,
        c in prop::array::uniform2(-0.3..0.3f64),
        q in prop::array::uniform4(0.1..1.0f64),
    ) {
        let curve = gnomonic_ellipse(128, a, b, c).unwrap();
        let r = rotation(q);
        let turned = curve.transformed(r).unwrap();
        let x = reverse_iso_identity_report(&curve, 1e-8).unwrap();
        let y = reverse_iso_identity_report(&turned, 1e-8).unwrap();
        prop_assert!(close(x.length, y.length, 1e-12));
        prop_assert!(close(x.area, y.area, 1e-11));
        prop_assert!(close(x.j, y.j, 1e-11));
        prop_assert!(close(x.remainder, y.remainder, 1e-9));
    }

    #[test]
    fn identity_and_bound_on_gnomonic_ellipses(
        a in 0.2..0.8f64,
        b in 0.2..0.8f64,
        c in prop::array::uniform2(-0.3..0.3f64),
    ) {
        let rep = reverse_iso_identity_report(&gnomonic_ellipse(256, a, b, c).unwrap(), 1e-8).unwrap();
        let scale = rep.length.powi(2) + rep.total_curvature.powi(2);
        prop_assert!(rep.identity_residual().abs() <= 1e-8 * scale);
        prop_assert!(rep.remainder >= rep.oscillation_bound - 1e-9 * scale);
        prop_assert!(rep.report.passed, "{:?}", rep.report.failures);
        // circles have no remainder; anything visibly non-round does
        if (a - b).abs() > 0.05 {
            prop_assert!(rep.remainder > 0.0 && !rep.report.equality);
        }
    }
}
