use biaxial_core::geometry::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn default_curve() -> Curve {
    Curve::from_spec(&CurveSpec::default()).unwrap()
}

#[test]
fn quarter_circle_measures() {
    let c = Curve::new(Superellipse::unchecked(1.0, 1.0, 2.0)).unwrap();
    assert!((c.length() - PI / 2.0).abs() < 1e-10);
    assert!((c.signed_area() - PI / 4.0).abs() < 1e-10);
    assert!((c.arclength(0.5) - PI / 4.0).abs() < 1e-10);
}

#[test]
fn endpoints_lie_on_the_axes() {
    let c = Curve::new(Superellipse::new(2.0, 0.5, 2.5).unwrap()).unwrap();
    assert_eq!((c.a(), c.b()), (2.0, 0.5));
    let (a, b) = (c.position(0.0), c.position(1.0));
    assert!((a.x - 2.0).abs() < 1e-14 && a.y.abs() < 1e-14);
    assert!(b.x.abs() < 1e-14 && (b.y - 0.5).abs() < 1e-14);
    assert!(c.signed_area() > 0.0);
}

#[test]
fn admissibility_examples() {
    assert!(check_admissibility(&default_curve(), 0.5).unwrap().passes);
    let circle = Curve::new(Superellipse::unchecked(1.0, 1.0, 2.0)).unwrap();
    assert!(!check_admissibility(&circle, 0.5).unwrap().passes);
    let steep = Curve::new(Superellipse::new(1.0, 1.0, 2.9).unwrap()).unwrap();
    let rep = check_admissibility(&steep, 0.1).unwrap();
    assert!(rep.passes && (rep.epsilon_fit_at_b - 1.9).abs() < 0.05, "{rep:?}");
    assert!(check_admissibility(&steep, 1.5).is_err());
    assert!(Superellipse::new(1.0, 1.0, 2.0).is_err());
}

#[test]
fn sampled_curve_follows_its_samples() {
    let exact = default_curve();
    let points: Vec<Point> = (0..=40).map(|k| exact.position(k as f64 / 40.0)).collect();
    let sampled = Curve::new(SampledCurve::new(&points, true).unwrap()).unwrap();
    assert!((sampled.length() - exact.length()).abs() < 1e-3);
    assert!((sampled.signed_area() - exact.signed_area()).abs() < 1e-3);
    let far = Point::new(0.4, 0.4);
    assert_eq!(sampled.locate(far, 1e-9), Location::Interior);
    assert_eq!(sampled.locate(Point::new(1.0, 1.0), 1e-9), Location::Exterior);
}

#[test]
fn curve_spec_round_trips_through_json() {
    let spec: CurveSpec = serde_json::from_str(r#"{"type": "superellipse", "a": 1.0, "b": 2.0, "p": 2.5}"#).unwrap();
    assert_eq!(spec, CurveSpec::Superellipse { a: 1.0, b: 2.0, p: 2.5 });
    let samples: CurveSpec = serde_json::from_str(r#"{"type": "samples", "points": [[1, 0], [0.8, 0.6], [0, 1]]}"#).unwrap();
    assert!(matches!(samples, CurveSpec::Samples { tangency: true, .. }));
    let back: CurveSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(back, spec);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normals_are_unit_and_orthogonal(t in 0.01f64..0.99, p in 2.1f64..2.9) {
        let c = Curve::new(Superellipse::new(1.0, 1.5, p).unwrap()).unwrap();
        let tan = c.tangent(t).unwrap();
        let n = c.exterior_normal(t).unwrap();
        prop_assert!((tan.0.hypot(tan.1) - 1.0).abs() < 1e-12);
        prop_assert!((n.0 * tan.0 + n.1 * tan.1).abs() < 1e-12);
        // exterior: stepping along n leaves the domain
        prop_assert_eq!(c.locate(c.position(t).offset(n, 1e-3), 1e-9), Location::Exterior);
    }

    #[test]
    fn arclength_inverts(t in 0.0f64..1.0) {
        let c = default_curve();
        let s = c.arclength(t);
        prop_assert!((c.param_at_arclength(s) - t).abs() < 1e-9);
    }

    #[test]
    fn arclength_is_increasing(t in 0.0f64..0.99, dt in 1e-3f64..0.01) {
        let c = default_curve();
        prop_assert!(c.arclength(t + dt) > c.arclength(t));
    }
}
