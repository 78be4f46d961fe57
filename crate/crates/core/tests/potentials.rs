use biaxial_core::geometry::{Curve, Location, Point, Superellipse};
use biaxial_core::kernels::{Params, SolutionIndex};
use biaxial_core::potentials::*;
use biaxial_core::quadrature::QuadConfig;

use SolutionIndex::*;

fn curve() -> Curve {
    Curve::new(Superellipse::new(1.0, 1.0, 2.5).unwrap()).unwrap()
}

fn param_sets() -> [Params; 2] {
    [Params::new(0.25, 0.25).unwrap(), Params::new(0.1, 0.4).unwrap()]
}

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

#[test]
fn double_layer_is_linear() {
    let c = curve();
    let p = param_sets()[1];
    let p0 = Point::new(0.35, 0.45);
    let mu1 = Density::sine(&c);
    let mu2 = Density::from_arclength(|s| s * s);
    let l = c.length();
    let combo = Density::from_arclength(move |s| 2.0 * (std::f64::consts::PI * s / l).sin() - 0.5 * s * s);
    for i in SolutionIndex::ALL {
        let w = |mu: &Density| double_layer(i, mu, &c, p0, &p, &cfg()).unwrap().value;
        let lhs = w(&combo);
        let rhs = 2.0 * w(&mu1) - 0.5 * w(&mu2);
        assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()), "{i:?}: {lhs} vs {rhs}");
    }
}

#[test]
fn first_gauge_table() {
    let c = curve();
    for p in param_sets() {
        let g = |p0: Point| gauge(Q1, &c, p0, &p, &cfg()).unwrap().value;
        for (p0, want) in [
            (Point::new(0.4, 0.3), -1.0),
            (c.position(0.5), -0.5),
            (Point::new(3.0, 3.0), 0.0),
            (Point::new(0.5, 0.0), -1.0),
            (Point::new(0.0, 0.5), -1.0),
            (Point::new(1.0, 0.0), -0.5),
            (Point::new(0.0, 1.0), -0.5),
            (Point::new(2.0, 0.0), 0.0),
            (Point::new(0.0, 1.7), 0.0),
        ] {
            let v = g(p0);
            assert!((v - want).abs() < 1e-6, "{p0}: {v} vs {want}");
        }
    }
}

#[test]
fn corrected_gauges_by_location() {
    let c = curve();
    for p in param_sets() {
        for i in [Q2, Q3, Q4] {
            for p0 in [Point::new(0.4, 0.3), Point::new(0.2, 0.6), c.position(0.35), Point::new(1.1, 0.9), Point::new(0.3, 1.5)] {
                let loc = c.locate(p0, 1e-9);
                let v = gauge(i, &c, p0, &p, &cfg()).unwrap().value;
                let corr = axis_correction(i, p0, c.a(), c.b(), &p, &cfg()).unwrap().value;
                let want = gauge_expectation(loc);
                assert!((v - corr - want).abs() < 1e-6, "{i:?} {p0} {loc:?}: {}", v - corr);
            }
        }
    }
    assert_eq!(gauge_expectation(Location::OnBoundary), -0.5);
}

#[test]
fn axis_correction_fades_as_the_pole_nears_its_axis() {
    let c = curve();
    let p = param_sets()[0];
    // the prefactor x₀^{1-2α} drives the correction to zero (pole above the arc)
    let v: Vec<f64> = [1e-2, 1e-4, 1e-6]
        .iter()
        .map(|&x0| axis_correction(Q2, Point::new(x0, 1.5), c.a(), c.b(), &p, &cfg()).unwrap().value.abs())
        .collect();
    assert!(v[1] < v[0] && v[2] < v[1] && v[2] < 1e-2, "{v:?}");
}

#[test]
fn jump_across_the_curve_is_the_density() {
    let c = curve();
    let p = param_sets()[1];
    let ramp = Density::from_arclength({
        let l = c.length();
        move |s| s / l
    });
    for mu in [Density::constant(1.0), Density::sine(&c), ramp] {
        for i in SolutionIndex::ALL {
            for t in [0.15, 0.6] {
                let inn = boundary_value(i, &mu, &c, t, LimitSide::Interior, &p, &cfg()).unwrap().value;
                let out = boundary_value(i, &mu, &c, t, LimitSide::Exterior, &p, &cfg()).unwrap().value;
                assert!((out - inn - mu.at(&c, t)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn boundary_values_of_the_unit_density() {
    let c = curve();
    let p = param_sets()[0];
    let one = Density::constant(1.0);
    for t in [0.2, 0.5, 0.8] {
        let inn = boundary_value(Q1, &one, &c, t, LimitSide::Interior, &p, &cfg()).unwrap().value;
        let out = boundary_value(Q1, &one, &c, t, LimitSide::Exterior, &p, &cfg()).unwrap().value;
        assert!((inn + 1.0).abs() < 1e-7 && out.abs() < 1e-7, "{t}: {inn} {out}");
    }
}

#[test]
fn limits_from_both_paths_agree() {
    let c = curve();
    let p = param_sets()[0];
    let mu = Density::sine(&c);
    for (i, side) in [(Q1, LimitSide::Interior), (Q3, LimitSide::Exterior)] {
        let bv = boundary_value(i, &mu, &c, 0.4, side, &p, &cfg()).unwrap().value;
        let dl = direct_limit(i, &mu, &c, 0.4, side, &p, &cfg()).unwrap();
        assert!((bv - dl.value).abs() < 1e-5, "{i:?}: {bv} vs {}", dl.value);
    }
}

#[test]
fn flux_and_reciprocity_identities() {
    let c = curve();
    for p in param_sets() {
        let pole = Point::new(2.0, 2.0);
        let q1 = ExactSolution::Fundamental { index: Q1, pole };
        let tol = 1e-8;
        for u in [ExactSolution::Constant(1.0), ExactSolution::PowerX, ExactSolution::PowerXY, q1] {
            let f = flux_integral(&u, &c, &p, &cfg()).unwrap().value;
            assert!(f.abs() < tol, "{u:?}: {f}");
        }
        let same = reciprocity_check(&q1, &q1, &c, &p, &cfg()).unwrap().value;
        assert!(same.abs() < 1e-14);
        let r = reciprocity_check(&ExactSolution::PowerX, &ExactSolution::PowerY, &c, &p, &cfg()).unwrap().value;
        assert!(r.abs() < tol, "{r}");
    }
}

#[test]
fn points_on_the_curve_are_rejected_by_the_off_curve_path() {
    let c = curve();
    let p = param_sets()[0];
    let r = double_layer(Q1, &Density::constant(1.0), &c, c.position(0.3), &p, &cfg());
    assert!(matches!(r, Err(biaxial_core::Error::PointOnBoundary { .. })));
}

#[test]
fn layer_potential_is_bounded_by_the_absolute_kernel() {
    let c = curve();
    let p = param_sets()[1];
    for p0 in [Point::new(0.3, 0.3), Point::new(0.9, 0.5), Point::new(1.5, 1.5)] {
        for i in SolutionIndex::ALL {
            let w = gauge(i, &c, p0, &p, &cfg()).unwrap().value;
            let abs = biaxial_core::quadrature::try_integrate(
                |t| Ok(biaxial_core::kernels::layer_integrand(i, &c, t, p0, &p)?.abs()),
                0.0,
                1.0,
                &cfg(),
            )
            .unwrap()
            .value;
            assert!(w.abs() <= abs * (1.0 + 1e-8) + 1e-10, "{i:?} {p0}: {w} > {abs}");
        }
    }
}
