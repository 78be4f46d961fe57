use biaxial_core::bie::*;
use biaxial_core::geometry::{Curve, Superellipse};
use biaxial_core::kernels::{Params, SolutionIndex};
use biaxial_core::potentials::{Density, LimitSide};
use biaxial_core::quadrature::QuadConfig;

fn setup() -> (Curve, Params, QuadConfig) {
    (
        Curve::new(Superellipse::new(1.0, 1.0, 2.5).unwrap()).unwrap(),
        Params::new(0.1, 0.4).unwrap(),
        QuadConfig::default(),
    )
}

#[test]
fn assembly_is_deterministic() {
    let (c, p, q) = setup();
    let a = build_system(SolutionIndex::Q2, &c, 24, LimitSide::Interior, &p, &q).unwrap();
    let b = build_system(SolutionIndex::Q2, &c, 24, LimitSide::Interior, &p, &q).unwrap();
    assert_eq!(a.matrix(), b.matrix());
    assert_eq!(a.nodes(), b.nodes());
    assert!(a.matrix().iter().all(|v| v.is_finite()));
    assert_eq!(a.sigma(), -0.5);
    assert!((a.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
}

#[test]
fn unit_density_rows_are_stable_under_refinement() {
    let (c, p, q) = setup();
    for n in [32, 64] {
        let sys = build_system(SolutionIndex::Q1, &c, n, LimitSide::Exterior, &p, &q).unwrap();
        let rows = sys.apply(&vec![1.0; n]).unwrap();
        let worst = rows.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst < 1e-4, "n={n}: {worst}");
    }
}

#[test]
fn small_round_trip() {
    let (c, p, q) = setup();
    let mu = Density::sine(&c);
    for i in [SolutionIndex::Q3, SolutionIndex::Q4] {
        let sys = build_system(i, &c, 48, LimitSide::Interior, &p, &q).unwrap();
        let f = forward_data(&sys, &mu, &c, &p, &q).unwrap();
        let sol = solve_density(&sys, &f).unwrap();
        assert!(sol.residual <= 1e-10 && sol.condition >= 1.0);
        let err = sol.samples().iter().map(|&(t, m)| (m - mu.at(&c, t)).abs()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{i:?}: {err}");
        // off-node interpolation
        for t in [0.013, 0.5003, 0.97] {
            assert!((sol.density.at(&c, t) - mu.at(&c, t)).abs() < 1e-5);
        }
    }
}

#[test]
fn mismatched_data_is_rejected() {
    let (c, p, q) = setup();
    let sys = build_system(SolutionIndex::Q1, &c, 16, LimitSide::Interior, &p, &q).unwrap();
    assert!(solve_density(&sys, &[1.0; 15]).is_err());
    assert!(sys.apply(&[1.0; 17]).is_err());
}

#[test]
fn condition_estimate_of_known_matrices() {
    let id = nalgebra::DMatrix::<f64>::identity(5, 5);
    assert!((condition_estimate(&id) - 1.0).abs() < 1e-15);
    let d = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1e-3]));
    assert!((condition_estimate(&d) - 1e3).abs() < 1e-9);
    assert!(condition_estimate(&nalgebra::DMatrix::<f64>::zeros(3, 3)).is_infinite());
}
