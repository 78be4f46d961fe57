//! Identity suites behind `verify`. Every suite returns one record per
//! check; ids are zero-padded so lexical order is evaluation order.

use std::time::Instant;

use biaxial_core::geometry::{Curve, Location, Point};
use biaxial_core::kernels::{bound_envelope, fundamental_solution, Params, SolutionIndex};
use biaxial_core::potentials::{
    axis_correction, boundary_value, direct_limit, flux_integral, gauge, gauge_expectation, reciprocity_check,
    Density, ExactSolution, LimitSide,
};
use biaxial_core::quadrature::{integrate_halfline_decay, QuadConfig};
use biaxial_core::specfun::{
    appell_f2_direct, appell_f2_series, gamma, gauss_2f1, gauss_2f1_at_one, pochhammer, HypergeometricParams,
    SeriesControl,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Suite;
use crate::report::Record;

pub struct Context<'a> {
    pub curve: &'a Curve,
    pub params: Params,
    pub quad: QuadConfig,
    pub series: SeriesControl,
}

impl Context<'_> {
    fn id(&self, suite: Suite, rest: impl std::fmt::Display) -> String {
        format!("{suite}/a{}-b{}/{rest}", self.params.alpha, self.params.beta)
    }
}

pub fn run(suite: Suite, cx: &Context) -> Vec<Record> {
    match suite {
        Suite::Gauge => gauge_suite(cx),
        Suite::Axis => axis_suite(cx),
        Suite::Jump => jump_suite(cx),
        Suite::Flux => flux_suite(cx),
        Suite::Bounds => bounds_suite(cx),
        Suite::Specfun => specfun_suite(cx),
    }
}

fn location_name(loc: Location) -> &'static str {
    match loc {
        Location::Interior => "inside",
        Location::OnBoundary => "on-arc",
        Location::Exterior => "outside",
    }
}

/// Test poles relative to the box `[0, a] × [0, b]`: five inside, three on
/// the arc and three beyond it.
fn poles(c: &Curve) -> Vec<Point> {
    let (a, b) = (c.a(), c.b());
    let mut v: Vec<Point> = [(0.4, 0.3), (0.2, 0.7), (0.7, 0.2), (0.5, 0.5), (0.1, 0.1)]
        .iter()
        .map(|&(x, y)| Point::new(x * a, y * b))
        .collect();
    v.extend([0.2, 0.5, 0.8].map(|t| c.position(t)));
    v.extend([(1.2, 0.5), (3.0, 3.0), (0.5, 1.5)].map(|(x, y)| Point::new(x * a, y * b)));
    v
}

fn gauge_suite(cx: &Context) -> Vec<Record> {
    let c = cx.curve;
    let mut out = Vec::new();
    for (k, p0) in poles(c).into_iter().enumerate() {
        let loc = c.locate(p0, 1e-9);
        let want = gauge_expectation(loc);
        for i in SolutionIndex::ALL {
            let id = cx.id(Suite::Gauge, format_args!("{i}/{k:02}-{}", location_name(loc)));
            let started = Instant::now();
            let (reference, tol) = if i == SolutionIndex::Q1 {
                (format!("unit-density gauge, pole {}", location_name(loc)), 1e-6)
            } else {
                (format!("axis-corrected unit-density gauge of {i}, pole {}", location_name(loc)), 1e-5)
            };
            let res = gauge(i, c, p0, &cx.params, &cx.quad).and_then(|g| {
                if i == SolutionIndex::Q1 {
                    return Ok((g.value, g.evaluations));
                }
                let corr = axis_correction(i, p0, c.a(), c.b(), &cx.params, &cx.quad)?;
                Ok((g.value - corr.value, g.evaluations + corr.evaluations))
            });
            out.push(match res {
                Ok((v, evals)) => Record::close(id, &reference, v, want, tol).with_cost(evals, started),
                Err(e) => Record::failed(id, &reference, want, tol, e),
            });
        }
    }
    out
}

fn axis_suite(cx: &Context) -> Vec<Record> {
    let c = cx.curve;
    let mut out = Vec::new();
    // (fraction of the intercept, expected, tolerance, description)
    let cases = [
        (0.25, -1.0, 1e-5, "inside the segment"),
        (0.5, -1.0, 1e-5, "inside the segment"),
        (1.0, -0.5, 1e-4, "at the arc endpoint"),
        (2.0, 0.0, 1e-5, "beyond the arc"),
    ];
    for (axis, along) in [("OX", true), ("OY", false)] {
        for (k, &(frac, want, tol, what)) in cases.iter().enumerate() {
            let p0 = if along { Point::new(frac * c.a(), 0.0) } else { Point::new(0.0, frac * c.b()) };
            let id = cx.id(Suite::Axis, format_args!("{axis}/{k:02}-{frac}"));
            out.push(gauge_record(cx, id, &format!("unit-density gauge on {axis}, {what}"), p0, want, tol));
        }
    }
    // the corner sees the full angle of the quarter plane
    let id = cx.id(Suite::Axis, "origin");
    out.push(gauge_record(cx, id, "unit-density gauge at the corner (0,0)", Point::new(0.0, 0.0), -1.0, 1e-4));
    out
}

fn gauge_record(cx: &Context, id: String, reference: &str, p0: Point, want: f64, tol: f64) -> Record {
    let started = Instant::now();
    match gauge(SolutionIndex::Q1, cx.curve, p0, &cx.params, &cx.quad) {
        Ok(g) => Record::close(id, reference, g.value, want, tol).with_cost(g.evaluations, started),
        Err(e) => Record::failed(id, reference, want, tol, e),
    }
}

fn jump_suite(cx: &Context) -> Vec<Record> {
    let c = cx.curve;
    let densities = [("one", Density::constant(1.0)), ("sine", Density::sine(c))];
    let mut out = Vec::new();
    for i in SolutionIndex::ALL {
        for (name, mu) in &densities {
            for t in [0.25, 0.5, 0.75] {
                let base = format!("{i}/{name}/t{t}");
                let started = Instant::now();
                let sides = [LimitSide::Interior, LimitSide::Exterior]
                    .map(|side| boundary_value(i, mu, c, t, side, &cx.params, &cx.quad));
                let (int, ext) = match sides {
                    [Ok(int), Ok(ext)] => (int, ext),
                    [Err(e), _] | [_, Err(e)] => {
                        let id = cx.id(Suite::Jump, format_args!("{base}/jump"));
                        out.push(Record::failed(id, "jump of the double layer across the arc", mu.at(c, t), 1e-12, e));
                        continue;
                    }
                };
                let id = cx.id(Suite::Jump, format_args!("{base}/jump"));
                out.push(
                    Record::close(id, "jump of the double layer across the arc", ext.value - int.value, mu.at(c, t), 1e-12)
                        .with_cost(int.evaluations + ext.evaluations, started),
                );
                for (side, bv) in [(LimitSide::Interior, int.value), (LimitSide::Exterior, ext.value)] {
                    let id = cx.id(Suite::Jump, format_args!("{base}/{side}"));
                    let reference = format!("{side} limiting value vs approach from off the arc");
                    let started = Instant::now();
                    out.push(match direct_limit(i, mu, c, t, side, &cx.params, &cx.quad) {
                        Ok(d) => Record::close(id, &reference, bv, d.value, 1e-5).with_cost(d.evaluations, started),
                        Err(e) => Record::failed(id, &reference, bv, 1e-5, e),
                    });
                }
            }
        }
    }
    out
}

fn flux_suite(cx: &Context) -> Vec<Record> {
    let c = cx.curve;
    let q1_out = ExactSolution::Fundamental { index: SolutionIndex::Q1, pole: Point::new(2.0 * c.a(), 2.0 * c.b()) };
    let q4_out = ExactSolution::Fundamental { index: SolutionIndex::Q4, pole: Point::new(1.5 * c.a(), 1.2 * c.b()) };
    let mut out = Vec::new();
    let fluxes = [
        ("1", ExactSolution::Constant(1.0)),
        ("x^(1-2a)", ExactSolution::PowerX),
        ("y^(1-2b)", ExactSolution::PowerY),
        ("x^(1-2a)y^(1-2b)", ExactSolution::PowerXY),
        ("q1-outside", q1_out),
    ];
    for (k, (name, u)) in fluxes.iter().enumerate() {
        let id = cx.id(Suite::Flux, format_args!("flux/{k:02}-{name}"));
        let started = Instant::now();
        let reference = "weighted flux of a regular solution vanishes";
        out.push(match flux_integral(u, c, &cx.params, &cx.quad) {
            Ok(v) => Record::close(id, reference, v.value, 0.0, 1e-8).with_cost(v.evaluations, started),
            Err(e) => Record::failed(id, reference, 0.0, 1e-8, e),
        });
    }
    let pairs = [
        ("x^(1-2a);y^(1-2b)", ExactSolution::PowerX, ExactSolution::PowerY),
        ("x^(1-2a)y^(1-2b);q1-outside", ExactSolution::PowerXY, q1_out),
        ("q1-outside;q4-outside", q1_out, q4_out),
    ];
    for (k, (name, u, v)) in pairs.iter().enumerate() {
        let id = cx.id(Suite::Flux, format_args!("reciprocity/{k:02}-{name}"));
        let started = Instant::now();
        let reference = "reciprocity of two regular solutions";
        out.push(match reciprocity_check(u, v, c, &cx.params, &cx.quad) {
            Ok(x) => Record::close(id, reference, x.value, 0.0, 1e-8).with_cost(x.evaluations, started),
            Err(e) => Record::failed(id, reference, 0.0, 1e-8, e),
        });
    }
    out
}

/// 200 separated pairs in `(0.01, 2)²` per solution, from a fixed seed.
fn bounds_suite(cx: &Context) -> Vec<Record> {
    let mut out = Vec::new();
    for i in SolutionIndex::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut n = 0;
        while n < 200 {
            let a = Point::new(rng.gen_range(0.01..2.0), rng.gen_range(0.01..2.0));
            let b = Point::new(rng.gen_range(0.01..2.0), rng.gen_range(0.01..2.0));
            if a.distance(b) < 0.05 {
                continue;
            }
            let id = cx.id(Suite::Bounds, format_args!("{i}/{n:03}"));
            let reference = format!("majorant |{i}| <= envelope");
            let started = Instant::now();
            out.push(match (fundamental_solution(i, a, b, &cx.params), bound_envelope(i, a, b, &cx.params)) {
                (Ok(q), Ok(env)) => Record::at_most(id, &reference, q.abs(), env, 1e-12 * env).with_cost(0, started),
                (Err(e), _) | (_, Err(e)) => Record::failed(id, &reference, f64::NAN, 0.0, e),
            });
            n += 1;
        }
    }
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn specfun_suite(cx: &Context) -> Vec<Record> {
    let ctrl = cx.series;
    let tol = 10.0 * ctrl.rel_tol;
    let (al, be) = (cx.params.alpha, cx.params.beta);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out = Vec::new();
    let mut push = |id: String, reference: &str, res: biaxial_core::Result<(f64, f64)>, tol: f64| {
        out.push(match res {
            Ok((computed, expected)) => Record::close(id, reference, computed, expected, tol),
            Err(e) => Record::failed(id, reference, 0.0, tol, e),
        });
    };

    for k in 0..50 {
        let (a, b1, b2) = (rng.gen_range(0.1..1.5), rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
        let (c1, c2) = (rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0));
        let (s, w) = (rng.gen_range(0.0..0.9), rng.gen_range(0.0..1.0));
        let (x, y) = (-s * w, -s * (1.0 - w));
        let res = (|| {
            let f = |a, b1, b2, c1, c2| appell_f2_direct(&HypergeometricParams::new(a, b1, b2, c1, c2)?, x, y, &ctrl);
            let up = f(a + 1.0, b1, b2, c1, c2)?;
            let lhs = b1 / c1 * x * f(a + 1.0, b1 + 1.0, b2, c1 + 1.0, c2)? + b2 / c2 * y * f(a + 1.0, b1, b2 + 1.0, c1, c2 + 1.0)?;
            Ok((lhs / up, (up - f(a, b1, b2, c1, c2)?) / up))
        })();
        push(cx.id(Suite::Specfun, format_args!("adjacency/{k:02}")), "F2 contiguous relation (scaled by F2(a+1))", res, tol);
    }

    for k in 0..50 {
        let (a, b, c) = (rng.gen_range(-1.0..1.5), rng.gen_range(0.05..1.0), rng.gen_range(0.2..2.0));
        let z = rng.gen_range(-5.0..0.5);
        let res = (|| {
            let lhs = gauss_2f1(a, b, c, z, &ctrl)?;
            let rhs = (1.0 - z).powf(-b) * gauss_2f1(c - a, b, c, z / (z - 1.0), &ctrl)?;
            Ok((rel(lhs, rhs), 0.0))
        })();
        push(cx.id(Suite::Specfun, format_args!("pfaff/{k:02}")), "2F1 Pfaff transformation (relative)", res, tol);
    }

    for k in 0..100 {
        let hp = SolutionIndex::ALL[k % 4].f2_params(&cx.params);
        let (s, w) = (rng.gen_range(0.5..0.95), rng.gen_range(0.0..1.0));
        let (x, y) = (-s * w, -s * (1.0 - w));
        let res = (|| Ok((rel(appell_f2_direct(&hp, x, y, &ctrl)?, appell_f2_series(&hp, x, y, &ctrl)?), 0.0)))();
        push(cx.id(Suite::Specfun, format_args!("branches/{k:03}")), "F2 double series vs product series (relative)", res, 1e-9);
    }

    let (a, b, c) = (al - be - 1.0, al, 2.0 * al);
    let exact = gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b));
    push(cx.id(Suite::Specfun, "gauss-sum/at-one"), "Gauss summation at z = 1", gauss_2f1_at_one(a, b, c).map(|v| (v, exact)), 1e-12 * exact.abs());
    for (k, d) in [1e-2, 1e-4, 1e-6].into_iter().enumerate() {
        // c - a - b = 1 + β > 1, so the approach to z = 1 is O(δ)
        let res = gauss_2f1(a, b, c, 1.0 - d, &ctrl).map(|v| (v, exact));
        push(cx.id(Suite::Specfun, format_args!("gauss-sum/approach-{k}")), "2F1 tends to the Gauss sum as z -> 1", res, 10.0 * d * exact.abs().max(1.0));
    }

    for (name, (x, y)) in [("alpha", (al, be)), ("beta", (be, al))] {
        for i in 0..=10u32 {
            let fi = f64::from(i);
            let bound = gamma(2.0 * x) * gamma(y) * pochhammer(2.0 * x, i) / (gamma(x + y) * gamma(x) * pochhammer(x + y, i));
            let res = (0..=200)
                .map(|k| gauss_2f1(x - y, x + fi, 2.0 * x + fi, f64::from(k) / 201.0, &ctrl))
                .try_fold(f64::NEG_INFINITY, |m, v| v.map(|v| m.max(v)));
            let id = cx.id(Suite::Specfun, format_args!("2f1-bound-{name}/{i:02}"));
            let reference = "2F1 factor of the majorant below its gamma bound (max over z in [0,1))";
            out.push(match res {
                Ok(max) => Record::at_most(id, reference, max, bound, 1e-12 * bound),
                Err(e) => Record::failed(id, reference, bound, 0.0, e),
            });
        }
    }

    let halfline = |b: f64| integrate_halfline_decay(|t| (1.0 + t * t).powf(-b - 1.0), &cx.quad).map(|r| r.value);
    let formula = |b: f64| std::f64::consts::PI * gamma(2.0 * b) / (2f64.powf(2.0 * b - 1.0) * b * gamma(b).powi(2));
    let reference = "half-line integral of (1+t^2)^(-b-1) vs gamma formula";
    out.push(match halfline(0.5) {
        Ok(v) => Record::close(cx.id(Suite::Specfun, "halfline/b0.5"), reference, v, 2.0, 1e-10),
        Err(e) => Record::failed(cx.id(Suite::Specfun, "halfline/b0.5"), reference, 2.0, 1e-10, e),
    });
    for (tag, b) in [("beta", be), ("alpha", al)] {
        let id = cx.id(Suite::Specfun, format_args!("halfline/{tag}"));
        out.push(match halfline(b) {
            Ok(v) => Record::close(id, reference, v, formula(b), 1e-10 * formula(b)),
            Err(e) => Record::failed(id, reference, formula(b), 1e-10, e),
        });
    }
    out
}
