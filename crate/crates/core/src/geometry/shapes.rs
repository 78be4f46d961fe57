use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::Point;

/// A parametric arc `t ∈ [0, 1] ↦ (x(t), y(t))` with two derivatives.
pub trait CurveShape: Send + Sync + std::fmt::Debug {
    fn position(&self, t: f64) -> Point;
    fn derivative(&self, t: f64) -> (f64, f64);
    fn second_derivative(&self, t: f64) -> (f64, f64);
}

/// The arc `(x/a)^p + (y/b)^p = 1` in the first quadrant.
///
/// Parametrized by radial projection of the chord `(1 - t, t)`, which keeps
/// the speed bounded away from zero and makes `a - x(t) ~ t^p` near `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superellipse {
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

impl Superellipse {
    /// Admissible members need `2 < p < 3`.
    pub fn new(a: f64, b: f64, p: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return invalid(format!("superellipse semi-axes must be positive, got ({a}, {b})"));
        }
        if !(p > 2.0 && p < 3.0) {
            return invalid(format!("superellipse exponent must lie in (2, 3), got {p}"));
        }
        Ok(Self { a, b, p })
    }

    /// Any exponent `p ≥ 1`; used for non-admissible comparison curves such
    /// as the quarter circle.
    pub fn unchecked(a: f64, b: f64, p: f64) -> Self {
        Self { a, b, p }
    }

    // (u, v) = (X0, Y0)/N and their first two derivatives in t
    fn unit(&self, t: f64) -> [(f64, f64); 3] {
        let p = self.p;
        let (x0, y0) = (1.0 - t, t);
        let n = (x0.powf(p) + y0.powf(p)).powf(1.0 / p);
        let d = y0.powf(p - 1.0) - x0.powf(p - 1.0);
        let dd = (p - 1.0) * (pow_or_zero(y0, p - 2.0) + pow_or_zero(x0, p - 2.0));
        let n1 = n.powf(1.0 - p) * d;
        let n2 = (1.0 - p) * n.powf(-p) * n1 * d + n.powf(1.0 - p) * dd;
        let (n_2, n_3) = (n * n, n * n * n);
        let u = x0 / n;
        let v = y0 / n;
        let u1 = -1.0 / n - x0 * n1 / n_2;
        let v1 = 1.0 / n - y0 * n1 / n_2;
        let u2 = 2.0 * n1 / n_2 - x0 * n2 / n_2 + 2.0 * x0 * n1 * n1 / n_3;
        let v2 = -2.0 * n1 / n_2 - y0 * n2 / n_2 + 2.0 * y0 * n1 * n1 / n_3;
        [(u, v), (u1, v1), (u2, v2)]
    }
}

fn pow_or_zero(base: f64, exp: f64) -> f64 {
    if base == 0.0 {
        if exp > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        base.powf(exp)
    }
}

impl CurveShape for Superellipse {
    fn position(&self, t: f64) -> Point {
        let (u, v) = self.unit(t)[0];
        Point::new(self.a * u, self.b * v)
    }

    fn derivative(&self, t: f64) -> (f64, f64) {
        let (u, v) = self.unit(t)[1];
        (self.a * u, self.b * v)
    }

    fn second_derivative(&self, t: f64) -> (f64, f64) {
        let (u, v) = self.unit(t)[2];
        (self.a * u, self.b * v)
    }
}

/// Cubic spline through sample points at uniform parameter values, with the
/// end tangents clamped to the axis directions (vertical at `A`, horizontal
/// at `B`) when the tangency flags are set.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    xs: Spline,
    ys: Spline,
}

#[derive(Debug, Clone, PartialEq)]
struct Spline {
    values: Vec<f64>,
    // second derivatives at the knots
    moments: Vec<f64>,
}

impl Spline {
    /// Spline on knots `k/(n-1)`; `slopes` clamps the end derivatives
    /// (natural end conditions where `None`).
    fn new(values: Vec<f64>, slopes: (Option<f64>, Option<f64>)) -> Self {
        let n = values.len();
        let h = 1.0 / (n - 1) as f64;
        // tridiagonal system for the moments
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            sub[i] = h / 6.0;
            diag[i] = 2.0 * h / 3.0;
            sup[i] = h / 6.0;
            rhs[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h;
        }
        match slopes.0 {
            Some(s) => {
                diag[0] = h / 3.0;
                sup[0] = h / 6.0;
                rhs[0] = (values[1] - values[0]) / h - s;
            }
            None => diag[0] = 1.0,
        }
        match slopes.1 {
            Some(s) => {
                diag[n - 1] = h / 3.0;
                sub[n - 1] = h / 6.0;
                rhs[n - 1] = s - (values[n - 1] - values[n - 2]) / h;
            }
            None => diag[n - 1] = 1.0,
        }
        // Thomas algorithm
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut moments = vec![0.0; n];
        moments[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            moments[i] = (rhs[i] - sup[i] * moments[i + 1]) / diag[i];
        }
        Self { values, moments }
    }

    fn eval(&self, t: f64) -> [f64; 3] {
        let n = self.values.len();
        let h = 1.0 / (n - 1) as f64;
        let i = ((t / h).floor() as usize).min(n - 2);
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let a = (i as f64 + 1.0) * h - t;
        let b = t - i as f64 * h;
        let value = m0 * a.powi(3) / (6.0 * h)
            + m1 * b.powi(3) / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * a
            + (y1 / h - m1 * h / 6.0) * b;
        let d1 = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - (y0 / h - m0 * h / 6.0)
            + (y1 / h - m1 * h / 6.0);
        let d2 = (m0 * a + m1 * b) / h;
        [value, d1, d2]
    }
}

impl SampledCurve {
    /// `points` run from `A = (a, 0)` to `B = (0, b)`.
    pub fn new(points: &[Point], tangency: bool) -> Result<Self> {
        if points.len() < 4 {
            return invalid("a sampled curve needs at least 4 points");
        }
        let first = points[0];
        let last = points[points.len() - 1];
        if first.y != 0.0 || !(first.x > 0.0) || last.x != 0.0 || !(last.y > 0.0) {
            return invalid("sampled curve must start at (a, 0) and end at (0, b)");
        }
        let inner = &points[1..points.len() - 1];
        if inner.iter().any(|p| !(p.x > 0.0 && p.y > 0.0)) {
            return invalid("interior samples must lie in the open quarter plane");
        }
        let chord: f64 = points.windows(2).map(|w| w[0].distance(w[1])).sum();
        let (sx, sy) = if tangency {
            ((Some(0.0), Some(-chord)), (Some(chord), Some(0.0)))
        } else {
            ((None, None), (None, None))
        };
        Ok(Self {
            xs: Spline::new(points.iter().map(|p| p.x).collect(), sx),
            ys: Spline::new(points.iter().map(|p| p.y).collect(), sy),
        })
    }
}

impl CurveShape for SampledCurve {
    fn position(&self, t: f64) -> Point {
        Point::new(self.xs.eval(t)[0], self.ys.eval(t)[0])
    }

    fn derivative(&self, t: f64) -> (f64, f64) {
        (self.xs.eval(t)[1], self.ys.eval(t)[1])
    }

    fn second_derivative(&self, t: f64) -> (f64, f64) {
        (self.xs.eval(t)[2], self.ys.eval(t)[2])
    }
}

/// Curve description as found in run configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CurveSpec {
    Superellipse { a: f64, b: f64, p: f64 },
    Samples {
        points: Vec<[f64; 2]>,
        #[serde(default = "default_tangency")]
        tangency: bool,
    },
}

fn default_tangency() -> bool {
    true
}

impl Default for CurveSpec {
    fn default() -> Self {
        CurveSpec::Superellipse { a: 1.0, b: 1.0, p: 2.5 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> (f64, f64), t: f64) -> (f64, f64) {
        let h = 1e-6;
        let (l, r) = (f(t - h), f(t + h));
        ((r.0 - l.0) / (2.0 * h), (r.1 - l.1) / (2.0 * h))
    }

    #[test]
    fn superellipse_derivatives_match_differences() {
        let s = Superellipse::new(1.3, 0.7, 2.5).unwrap();
        for &t in &[0.05, 0.3, 0.5, 0.81, 0.97] {
            let d = s.derivative(t);
            let num = fd(|t| (s.position(t).x, s.position(t).y), t);
            assert!((d.0 - num.0).abs() < 1e-8 && (d.1 - num.1).abs() < 1e-8);
            let d2 = s.second_derivative(t);
            let num = fd(|t| s.derivative(t), t);
            assert!((d2.0 - num.0).abs() < 1e-6 && (d2.1 - num.1).abs() < 1e-6, "t = {t}");
            let p = s.position(t);
            let level = (p.x / 1.3).powf(2.5) + (p.y / 0.7).powf(2.5);
            assert!((level - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn superellipse_rejects_bad_exponent() {
        assert!(Superellipse::new(1.0, 1.0, 2.0).is_err());
        assert!(Superellipse::new(1.0, 1.0, 3.0).is_err());
        assert!(Superellipse::new(-1.0, 1.0, 2.5).is_err());
    }

    #[test]
    fn spline_interpolates_samples() {
        let pts: Vec<Point> = (0..=16)
            .map(|k| {
                let th = std::f64::consts::FRAC_PI_2 * k as f64 / 16.0;
                Point::new(th.cos(), th.sin())
            })
            .collect();
        let pts: Vec<Point> = pts
            .into_iter()
            .map(|p| Point::new(if p.x.abs() < 1e-15 { 0.0 } else { p.x }, if p.y.abs() < 1e-15 { 0.0 } else { p.y }))
            .collect();
        let c = SampledCurve::new(&pts, true).unwrap();
        for (k, p) in pts.iter().enumerate() {
            let q = c.position(k as f64 / 16.0);
            assert!(q.distance(*p) < 1e-14);
        }
        let d = c.derivative(0.0);
        assert!(d.0.abs() < 1e-14 && d.1 > 0.0);
    }
}
