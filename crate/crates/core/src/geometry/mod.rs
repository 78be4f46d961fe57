//! Boundary arcs Γ from `A = (a, 0)` to `B = (0, b)` in the quarter plane.

mod shapes;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_legendre, integrate, QuadConfig};

pub use shapes::{CurveShape, CurveSpec, SampledCurve, Superellipse};

/// Point of the closed quarter plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// `self + h·(dx, dy)`.
    pub fn offset(self, dir: (f64, f64), h: f64) -> Point {
        Point::new(self.x + h * dir.0, self.y + h * dir.1)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Where a point sits relative to the domain Ω bounded by Γ and the axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    OnBoundary,
    Exterior,
}

const ARC_PANELS: usize = 32;

/// An immutable boundary arc with a precomputed arclength table.
#[derive(Clone)]
pub struct Curve {
    shape: Arc<dyn CurveShape>,
    a: f64,
    b: f64,
    // parameter breakpoints and cumulative arclength at each
    breaks: Vec<f64>,
    cumulative: Vec<f64>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("shape", &self.shape)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("length", &self.length())
            .finish()
    }
}

fn arc_quad() -> QuadConfig {
    QuadConfig { abs_tol: 1e-15, rel_tol: 1e-14, ..QuadConfig::default() }
}

impl Curve {
    pub fn new(shape: impl CurveShape + 'static) -> Result<Self> {
        Self::from_arc(Arc::new(shape))
    }

    pub fn from_arc(shape: Arc<dyn CurveShape>) -> Result<Self> {
        let start = shape.position(0.0);
        let end = shape.position(1.0);
        if !(start.x > 0.0) || start.y.abs() > 1e-12 * start.x {
            return invalid(format!("curve must start on the positive x-axis, starts at {start}"));
        }
        if !(end.y > 0.0) || end.x.abs() > 1e-12 * end.y {
            return invalid(format!("curve must end on the positive y-axis, ends at {end}"));
        }
        for k in 1..256 {
            let t = k as f64 / 256.0;
            let p = shape.position(t);
            if !(p.x > 0.0 && p.y > 0.0) {
                return invalid(format!("curve leaves the open quarter plane at t = {t}"));
            }
            let d = shape.derivative(t);
            if !(d.0.hypot(d.1) > 0.0) {
                return Err(Error::DegenerateTangent { t });
            }
        }
        let breaks: Vec<f64> = (0..=ARC_PANELS).map(|k| k as f64 / ARC_PANELS as f64).collect();
        let mut cumulative = vec![0.0];
        for w in breaks.windows(2) {
            let piece = integrate(|t| speed_of(&*shape, t), w[0], w[1], &arc_quad())?;
            cumulative.push(cumulative.last().unwrap() + piece.value);
        }
        Ok(Self { shape, a: start.x, b: end.y, breaks, cumulative })
    }

    /// Builds the curve described by a configuration entry.
    pub fn from_spec(spec: &CurveSpec) -> Result<Self> {
        match spec {
            CurveSpec::Superellipse { a, b, p } => Curve::new(Superellipse::new(*a, *b, *p)?),
            CurveSpec::Samples { points, tangency } => {
                let pts: Vec<Point> = points.iter().map(|p| Point::new(p[0], p[1])).collect();
                Curve::new(SampledCurve::new(&pts, *tangency)?)
            }
        }
    }

    /// `x`-intercept `a` of the arc.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// `y`-intercept `b` of the arc.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn position(&self, t: f64) -> Point {
        self.shape.position(t)
    }

    pub fn derivative(&self, t: f64) -> (f64, f64) {
        self.shape.derivative(t)
    }

    pub fn second_derivative(&self, t: f64) -> (f64, f64) {
        self.shape.second_derivative(t)
    }

    /// The chord `γ(t1) - γ(t0)`.
    ///
    /// For nearby parameters away from the endpoints it is integrated from
    /// the derivative, which keeps full relative accuracy where the plain
    /// difference of positions would cancel.
    pub fn chord(&self, t0: f64, t1: f64) -> (f64, f64) {
        let h = t1 - t0;
        let room = t0.min(t1).min(1.0 - t0.max(t1));
        if h != 0.0 && h.abs() <= 0.25 * room {
            let rule = gauss_legendre(16);
            let (mut cx, mut cy) = (0.0, 0.0);
            for (u, w) in rule.nodes.iter().zip(&rule.weights) {
                let d = self.derivative(t0 + h * u);
                cx += w * d.0;
                cy += w * d.1;
            }
            return (cx * h, cy * h);
        }
        let (p0, p1) = (self.position(t0), self.position(t1));
        (p1.x - p0.x, p1.y - p0.y)
    }

    /// `|dγ/dt|`, the Jacobian between parameter and arclength.
    pub fn speed(&self, t: f64) -> f64 {
        speed_of(&*self.shape, t)
    }

    /// Unit tangent `(dx/ds, dy/ds)` in the direction `A → B`.
    pub fn tangent(&self, t: f64) -> Result<(f64, f64)> {
        let (dx, dy) = self.derivative(t);
        let speed = dx.hypot(dy);
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::DegenerateTangent { t });
        }
        Ok((dx / speed, dy / speed))
    }

    /// Exterior unit normal `(dy/ds, -dx/ds)`: Ω lies to the left of the
    /// traversal `A → B`.
    pub fn exterior_normal(&self, t: f64) -> Result<(f64, f64)> {
        let (tx, ty) = self.tangent(t)?;
        Ok((ty, -tx))
    }

    /// Arclength `s(t)` measured from `A`.
    pub fn arclength(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let k = ((t * ARC_PANELS as f64).floor() as usize).min(ARC_PANELS - 1);
        let lo = self.breaks[k];
        if t == lo {
            return self.cumulative[k];
        }
        let piece = integrate(|u| self.speed(u), lo, t, &arc_quad())
            .map(|r| r.value)
            .unwrap_or(0.0);
        self.cumulative[k] + piece
    }

    /// Inverse of [`Curve::arclength`].
    pub fn param_at_arclength(&self, s: f64) -> f64 {
        let total = self.length();
        if s <= 0.0 {
            return 0.0;
        }
        if s >= total {
            return 1.0;
        }
        let k = self.cumulative.partition_point(|&c| c <= s).saturating_sub(1).min(ARC_PANELS - 1);
        let (mut lo, mut hi) = (self.breaks[k], self.breaks[k + 1]);
        let mut t = lo + (hi - lo) * (s - self.cumulative[k]) / (self.cumulative[k + 1] - self.cumulative[k]);
        for _ in 0..60 {
            let g = self.arclength(t) - s;
            if g.abs() <= 1e-15 * total {
                break;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let newton = t - g / self.speed(t);
            t = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        }
        t
    }

    /// Parameter of the point of Γ closest to `p`, and the distance.
    pub fn closest_param(&self, p: Point) -> (f64, f64) {
        const SAMPLES: usize = 512;
        let mut best = (0.0, f64::INFINITY);
        for k in 0..=SAMPLES {
            let t = k as f64 / SAMPLES as f64;
            let d = self.position(t).distance(p);
            if d < best.1 {
                best = (t, d);
            }
        }
        let h = 1.0 / SAMPLES as f64;
        let (mut lo, mut hi) = ((best.0 - h).max(0.0), (best.0 + h).min(1.0));
        let dist = |t: f64| self.position(t).distance(p);
        // golden-section refinement on the bracketing cell
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - g * (hi - lo);
        let mut d = lo + g * (hi - lo);
        let (mut fc, mut fd) = (dist(c), dist(d));
        for _ in 0..80 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = dist(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = dist(d);
            }
        }
        let t = 0.5 * (lo + hi);
        // polish with Newton on (γ - p)·γ' = 0
        let mut t_best = t;
        let mut d_best = dist(t);
        let mut tn = t;
        for _ in 0..4 {
            let q = self.position(tn);
            let d1 = self.derivative(tn);
            let d2 = self.second_derivative(tn);
            let (ex, ey) = (q.x - p.x, q.y - p.y);
            let g1 = ex * d1.0 + ey * d1.1;
            let g2 = d1.0 * d1.0 + d1.1 * d1.1 + ex * d2.0 + ey * d2.1;
            if g2 <= 0.0 {
                break;
            }
            tn = (tn - g1 / g2).clamp(0.0, 1.0);
            let dn = dist(tn);
            if dn < d_best {
                d_best = dn;
                t_best = tn;
            }
        }
        for end in [0.0, 1.0] {
            let de = dist(end);
            if de < d_best {
                d_best = de;
                t_best = end;
            }
        }
        (t_best, d_best)
    }

    /// Classifies `p` against Ω, treating distances below `tol` as on Γ.
    pub fn locate(&self, p: Point, tol: f64) -> Location {
        let (t, d) = self.closest_param(p);
        if d <= tol {
            return Location::OnBoundary;
        }
        if p.x < 0.0 || p.y < 0.0 {
            return Location::Exterior;
        }
        let q = self.position(t);
        let n = match self.exterior_normal(t.clamp(1e-9, 1.0 - 1e-9)) {
            Ok(n) => n,
            Err(_) => return Location::Exterior,
        };
        if (p.x - q.x) * n.0 + (p.y - q.y) * n.1 < 0.0 {
            Location::Interior
        } else {
            Location::Exterior
        }
    }

    /// Signed area enclosed by Γ and the two axis segments; positive for the
    /// counterclockwise orientation `A → B → O → A`.
    pub fn signed_area(&self) -> f64 {
        // x dy - y dx vanishes on both axes
        integrate(
            |t| {
                let p = self.position(t);
                let (dx, dy) = self.derivative(t);
                0.5 * (p.x * dy - p.y * dx)
            },
            0.0,
            1.0,
            &arc_quad(),
        )
        .map(|r| r.value)
        .unwrap_or(f64::NAN)
    }
}

fn speed_of(shape: &dyn CurveShape, t: f64) -> f64 {
    let (dx, dy) = shape.derivative(t);
    dx.hypot(dy)
}

/// Result of the numerical endpoint-tangency check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    /// Fitted exponent of `|dx/ds|` against `y` near `A`.
    pub epsilon_fit_at_a: f64,
    /// Fitted exponent of `|dy/ds|` against `x` near `B`.
    pub epsilon_fit_at_b: f64,
    pub passes: bool,
    /// Smallest `c` with `|dx/ds| ≤ c·y^{1+ε}`, `|dy/ds| ≤ c·x^{1+ε}` on the samples.
    pub c_estimate: f64,
}

/// Slack subtracted from the target exponent before comparing fits.
pub const FIT_SLACK: f64 = 0.05;

/// Fits the endpoint tangency exponents by log–log regression over a
/// geometric sequence of approach distances.
pub fn check_admissibility(curve: &Curve, epsilon: f64) -> Result<AdmissibilityReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    let ts: Vec<f64> = (0..9).map(|k| 10f64.powf(-2.0 - 0.5 * k as f64)).collect();
    let mut near_a = Vec::new();
    let mut near_b = Vec::new();
    let mut c_estimate: f64 = 0.0;
    for &t in &ts {
        if let Ok((tx, _)) = curve.tangent(t) {
            let y = curve.position(t).y;
            near_a.push((y.ln(), tx.abs().max(f64::MIN_POSITIVE).ln()));
            c_estimate = c_estimate.max(tx.abs() / y.powf(1.0 + epsilon));
        }
        if let Ok((_, ty)) = curve.tangent(1.0 - t) {
            let x = curve.position(1.0 - t).x;
            near_b.push((x.ln(), ty.abs().max(f64::MIN_POSITIVE).ln()));
            c_estimate = c_estimate.max(ty.abs() / x.powf(1.0 + epsilon));
        }
    }
    let fit_a = slope(&near_a);
    let fit_b = slope(&near_b);
    let target = 1.0 + epsilon - FIT_SLACK;
    Ok(AdmissibilityReport {
        epsilon_fit_at_a: fit_a,
        epsilon_fit_at_b: fit_b,
        passes: fit_a >= target && fit_b >= target,
        c_estimate,
    })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> Curve {
        Curve::new(Superellipse::new(1.0, 1.0, 2.5).unwrap()).unwrap()
    }

    #[test]
    fn endpoints_and_normals() {
        let c = curve();
        assert_eq!(c.position(0.0), Point::new(1.0, 0.0));
        assert!(c.position(1.0).distance(Point::new(0.0, 1.0)) < 1e-15);
        let n = c.exterior_normal(0.5).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((n.0 - s).abs() < 1e-14 && (n.1 - s).abs() < 1e-14);
        let n = c.exterior_normal(1e-6).unwrap();
        assert!(n.0 > 0.999_999 && n.1.abs() < 1e-6);
    }

    #[test]
    fn arclength_is_consistent() {
        let c = curve();
        let oracle = integrate(|t| c.speed(t), 0.0, 1.0, &QuadConfig::default()).unwrap();
        assert!((c.length() - oracle.value).abs() < 1e-12);
        for &t in &[0.0, 0.013, 0.4, 0.77, 1.0] {
            let s = c.arclength(t);
            assert!((c.param_at_arclength(s) - t).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn admissibility_fits() {
        let rep = check_admissibility(&curve(), 0.5).unwrap();
        assert!(rep.passes, "{rep:?}");
        assert!((rep.epsilon_fit_at_a - 1.5).abs() < 0.05);
        let circle = Curve::new(Superellipse::unchecked(1.0, 1.0, 2.0)).unwrap();
        let rep = check_admissibility(&circle, 0.5).unwrap();
        assert!(!rep.passes);
        assert!((rep.epsilon_fit_at_a - 1.0).abs() < 0.05);
        let steep = Curve::new(Superellipse::new(1.0, 1.0, 2.9).unwrap()).unwrap();
        assert!(check_admissibility(&steep, 0.1).unwrap().passes);
    }

    #[test]
    fn closest_point_and_location() {
        let c = curve();
        let on = c.position(0.3);
        let (t, d) = c.closest_param(on);
        assert!((t - 0.3).abs() < 1e-9 && d < 1e-12);
        let n = c.exterior_normal(0.3).unwrap();
        let out = on.offset(n, 0.05);
        let (t, d) = c.closest_param(out);
        assert!((t - 0.3).abs() < 1e-8 && (d - 0.05).abs() < 1e-12);
        assert_eq!(c.locate(out, 1e-12), Location::Exterior);
        assert_eq!(c.locate(on.offset(n, -0.05), 1e-12), Location::Interior);
        assert_eq!(c.locate(Point::new(3.0, 3.0), 1e-12), Location::Exterior);
        assert_eq!(c.locate(Point::new(0.5, 0.0), 1e-12), Location::Interior);
    }

    #[test]
    fn orientation_is_counterclockwise() {
        assert!(curve().signed_area() > 0.0);
    }
}
