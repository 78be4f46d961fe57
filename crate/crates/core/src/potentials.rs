//! Double-layer potentials built on the kernels `x^{2α} y^{2β} ∂q_i/∂n`,
//! their gauge values, the axis corrections, boundary limits and the
//! boundary-only Green identities.
//!
//! Integrals over Γ are taken in the curve parameter with the graded
//! substitution of [`try_integrate_graded`], breakpoints sitting at the
//! endpoints of Γ (where the weight vanishes with a fractional power) and
//! at the foot point of the pole (where the kernel is log-singular or
//! sharply peaked).

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::geometry::{Curve, Location, Point};
use crate::kernels::{
    fundamental_solution, layer_integrand, layer_integrand_on_curve, normalization_constant, weighted_gradient, Params,
    SolutionIndex,
};
use crate::quadrature::{try_integrate_graded, QuadConfig, QuadResult};
use crate::specfun::{Gauss2F1, SeriesControl};

/// Distance (relative to the size of Γ) below which a point counts as on Γ.
pub const ON_CURVE_TOL: f64 = 1e-10;

/// Inside this (relative) distance from the pole the on-curve kernel is not
/// evaluated directly: closer evaluations lose accuracy to cancellation
/// between the `1/r` parts of the two gradient components. The kernel is
/// continued there by its log model `K(u) ≈ K(δ) - C ln(u/δ)`, with `C`
/// fitted from `K(δ)` and `K(2δ)`.
const DIAGONAL_CLAMP: f64 = 1e-6;

fn curve_scale(curve: &Curve) -> f64 {
    curve.a().max(curve.b())
}

/// A continuous density on Γ.
#[derive(Clone)]
pub enum Density {
    Constant(f64),
    /// `μ(s)` as a function of arclength `s ∈ [0, l]`.
    Arclength(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Piecewise-polynomial interpolant in the curve parameter.
    Sampled(SampledDensity),
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Constant(c) => write!(f, "Constant({c})"),
            Density::Arclength(_) => write!(f, "Arclength(<fn>)"),
            Density::Sampled(s) => f.debug_tuple("Sampled").field(s).finish(),
        }
    }
}

impl Density {
    pub fn constant(c: f64) -> Self {
        Density::Constant(c)
    }

    pub fn from_arclength(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Density::Arclength(Arc::new(f))
    }

    /// `μ(s) = sin(πs/l)`.
    pub fn sine(curve: &Curve) -> Self {
        let l = curve.length();
        Self::from_arclength(move |s| (std::f64::consts::PI * s / l).sin())
    }

    /// `μ` at the curve parameter `t`.
    pub fn at(&self, curve: &Curve, t: f64) -> f64 {
        match self {
            Density::Constant(c) => *c,
            Density::Arclength(f) => f(curve.arclength(t)),
            Density::Sampled(s) => s.eval(t),
        }
    }
}

/// One interpolation panel of a [`SampledDensity`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPanel {
    pub lo: f64,
    pub hi: f64,
    /// Interpolation nodes (curve parameters inside `[lo, hi]`).
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    bary: Vec<f64>,
}

impl DensityPanel {
    pub fn new(lo: f64, hi: f64, nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != values.len() {
            return invalid("density panel needs matching, non-empty nodes and values");
        }
        if !(lo < hi) {
            return invalid(format!("density panel [{lo}, {hi}] is empty"));
        }
        let bary = barycentric_weights(&nodes);
        Ok(Self { lo, hi, nodes, values, bary })
    }

    fn eval(&self, t: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((x, v), w) in self.nodes.iter().zip(&self.values).zip(&self.bary) {
            let d = t - x;
            if d == 0.0 {
                return *v;
            }
            num += w / d * v;
            den += w / d;
        }
        num / den
    }
}

/// Barycentric weights `1/Π_{k≠j}(x_j - x_k)` for Lagrange interpolation.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, xj)| {
            let prod: f64 = nodes
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, xk)| xj - xk)
                .product();
            1.0 / prod
        })
        .collect()
}

/// A density known at panel nodes, extended by panel-wise interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledDensity {
    panels: Vec<DensityPanel>,
}

impl SampledDensity {
    /// Panels must tile `[0, 1]` in order.
    pub fn new(panels: Vec<DensityPanel>) -> Result<Self> {
        if panels.is_empty() {
            return invalid("a sampled density needs at least one panel");
        }
        let tiles = panels.first().map(|p| p.lo) == Some(0.0)
            && panels.last().map(|p| p.hi) == Some(1.0)
            && panels.windows(2).all(|w| w[0].hi == w[1].lo);
        if !tiles {
            return invalid("density panels must tile [0, 1]");
        }
        Ok(Self { panels })
    }

    pub fn panels(&self) -> &[DensityPanel] {
        &self.panels
    }

    /// All node parameters and values in order.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.panels.iter().flat_map(|p| p.nodes.iter().copied().zip(p.values.iter().copied()))
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = self.panels.partition_point(|p| p.hi < t).min(self.panels.len() - 1);
        self.panels[k].eval(t)
    }
}

/// Side from which Γ is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitSide {
    Interior,
    Exterior,
}

impl LimitSide {
    /// The free term `∓½`: `-½` from inside, `+½` from outside.
    pub fn sign(self) -> f64 {
        match self {
            LimitSide::Interior => -0.5,
            LimitSide::Exterior => 0.5,
        }
    }
}

impl fmt::Display for LimitSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitSide::Interior => "interior",
            LimitSide::Exterior => "exterior",
        })
    }
}

fn breaks_with(foci: &[f64]) -> Vec<f64> {
    let mut b = vec![0.0, 1.0];
    b.extend(foci.iter().copied().filter(|t| *t > 0.0 && *t < 1.0));
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// `∫ μ K_i` over Γ for a pole off Γ, graded toward `focus` (if any).
fn layer_integral(
    i: SolutionIndex,
    mu: &Density,
    curve: &Curve,
    p0: Point,
    focus: Option<f64>,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<QuadResult> {
    let breaks = breaks_with(focus.as_slice());
    try_integrate_graded(
        |t| {
            let m = mu.at(curve, t);
            if m == 0.0 {
                return Ok(0.0);
            }
            Ok(m * layer_integrand(i, curve, t, p0, params)?)
        },
        &breaks,
        qcfg,
    )
}

/// `∫ μ(s) K_i(s, t*) ds` for the pole `γ(t*)` on Γ: an ordinary improper
/// integral with a log singularity at `s = t*`.
pub(crate) fn on_curve_integral(
    i: SolutionIndex,
    mu: &Density,
    curve: &Curve,
    t_star: f64,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<QuadResult> {
    let breaks = breaks_with(&[t_star]);
    let diag = DiagonalKernel::new(i, curve, t_star, params);
    try_integrate_graded(
        |t| {
            let m = mu.at(curve, t);
            if m == 0.0 {
                return Ok(0.0);
            }
            Ok(m * diag.eval(t)?)
        },
        &breaks,
        qcfg,
    )
}

/// The layer integrand `K_i(s, t*) |γ'(s)|` (per unit parameter `s`) for a
/// pole on Γ, safe to evaluate arbitrarily close to `s = t*`.
pub struct DiagonalKernel<'a> {
    i: SolutionIndex,
    curve: &'a Curve,
    params: &'a Params,
    t_star: f64,
    // clamp radius in arclength and in parameter
    delta: f64,
    dt: f64,
}

impl<'a> DiagonalKernel<'a> {
    pub fn new(i: SolutionIndex, curve: &'a Curve, t_star: f64, params: &'a Params) -> Self {
        let delta = DIAGONAL_CLAMP * curve_scale(curve);
        let dt = delta / curve.speed(t_star);
        Self { i, curve, params, t_star, delta, dt }
    }

    fn per_arc(&self, s: f64) -> Result<f64> {
        Ok(layer_integrand_on_curve(self.i, self.curve, s, self.t_star, self.params)? / self.curve.speed(s))
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        let off = s - self.t_star;
        if off.abs() >= self.dt {
            return layer_integrand_on_curve(self.i, self.curve, s, self.t_star, self.params);
        }
        // continue from the side s lies on, unless an end of Γ cuts it off
        let up = (off >= 0.0 && self.t_star + 2.0 * self.dt <= 1.0) || self.t_star - 2.0 * self.dt < 0.0;
        let dir = if up { 1.0 } else { -1.0 };
        let k1 = self.per_arc(self.t_star + dir * self.dt)?;
        let k2 = self.per_arc(self.t_star + 2.0 * dir * self.dt)?;
        let c = (k1 - k2) / std::f64::consts::LN_2;
        let u = (off.abs() * self.curve.speed(self.t_star)).max(f64::MIN_POSITIVE);
        Ok((k1 - c * (u / self.delta).ln()) * self.curve.speed(s))
    }
}

/// Double-layer potential `w^{(i)}(p₀) = ∫₀^l x^{2α} y^{2β} μ(s) ∂q_i/∂n ds`
/// for `p₀` off Γ.
pub fn double_layer(
    i: SolutionIndex,
    mu: &Density,
    curve: &Curve,
    p0: Point,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<QuadResult> {
    params.validate()?;
    let (t_c, dist) = curve.closest_param(p0);
    if dist <= ON_CURVE_TOL * curve_scale(curve) {
        return Err(Error::PointOnBoundary { distance: dist });
    }
    let focus = (dist < 0.5 * curve.length()).then_some(t_c);
    layer_integral(i, mu, curve, p0, focus, params, qcfg)
}

/// The gauge integral `w₁^{(i)}(p₀)`: the double layer with `μ ≡ 1`, for
/// `p₀` anywhere in the closed quarter plane (on Γ included).
pub fn gauge(
    i: SolutionIndex,
    curve: &Curve,
    p0: Point,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<QuadResult> {
    params.validate()?;
    let one = Density::constant(1.0);
    let (t_c, dist) = curve.closest_param(p0);
    if dist <= ON_CURVE_TOL * curve_scale(curve) {
        return on_curve_integral(i, &one, curve, t_c, params, qcfg);
    }
    let focus = (dist < 0.5 * curve.length()).then_some(t_c);
    layer_integral(i, &one, curve, p0, focus, params, qcfg)
}

/// Exact value of the gauge integral minus its axis correction, by the
/// location of the pole: `-1` inside, `-½` on Γ, `0` outside.
pub fn gauge_expectation(location: Location) -> f64 {
    match location {
        Location::Interior => -1.0,
        Location::OnBoundary => -0.5,
        Location::Exterior => 0.0,
    }
}

/// The axis contribution to the gauge integral of `q_i` (zero for `q₁`):
///
/// * `i = 2`: `k₂(1-2α) x₀^{1-2α} ∫₀^b y^{2β} (r²)^{α-1} (r₂²)^{-β} F(α+β-1, β; 2β; (r₂²-r²)/r₂²)|_{x=0} dy`
/// * `i = 3`: the mirror image along `OX`
/// * `i = 4`: the sum of one integral along each axis.
pub fn axis_correction(
    i: SolutionIndex,
    p0: Point,
    a: f64,
    b: f64,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<QuadResult> {
    params.validate()?;
    if !(a > 0.0 && b > 0.0) {
        return invalid(format!("axis intercepts must be positive, got ({a}, {b})"));
    }
    if p0.x < 0.0 || p0.y < 0.0 {
        return invalid(format!("pole {p0} must lie in the closed quarter plane"));
    }
    let (al, be) = (params.alpha, params.beta);
    let k = normalization_constant(i, params);
    let zero = QuadResult { value: 0.0, err_estimate: 0.0, evaluations: 0, panels: 0, converged: true };
    match i {
        SolutionIndex::Q1 => Ok(zero),
        SolutionIndex::Q2 => {
            let pre = k * (1.0 - 2.0 * al) * p0.x.powf(1.0 - 2.0 * al);
            if pre == 0.0 {
                return Ok(zero);
            }
            let f = Gauss2F1::new(al + be - 1.0, be, 2.0 * be)?;
            let r = along_oy(p0, b, qcfg, |y, r_sq, r2_sq, z, zc| {
                Ok(y.powf(2.0 * be) * r_sq.powf(al - 1.0) * r2_sq.powf(-be) * f.eval_pair(z, zc, &ctrl())?)
            })?;
            Ok(scale_result(r, pre))
        }
        SolutionIndex::Q3 => {
            let pre = k * (1.0 - 2.0 * be) * p0.y.powf(1.0 - 2.0 * be);
            if pre == 0.0 {
                return Ok(zero);
            }
            let f = Gauss2F1::new(al + be - 1.0, al, 2.0 * al)?;
            let r = along_ox(p0, a, qcfg, |x, r_sq, r1_sq, z, zc| {
                Ok(x.powf(2.0 * al) * r_sq.powf(be - 1.0) * r1_sq.powf(-al) * f.eval_pair(z, zc, &ctrl())?)
            })?;
            Ok(scale_result(r, pre))
        }
        SolutionIndex::Q4 => {
            let common = k * p0.x.powf(1.0 - 2.0 * al) * p0.y.powf(1.0 - 2.0 * be);
            if common == 0.0 {
                return Ok(zero);
            }
            let fx = Gauss2F1::new(be - al, 1.0 - al, 2.0 - 2.0 * al)?;
            let on_ox = along_ox(p0, a, qcfg, |x, r_sq, r1_sq, z, zc| {
                Ok(x * r_sq.powf(be - 1.0) * r1_sq.powf(al - 1.0) * fx.eval_pair(z, zc, &ctrl())?)
            })?;
            let fy = Gauss2F1::new(al - be, 1.0 - be, 2.0 - 2.0 * be)?;
            let on_oy = along_oy(p0, b, qcfg, |y, r_sq, r2_sq, z, zc| {
                Ok(y * r_sq.powf(al - 1.0) * r2_sq.powf(be - 1.0) * fy.eval_pair(z, zc, &ctrl())?)
            })?;
            Ok(scale_result(on_ox, common * (1.0 - 2.0 * be))
                .combine(scale_result(on_oy, common * (1.0 - 2.0 * al))))
        }
    }
}

fn ctrl() -> SeriesControl {
    SeriesControl::default()
}

fn scale_result(r: QuadResult, c: f64) -> QuadResult {
    QuadResult { value: c * r.value, err_estimate: c.abs() * r.err_estimate, ..r }
}

/// `∫₀^b f(y, r², r₂², z, 1-z) dy` along `x = 0`, with `z = 4yy₀/r₂²`.
fn along_oy(
    p0: Point,
    b: f64,
    qcfg: &QuadConfig,
    mut f: impl FnMut(f64, f64, f64, f64, f64) -> Result<f64>,
) -> Result<QuadResult> {
    let mut breaks = vec![0.0, b];
    if p0.y > 0.0 && p0.y < b {
        breaks.insert(1, p0.y);
    }
    try_integrate_graded(
        |y| {
            let r_sq = p0.x * p0.x + (y - p0.y).powi(2);
            let r2_sq = p0.x * p0.x + (y + p0.y).powi(2);
            if !(r_sq > 0.0) {
                return Err(Error::CoincidentPoints { r_sq });
            }
            f(y, r_sq, r2_sq, 4.0 * y * p0.y / r2_sq, r_sq / r2_sq)
        },
        &breaks,
        qcfg,
    )
}

/// `∫₀^a f(x, r², r₁², z, 1-z) dx` along `y = 0`, with `z = 4xx₀/r₁²`.
fn along_ox(
    p0: Point,
    a: f64,
    qcfg: &QuadConfig,
    f: impl FnMut(f64, f64, f64, f64, f64) -> Result<f64>,
) -> Result<QuadResult> {
    along_oy(Point::new(p0.y, p0.x), a, qcfg, f)
}

/// Limiting value of `w^{(i)}` at `γ(t)` from the given side:
/// `∓½ μ(t) + ∫₀^l μ(s) K_i(s, t) ds`.
pub fn boundary_value(
    i: SolutionIndex,
    mu: &Density,
    curve: &Curve,
    t: f64,
    side: LimitSide,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<QuadResult> {
    params.validate()?;
    if !(t > 0.0 && t < 1.0) {
        return invalid(format!("boundary parameter {t} must lie in (0, 1)"));
    }
    let r = on_curve_integral(i, mu, curve, t, params, qcfg)?;
    Ok(QuadResult { value: side.sign() * mu.at(curve, t) + r.value, ..r })
}

/// Settings of the off-curve extrapolation in [`direct_limit_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitOptions {
    /// Largest offset as a fraction of the length of Γ.
    pub d0_fraction: f64,
    /// Offsets `d₀ 2^{-k}` for `k = 0..=levels`.
    pub levels: usize,
    /// Number of Richardson columns (error terms `d, d², …` removed).
    pub richardson_terms: usize,
    /// Largest acceptable change between the last two extrapolants, relative
    /// to `1 + |value|`.
    pub max_spread: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self { d0_fraction: 0.1, levels: 12, richardson_terms: 3, max_spread: 1e-6 }
    }
}

/// Outcome of an extrapolated limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    /// Difference between the last two extrapolants.
    pub spread: f64,
    /// `(offset, potential)` samples.
    pub samples: Vec<(f64, f64)>,
    pub evaluations: usize,
}

/// Richardson table for samples at offsets halving each step; `terms`
/// columns remove error terms `d, d², …, d^{terms-1}`. Returns the last
/// two entries of the final column.
pub fn richardson(values: &[f64], terms: usize) -> Option<(f64, f64)> {
    let cols = terms.max(1);
    if values.len() < cols + 1 {
        return None;
    }
    let mut col = values.to_vec();
    for j in 1..cols {
        let f = 2f64.powi(j as i32);
        col = col.windows(2).map(|w| w[1] + (w[1] - w[0]) / (f - 1.0)).collect();
    }
    let n = col.len();
    Some((col[n - 1], col[n - 2]))
}

/// Limit of `w^{(i)}` at `γ(t)` from approaching points `γ(t) ± d_k n(t)`,
/// Richardson-extrapolated to `d → 0`. Independent of [`boundary_value`].
pub fn direct_limit(
    i: SolutionIndex,
    mu: &Density,
    curve: &Curve,
    t: f64,
    side: LimitSide,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<Extrapolation> {
    direct_limit_with(i, mu, curve, t, side, params, qcfg, &LimitOptions::default())
}

#[allow(clippy::too_many_arguments)]
pub fn direct_limit_with(
    i: SolutionIndex,
    mu: &Density,
    curve: &Curve,
    t: f64,
    side: LimitSide,
    params: &Params,
    qcfg: &QuadConfig,
    opts: &LimitOptions,
) -> Result<Extrapolation> {
    params.validate()?;
    if !(t > 0.0 && t < 1.0) {
        return invalid(format!("boundary parameter {t} must lie in (0, 1)"));
    }
    let base = curve.position(t);
    let n = curve.exterior_normal(t)?;
    let dir = match side {
        LimitSide::Interior => (-n.0, -n.1),
        LimitSide::Exterior => n,
    };
    let d0 = opts.d0_fraction * curve.length();
    let mut samples = Vec::with_capacity(opts.levels + 1);
    let mut evaluations = 0;
    for k in 0..=opts.levels {
        let d = d0 * 0.5f64.powi(k as i32);
        let p0 = base.offset(dir, d);
        if p0.x < 0.0 || p0.y < 0.0 {
            return invalid(format!("offset point {p0} leaves the quarter plane; reduce d0"));
        }
        // the foot point is known; no need to search for it
        let r = layer_integral(i, mu, curve, p0, Some(t), params, qcfg)?;
        evaluations += r.evaluations;
        samples.push((d, r.value));
    }
    let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let (value, prev) = richardson(&values, opts.richardson_terms)
        .ok_or_else(|| Error::InvalidParams("too few levels for the Richardson table".into()))?;
    let spread = (value - prev).abs();
    if !(spread <= opts.max_spread * (1.0 + value.abs())) {
        return Err(Error::ExtrapolationDiverged { spread });
    }
    Ok(Extrapolation { value, spread, samples, evaluations })
}

/// A regular solution of the equation in Ω, known with its weighted
/// gradient `(x^{2α} u_x, y^{2β} u_y)` up to the axes.
pub trait Solution: Send + Sync {
    fn value(&self, p: Point, params: &Params) -> Result<f64>;
    fn weighted_gradient(&self, p: Point, params: &Params) -> Result<(f64, f64)>;
    /// A point near which the solution varies rapidly (its pole, say).
    fn singular_point(&self) -> Option<Point> {
        None
    }
}

/// Closed-form solutions used in the identity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactSolution {
    Constant(f64),
    /// `x^{1-2α}`
    PowerX,
    /// `y^{1-2β}`
    PowerY,
    /// `x^{1-2α} y^{1-2β}`
    PowerXY,
    /// `q_i(·; pole)`, regular in Ω when the pole lies outside Ω̄.
    Fundamental { index: SolutionIndex, pole: Point },
}

impl Solution for ExactSolution {
    fn value(&self, p: Point, params: &Params) -> Result<f64> {
        let (ex, ey) = (1.0 - 2.0 * params.alpha, 1.0 - 2.0 * params.beta);
        Ok(match *self {
            ExactSolution::Constant(c) => c,
            ExactSolution::PowerX => p.x.powf(ex),
            ExactSolution::PowerY => p.y.powf(ey),
            ExactSolution::PowerXY => p.x.powf(ex) * p.y.powf(ey),
            ExactSolution::Fundamental { index, pole } => fundamental_solution(index, p, pole, params)?,
        })
    }

    fn weighted_gradient(&self, p: Point, params: &Params) -> Result<(f64, f64)> {
        let (ex, ey) = (1.0 - 2.0 * params.alpha, 1.0 - 2.0 * params.beta);
        Ok(match *self {
            ExactSolution::Constant(_) => (0.0, 0.0),
            ExactSolution::PowerX => (ex, 0.0),
            ExactSolution::PowerY => (0.0, ey),
            ExactSolution::PowerXY => (ex * p.y.powf(ey), ey * p.x.powf(ex)),
            ExactSolution::Fundamental { index, pole } => weighted_gradient(index, p, pole, params)?,
        })
    }

    fn singular_point(&self) -> Option<Point> {
        match *self {
            ExactSolution::Fundamental { pole, .. } => Some(pole),
            _ => None,
        }
    }
}

/// `∮ x^{2α} y^{2β} (u ∂v/∂n - v ∂u/∂n) ds` over Γ and the two axis
/// segments; vanishes for regular solutions `u`, `v`.
pub fn reciprocity_check(
    u: &dyn Solution,
    v: &dyn Solution,
    curve: &Curve,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<QuadResult> {
    params.validate()?;
    let (al, be) = (params.alpha, params.beta);
    let foci: Vec<Point> = [u.singular_point(), v.singular_point()].into_iter().flatten().collect();

    // Γ: n ds = (dy, -dx) dt
    let gamma_foci: Vec<f64> = foci.iter().map(|&p| curve.closest_param(p).0).collect();
    let on_gamma = try_integrate_graded(
        |t| {
            let p = curve.position(t);
            let (dx, dy) = curve.derivative(t);
            let (xa, yb) = (p.x.powf(2.0 * al), p.y.powf(2.0 * be));
            let flux = |g: (f64, f64)| yb * g.0 * dy - xa * g.1 * dx;
            let (uv, vv) = (u.value(p, params)?, v.value(p, params)?);
            let (ug, vg) = (u.weighted_gradient(p, params)?, v.weighted_gradient(p, params)?);
            Ok(uv * flux(vg) - vv * flux(ug))
        },
        &breaks_with(&gamma_foci),
        qcfg,
    )?;

    // x = 0, normal -e_x
    let b = curve.b();
    let oy_foci: Vec<f64> = foci.iter().map(|p| p.y / b).collect();
    let on_oy = try_integrate_graded(
        |s| {
            let p = Point::new(0.0, b * s);
            let yb = p.y.powf(2.0 * be);
            let (uv, vv) = (u.value(p, params)?, v.value(p, params)?);
            let (ug, vg) = (u.weighted_gradient(p, params)?, v.weighted_gradient(p, params)?);
            Ok(-b * yb * (uv * vg.0 - vv * ug.0))
        },
        &breaks_with(&oy_foci),
        qcfg,
    )?;

    // y = 0, normal -e_y
    let a = curve.a();
    let ox_foci: Vec<f64> = foci.iter().map(|p| p.x / a).collect();
    let on_ox = try_integrate_graded(
        |s| {
            let p = Point::new(a * s, 0.0);
            let xa = p.x.powf(2.0 * al);
            let (uv, vv) = (u.value(p, params)?, v.value(p, params)?);
            let (ug, vg) = (u.weighted_gradient(p, params)?, v.weighted_gradient(p, params)?);
            Ok(-a * xa * (uv * vg.1 - vv * ug.1))
        },
        &breaks_with(&ox_foci),
        qcfg,
    )?;
    Ok(on_gamma.combine(on_oy).combine(on_ox))
}

/// `∮ x^{2α} y^{2β} ∂u/∂n ds` over Γ and the two axis segments; vanishes
/// for regular solutions.
pub fn flux_integral(
    u: &dyn Solution,
    curve: &Curve,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<QuadResult> {
    reciprocity_check(&ExactSolution::Constant(1.0), u, curve, params, qcfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Superellipse;

    fn curve() -> Curve {
        Curve::new(Superellipse::new(1.0, 1.0, 2.5).unwrap()).unwrap()
    }

    fn quarter() -> Params {
        Params::new(0.25, 0.25).unwrap()
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn gauge_of_first_potential_by_location() {
        let c = curve();
        let p = quarter();
        let inside = gauge(SolutionIndex::Q1, &c, Point::new(0.4, 0.3), &p, &cfg()).unwrap();
        assert!((inside.value + 1.0).abs() < 1e-9, "{}", inside.value);
        let outside = gauge(SolutionIndex::Q1, &c, Point::new(3.0, 3.0), &p, &cfg()).unwrap();
        assert!(outside.value.abs() < 1e-9, "{}", outside.value);
        let on = gauge(SolutionIndex::Q1, &c, c.position(0.5), &p, &cfg()).unwrap();
        assert!((on.value + 0.5).abs() < 1e-8, "{}", on.value);
    }

    #[test]
    fn double_layer_refuses_points_on_the_curve() {
        let c = curve();
        let r = double_layer(SolutionIndex::Q1, &Density::constant(1.0), &c, c.position(0.3), &quarter(), &cfg());
        assert!(matches!(r, Err(Error::PointOnBoundary { .. })));
    }

    #[test]
    fn jump_is_exact() {
        let c = curve();
        let mu = Density::sine(&c);
        let p = quarter();
        let int = boundary_value(SolutionIndex::Q1, &mu, &c, 0.4, LimitSide::Interior, &p, &cfg()).unwrap();
        let ext = boundary_value(SolutionIndex::Q1, &mu, &c, 0.4, LimitSide::Exterior, &p, &cfg()).unwrap();
        assert!((ext.value - int.value - mu.at(&c, 0.4)).abs() < 1e-14);
    }

    #[test]
    fn richardson_removes_polynomial_terms() {
        let vals: Vec<f64> = (0..6).map(|k| {
            let d = 0.5f64.powi(k);
            2.0 + 3.0 * d - 5.0 * d * d
        }).collect();
        let (v, prev) = richardson(&vals, 3).unwrap();
        assert!((v - 2.0).abs() < 1e-13 && (prev - 2.0).abs() < 1e-13);
    }

    #[test]
    fn sampled_density_interpolates_polynomials() {
        let nodes = vec![0.1, 0.2, 0.35, 0.5];
        let values: Vec<f64> = nodes.iter().map(|t| t * t * t - t).collect();
        let d = SampledDensity::new(vec![DensityPanel::new(0.0, 1.0, nodes, values).unwrap()]).unwrap();
        for t in [0.0, 0.27, 0.9] {
            assert!((d.eval(t) - (t * t * t - t)).abs() < 1e-13);
        }
        assert!(SampledDensity::new(vec![DensityPanel::new(0.0, 0.5, vec![0.2], vec![1.0]).unwrap()]).is_err());
    }

    #[test]
    fn flux_of_power_solution_vanishes() {
        let c = curve();
        let p = Params::new(0.1, 0.4).unwrap();
        let r = flux_integral(&ExactSolution::PowerX, &c, &p, &cfg()).unwrap();
        assert!(r.value.abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn axis_correction_is_the_weighted_axis_flux() {
        let q = cfg();
        let p0 = Point::new(0.4, 0.3);
        for p in [quarter(), Params::new(0.1, 0.4).unwrap()] {
            for i in SolutionIndex::ALL {
                let (al, be) = (p.alpha, p.beta);
                let oy = try_integrate_graded(
                    |y| Ok(y.powf(2.0 * be) * weighted_gradient(i, Point::new(0.0, y), p0, &p)?.0),
                    &[0.0, p0.y, 1.0],
                    &q,
                )
                .unwrap();
                let ox = try_integrate_graded(
                    |x| Ok(x.powf(2.0 * al) * weighted_gradient(i, Point::new(x, 0.0), p0, &p)?.1),
                    &[0.0, p0.x, 1.0],
                    &q,
                )
                .unwrap();
                let ac = axis_correction(i, p0, 1.0, 1.0, &p, &q).unwrap();
                assert!((ac.value - ox.value - oy.value).abs() < 1e-11, "{i}: {} vs {}", ac.value, ox.value + oy.value);
            }
        }
    }

    #[test]
    fn axis_correction_vanishes_on_the_mirror_axis() {
        let p = quarter();
        let on_oy = axis_correction(SolutionIndex::Q2, Point::new(0.0, 0.5), 1.0, 1.0, &p, &cfg()).unwrap();
        assert_eq!(on_oy.value, 0.0);
        assert!(axis_correction(SolutionIndex::Q2, Point::new(-0.1, 0.5), 1.0, 1.0, &p, &cfg()).is_err());
    }
}
