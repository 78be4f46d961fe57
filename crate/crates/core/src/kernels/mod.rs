//! Fundamental solutions `q₁ … q₄`, their weighted normal derivatives and
//! the associated majorants.
//!
//! Every solution has the form `q_i = k_i · P_i · G(a; b₁, b₂; c₁, c₂)` with
//! `G = (r²)^{-a} F₂(…; ξ, η)` and an algebraic prefactor `P_i` built from
//! `(xx₀)^{1-2α}` and `(yy₀)^{1-2β}`. Derivatives use
//!
//! ```text
//! ∂G/∂x = -2a (x - x₀) G(a+1; b₁, b₂; c₁, c₂) - 4a x₀ (b₁/c₁) G(a+1; b₁+1, b₂; c₁+1, c₂)
//! ```
//!
//! (and the mirror formula in `y`), which follows from the F₂ derivative
//! rule combined with the adjacency relation and avoids the cancellation
//! between terms of size `1/r²`.

pub mod printed;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{Curve, Point};
use crate::specfun::{appell_f2_scaled, ln_gamma, HypergeometricParams, SeriesControl};

/// Exponents of the equation `u_xx + u_yy + (2α/x)u_x + (2β/y)u_y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
}

impl Params {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = Self { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && 2.0 * v < 1.0;
        if !ok(self.alpha) || !ok(self.beta) {
            return invalid(format!(
                "need 0 < 2α, 2β < 1, got α = {}, β = {}",
                self.alpha, self.beta
            ));
        }
        Ok(())
    }

    /// Parameters with `α` and `β` exchanged (mirror in the diagonal).
    pub fn swapped(&self) -> Self {
        Self { alpha: self.beta, beta: self.alpha }
    }
}

/// Which of the four fundamental solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolutionIndex {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl SolutionIndex {
    pub const ALL: [SolutionIndex; 4] =
        [SolutionIndex::Q1, SolutionIndex::Q2, SolutionIndex::Q3, SolutionIndex::Q4];

    pub fn number(self) -> u8 {
        match self {
            SolutionIndex::Q1 => 1,
            SolutionIndex::Q2 => 2,
            SolutionIndex::Q3 => 3,
            SolutionIndex::Q4 => 4,
        }
    }

    /// Whether `q_i` carries the factor `(xx₀)^{1-2α}` (vanishes on `x = 0`).
    pub fn odd_in_x(self) -> bool {
        matches!(self, SolutionIndex::Q2 | SolutionIndex::Q4)
    }

    /// Whether `q_i` carries the factor `(yy₀)^{1-2β}` (vanishes on `y = 0`).
    pub fn odd_in_y(self) -> bool {
        matches!(self, SolutionIndex::Q3 | SolutionIndex::Q4)
    }

    /// F₂ parameters of `q_i`.
    pub fn f2_params(self, params: &Params) -> HypergeometricParams {
        let (al, be) = (params.alpha, params.beta);
        let (b1, c1) = if self.odd_in_x() { (1.0 - al, 2.0 - 2.0 * al) } else { (al, 2.0 * al) };
        let (b2, c2) = if self.odd_in_y() { (1.0 - be, 2.0 - 2.0 * be) } else { (be, 2.0 * be) };
        HypergeometricParams { a: b1 + b2, b1, b2, c1, c2 }
    }
}

impl TryFrom<u8> for SolutionIndex {
    type Error = Error;

    fn try_from(i: u8) -> Result<Self> {
        match i {
            1 => Ok(SolutionIndex::Q1),
            2 => Ok(SolutionIndex::Q2),
            3 => Ok(SolutionIndex::Q3),
            4 => Ok(SolutionIndex::Q4),
            _ => invalid(format!("solution index must be 1..=4, got {i}")),
        }
    }
}

impl fmt::Display for SolutionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.number())
    }
}

/// Squared distances to `p₀` and its reflections, and the F₂ arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeomQuantities {
    pub r_sq: f64,
    pub r1_sq: f64,
    pub r2_sq: f64,
    pub xi: f64,
    pub eta: f64,
}

pub fn geom_quantities(p: Point, p0: Point) -> Result<GeomQuantities> {
    let r_sq = (p.x - p0.x).powi(2) + (p.y - p0.y).powi(2);
    if r_sq == 0.0 {
        return Err(Error::CoincidentPoints { r_sq });
    }
    let r1_sq = (p.x + p0.x).powi(2) + (p.y - p0.y).powi(2);
    let r2_sq = (p.x - p0.x).powi(2) + (p.y + p0.y).powi(2);
    // r² - r₁² = -4xx₀ exactly; avoid the subtraction
    Ok(GeomQuantities {
        r_sq,
        r1_sq,
        r2_sq,
        xi: -4.0 * p.x * p0.x / r_sq,
        eta: -4.0 * p.y * p0.y / r_sq,
    })
}

/// A point of Γ with its unit tangent and the weight `x^{2α} y^{2β}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub position: Point,
    /// `(dx/ds, dy/ds)`.
    pub tangent: (f64, f64),
    pub weight: f64,
}

impl BoundaryPoint {
    pub fn on_curve(curve: &Curve, t: f64, params: &Params) -> Result<Self> {
        let position = curve.position(t);
        Ok(Self {
            position,
            tangent: curve.tangent(t)?,
            weight: position.x.powf(2.0 * params.alpha) * position.y.powf(2.0 * params.beta),
        })
    }

    /// Exterior normal `(dy/ds, -dx/ds)`.
    pub fn normal(&self) -> (f64, f64) {
        (self.tangent.1, -self.tangent.0)
    }
}

/// Normalization constant `k_i`, evaluated through log-gamma.
pub fn normalization_constant(i: SolutionIndex, params: &Params) -> f64 {
    let hp = i.f2_params(params);
    // k = 2^{2a}/(4π) Γ(b₁)Γ(b₂)Γ(a) / (Γ(c₁)Γ(c₂))
    let log = 2.0 * hp.a * std::f64::consts::LN_2 - (4.0 * std::f64::consts::PI).ln()
        + ln_gamma(hp.b1)
        + ln_gamma(hp.b2)
        + ln_gamma(hp.a)
        - ln_gamma(hp.c1)
        - ln_gamma(hp.c2);
    log.exp()
}

fn ctrl() -> SeriesControl {
    SeriesControl::default()
}

/// Relative separation below which kernel evaluation is refused.
const COINCIDENCE_RATIO: f64 = 1e-14;

struct Pair {
    r_sq: f64,
    big_a: f64,
    big_b: f64,
}

impl Pair {
    fn new(p: Point, p0: Point) -> Result<Self> {
        Self::with_offset(p, p0, (p.x - p0.x, p.y - p0.y))
    }

    /// `offset` is `p - p₀`, possibly computed more accurately than the
    /// difference of the rounded coordinates.
    fn with_offset(p: Point, p0: Point, offset: (f64, f64)) -> Result<Self> {
        let r_sq = offset.0 * offset.0 + offset.1 * offset.1;
        let scale = 1f64.max(p.x.abs()).max(p.y.abs()).max(p0.x.abs()).max(p0.y.abs());
        if !(r_sq > COINCIDENCE_RATIO * scale * scale) {
            return Err(Error::CoincidentPoints { r_sq });
        }
        if p.x < 0.0 || p.y < 0.0 || p0.x < 0.0 || p0.y < 0.0 {
            return invalid(format!("points {p} and {p0} must lie in the closed quarter plane"));
        }
        Ok(Self { r_sq, big_a: 4.0 * p.x * p0.x, big_b: 4.0 * p.y * p0.y })
    }

    fn g(&self, hp: &HypergeometricParams) -> Result<f64> {
        appell_f2_scaled(hp, self.r_sq, self.big_a, self.big_b, &ctrl())
    }
}

fn prefactor_x(i: SolutionIndex, x: f64, x0: f64, alpha: f64) -> f64 {
    if i.odd_in_x() {
        (x * x0).powf(1.0 - 2.0 * alpha)
    } else {
        1.0
    }
}

fn prefactor_y(i: SolutionIndex, y: f64, y0: f64, beta: f64) -> f64 {
    if i.odd_in_y() {
        (y * y0).powf(1.0 - 2.0 * beta)
    } else {
        1.0
    }
}

/// `q_i(p; p₀)`.
pub fn fundamental_solution(i: SolutionIndex, p: Point, p0: Point, params: &Params) -> Result<f64> {
    params.validate()?;
    let pair = Pair::new(p, p0)?;
    let k = normalization_constant(i, params);
    let px = prefactor_x(i, p.x, p0.x, params.alpha);
    let py = prefactor_y(i, p.y, p0.y, params.beta);
    if px == 0.0 || py == 0.0 {
        return Ok(0.0);
    }
    Ok(k * px * py * pair.g(&i.f2_params(params))?)
}

/// Weighted gradient `(x^{2α} ∂q_i/∂x, y^{2β} ∂q_i/∂y)` at `p`.
///
/// Both components stay finite up to the axes, where they realize the
/// boundary behaviour of the individual solutions.
pub fn weighted_gradient(
    i: SolutionIndex,
    p: Point,
    p0: Point,
    params: &Params,
) -> Result<(f64, f64)> {
    weighted_gradient_offset(i, p, p0, (p.x - p0.x, p.y - p0.y), params)
}

fn weighted_gradient_offset(
    i: SolutionIndex,
    p: Point,
    p0: Point,
    offset: (f64, f64),
    params: &Params,
) -> Result<(f64, f64)> {
    params.validate()?;
    let pair = Pair::with_offset(p, p0, offset)?;
    let (al, be) = (params.alpha, params.beta);
    let k = normalization_constant(i, params);
    let hp = i.f2_params(params);
    let a = hp.a;
    let up = HypergeometricParams { a: a + 1.0, ..hp };
    let up_x = HypergeometricParams { a: a + 1.0, b1: hp.b1 + 1.0, c1: hp.c1 + 1.0, ..hp };
    let up_y = HypergeometricParams { a: a + 1.0, b2: hp.b2 + 1.0, c2: hp.c2 + 1.0, ..hp };
    let g_up = pair.g(&up)?;
    let g_x = if p0.x == 0.0 { 0.0 } else { pair.g(&up_x)? };
    let g_y = if p0.y == 0.0 { 0.0 } else { pair.g(&up_y)? };
    let base = if i == SolutionIndex::Q1 { 0.0 } else { pair.g(&hp)? };

    let dgx = -2.0 * a * offset.0 * g_up - 4.0 * a * p0.x * (hp.b1 / hp.c1) * g_x;
    let dgy = -2.0 * a * offset.1 * g_up - 4.0 * a * p0.y * (hp.b2 / hp.c2) * g_y;

    let py = prefactor_y(i, p.y, p0.y, be);
    let px = prefactor_x(i, p.x, p0.x, al);

    // x^{2α} ∂q/∂x
    let wx = if i.odd_in_x() {
        let x0p = p0.x.powf(1.0 - 2.0 * al);
        k * py * x0p * ((1.0 - 2.0 * al) * base + p.x * dgx)
    } else {
        k * py * p.x.powf(2.0 * al) * dgx
    };
    let wy = if i.odd_in_y() {
        let y0p = p0.y.powf(1.0 - 2.0 * be);
        k * px * y0p * ((1.0 - 2.0 * be) * base + p.y * dgy)
    } else {
        k * px * p.y.powf(2.0 * be) * dgy
    };
    Ok((wx, wy))
}

/// Plain gradient `(∂q_i/∂x, ∂q_i/∂y)`; needs `x, y > 0`.
pub fn gradient(i: SolutionIndex, p: Point, p0: Point, params: &Params) -> Result<(f64, f64)> {
    if !(p.x > 0.0 && p.y > 0.0) {
        return invalid(format!("plain gradient needs an interior point, got {p}"));
    }
    let (wx, wy) = weighted_gradient(i, p, p0, params)?;
    Ok((wx * p.x.powf(-2.0 * params.alpha), wy * p.y.powf(-2.0 * params.beta)))
}

/// `∂q_i/∂n` at a boundary point, with the exterior normal `(dy/ds, -dx/ds)`.
pub fn normal_derivative(
    i: SolutionIndex,
    bp: &BoundaryPoint,
    p0: Point,
    params: &Params,
) -> Result<f64> {
    let (gx, gy) = gradient(i, bp.position, p0, params)?;
    let n = bp.normal();
    Ok(gx * n.0 + gy * n.1)
}

/// `x^{2α} y^{2β} ∂q_i/∂n · |γ'(t)|` at `γ(t)` with pole `p₀`: the
/// double-layer integrand per unit curve parameter.
///
/// Written with the weighted gradient so that it is finite (and vanishes
/// as required) at the endpoints of Γ.
pub fn layer_integrand(
    i: SolutionIndex,
    curve: &Curve,
    t: f64,
    p0: Point,
    params: &Params,
) -> Result<f64> {
    let p = curve.position(t);
    let (dx, dy) = curve.derivative(t);
    let (wx, wy) = weighted_gradient(i, p, p0, params)?;
    let ybeta = p.y.powf(2.0 * params.beta);
    let xalpha = p.x.powf(2.0 * params.alpha);
    Ok(ybeta * wx * dy - xalpha * wy * dx)
}

/// [`layer_integrand`] for the pole `γ(t_star)` on Γ itself, with the chord
/// `γ(t) - γ(t_star)` integrated from the derivative so that the kernel
/// keeps its accuracy close to the diagonal.
pub fn layer_integrand_on_curve(
    i: SolutionIndex,
    curve: &Curve,
    t: f64,
    t_star: f64,
    params: &Params,
) -> Result<f64> {
    let p = curve.position(t);
    let p0 = curve.position(t_star);
    let (dx, dy) = curve.derivative(t);
    let (wx, wy) = weighted_gradient_offset(i, p, p0, curve.chord(t_star, t), params)?;
    let ybeta = p.y.powf(2.0 * params.beta);
    let xalpha = p.x.powf(2.0 * params.alpha);
    Ok(ybeta * wx * dy - xalpha * wy * dx)
}

/// `K_i(s, t) = x^{2α}(s) y^{2β}(s) ∂q_i[γ(s); γ(t)]/∂n`, per unit arclength,
/// with both arguments given as curve parameters.
pub fn kernel(
    i: SolutionIndex,
    curve: &Curve,
    s_param: f64,
    t_param: f64,
    params: &Params,
) -> Result<f64> {
    let speed = curve.speed(s_param);
    if !(speed > 0.0) {
        return Err(Error::DegenerateTangent { t: s_param });
    }
    Ok(layer_integrand(i, curve, s_param, curve.position(t_param), params)? / speed)
}

/// Right-hand side of the majorant `|q_i(p; p₀)| ≤ envelope`.
///
/// The argument `(1 - r²/r₁²)(1 - r²/r₂²)` is formed as `AB/(r₁² r₂²)`, and
/// its complement as `r²(r² + A + B)/(r₁² r₂²)`.
pub fn bound_envelope(i: SolutionIndex, p: Point, p0: Point, params: &Params) -> Result<f64> {
    params.validate()?;
    let g = geom_quantities(p, p0)?;
    let hp = i.f2_params(params);
    let k = normalization_constant(i, params);
    let (big_a, big_b) = (4.0 * p.x * p0.x, 4.0 * p.y * p0.y);
    let denom = g.r1_sq * g.r2_sq;
    let z = big_a * big_b / denom;
    let zc = g.r_sq * (g.r_sq + big_a + big_b) / denom;
    let coef = (ln_gamma(hp.c1) + ln_gamma(hp.c2) - 2.0 * ln_gamma(hp.a)).exp();
    let px = prefactor_x(i, p.x, p0.x, params.alpha);
    let py = prefactor_y(i, p.y, p0.y, params.beta);
    let f = crate::specfun::Gauss2F1::new(hp.b1, hp.b2, hp.a)?.eval_pair(z, zc, &ctrl())?;
    Ok(k * coef * px * py * g.r1_sq.powf(-hp.b1) * g.r2_sq.powf(-hp.b2) * f)
}

/// Five-point central-difference approximation of
/// `u_xx + u_yy + (2α/x)u_x + (2β/y)u_y` at `p`.
pub fn pde_residual(u: impl Fn(Point) -> f64, p: Point, params: &Params, h: f64) -> f64 {
    let c = u(p);
    let (e, w) = (u(Point::new(p.x + h, p.y)), u(Point::new(p.x - h, p.y)));
    let (n, s) = (u(Point::new(p.x, p.y + h)), u(Point::new(p.x, p.y - h)));
    let uxx = (e - 2.0 * c + w) / (h * h);
    let uyy = (n - 2.0 * c + s) / (h * h);
    let ux = (e - w) / (2.0 * h);
    let uy = (n - s) / (2.0 * h);
    uxx + uyy + 2.0 * params.alpha / p.x * ux + 2.0 * params.beta / p.y * uy
}
