//! Appell's second hypergeometric function F₂.
//!
//! Three evaluation paths:
//! * the defining double series, for `|x| + |y| < 1`;
//! * the single series of products of ₂F₁ at `x/(x-1)`, `y/(y-1)`, for
//!   `x, y ≤ 0` away from the corner where both transformed arguments
//!   approach 1;
//! * Euler's integral representation in the second variable, reduced to a
//!   ₂F₁ by Pfaff's transformation and integrated with Gauss–Jacobi and
//!   exponentially stretched Gauss–Legendre panels. This path stays accurate
//!   for arbitrarily large negative arguments and is what the fundamental
//!   solutions use near their pole.

use crate::error::{invalid, Error, Result};
use crate::quadrature::rules::{gauss_jacobi, gauss_legendre};

use super::gamma::{gamma_ratio, is_nonpositive_integer, pochhammer};
use super::gauss::{Gauss2F1, QUIET_TERMS};
use super::SeriesControl;

/// `|x| + |y|` at or below which the double series is summed directly.
pub const DIRECT_THRESHOLD: f64 = 0.9;

/// Largest product of transformed arguments `XY` handled by the ₂F₁ product
/// series; beyond it the series needs thousands of terms and the integral
/// route takes over.
pub const SERIES_THRESHOLD: f64 = 0.95;

/// Parameters `a; b₁, b₂; c₁, c₂` of F₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricParams {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
}

impl HypergeometricParams {
    pub fn new(a: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> Result<Self> {
        let hp = Self { a, b1, b2, c1, c2 };
        hp.validate()?;
        Ok(hp)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a, self.b1, self.b2, self.c1, self.c2];
        if all.iter().any(|v| !v.is_finite()) {
            return invalid("F2 parameters must be finite");
        }
        if is_nonpositive_integer(self.c1) || is_nonpositive_integer(self.c2) {
            return invalid(format!(
                "F2 lower parameters must not be nonpositive integers (c1 = {}, c2 = {})",
                self.c1, self.c2
            ));
        }
        Ok(())
    }

    /// Parameters of the `(m, n)`-th partial derivative.
    pub fn shifted(&self, m: u32, n: u32) -> Self {
        let (mf, nf) = (m as f64, n as f64);
        Self {
            a: self.a + mf + nf,
            b1: self.b1 + mf,
            b2: self.b2 + nf,
            c1: self.c1 + mf,
            c2: self.c2 + nf,
        }
    }

    fn swapped(&self) -> Self {
        Self { a: self.a, b1: self.b2, b2: self.b1, c1: self.c2, c2: self.c1 }
    }
}

/// Double series summed by blocks of constant total degree `m + n`.
pub fn appell_f2_direct(
    hp: &HypergeometricParams,
    x: f64,
    y: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    hp.validate()?;
    ctrl.validate()?;
    if !(x.abs() + y.abs() < 1.0) {
        return Err(Error::OutOfRegion { x, y });
    }
    if x == 0.0 && y == 0.0 {
        return Ok(1.0);
    }
    let HypergeometricParams { a, b1, b2, c1, c2 } = *hp;
    // row[m] = T(m, d - m) for the current degree d
    let mut row = vec![1.0];
    let mut sum = 1.0;
    let mut quiet = 0;
    let mut terms = 1usize;
    let mut d = 0usize;
    while terms < ctrl.max_terms {
        let df = d as f64;
        let corner = row[d] * (a + df) * (b1 + df) / ((c1 + df) * (df + 1.0)) * x;
        for (m, t) in row.iter_mut().enumerate() {
            let n = (d + 1 - m) as f64;
            *t *= (a + df) * (b2 + n - 1.0) / ((c2 + n - 1.0) * n) * y;
        }
        row.push(corner);
        d += 1;
        terms += row.len();
        let block: f64 = row.iter().sum();
        let block_abs: f64 = row.iter().map(|t| t.abs()).sum();
        sum += block;
        if block_abs <= ctrl.rel_tol * sum.abs() {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if block_abs == 0.0 && row.iter().all(|t| *t == 0.0) {
            // terminating parameters
            return Ok(sum);
        }
    }
    Err(Error::NonConvergent { what: "F2 double series", terms: ctrl.max_terms })
}

/// Single series of products of ₂F₁ at `X = x/(x-1)`, `Y = y/(y-1)`,
/// valid for `x, y ≤ 0`.
pub fn appell_f2_series(
    hp: &HypergeometricParams,
    x: f64,
    y: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    hp.validate()?;
    ctrl.validate()?;
    if !(x <= 0.0 && y <= 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::OutOfRegion { x, y });
    }
    let HypergeometricParams { a, b1, b2, c1, c2 } = *hp;
    let (xc, yc) = (1.0 / (1.0 - x), 1.0 / (1.0 - y));
    let (big_x, big_y) = (-x * xc, -y * yc);
    let xy = big_x * big_y;
    let prefactor = (1.0 - x).powf(-b1) * (1.0 - y).powf(-b2);

    let factor = |i: f64| -> Result<f64> {
        let fx = Gauss2F1::new(c1 - a, b1 + i, c1 + i)?.eval_pair(big_x, xc, ctrl)?;
        let fy = Gauss2F1::new(c2 - a, b2 + i, c2 + i)?.eval_pair(big_y, yc, ctrl)?;
        Ok(fx * fy)
    };

    let mut coef = 1.0;
    let mut sum = factor(0.0)?;
    if xy == 0.0 {
        return Ok(prefactor * sum);
    }
    let mut prev = sum;
    let mut quiet = 0;
    for i in 0..ctrl.max_terms {
        let fi = i as f64;
        coef *= (a + fi) * (b1 + fi) * (b2 + fi) / ((c1 + fi) * (c2 + fi) * (fi + 1.0)) * xy;
        let term = coef * factor(fi + 1.0)?;
        sum += term;
        let ratio = if prev != 0.0 { (term / prev).abs() } else { 0.0 };
        let tail = if ratio < 1.0 { term.abs() / (1.0 - ratio) } else { f64::INFINITY };
        if tail <= ctrl.rel_tol * sum.abs() || term == 0.0 {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(prefactor * sum);
            }
        } else {
            quiet = 0;
        }
        prev = term;
    }
    Err(Error::NonConvergent { what: "F2 product-of-2F1 series", terms: ctrl.max_terms })
}

/// F₂ for `x, y ≤ 0` through the Euler integral (no region restriction
/// beyond the sign of the arguments).
pub fn appell_f2_integral(
    hp: &HypergeometricParams,
    x: f64,
    y: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    if !(x <= 0.0 && y <= 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::OutOfRegion { x, y });
    }
    appell_f2_scaled(hp, 1.0, -x, -y, ctrl)
}

/// `eps^{-a} · F₂(a; b₁, b₂; c₁, c₂; -A/eps, -B/eps)` for `eps > 0`,
/// `A, B ≥ 0`, evaluated without ever forming the (possibly huge) arguments.
///
/// With `eps = r²`, `A = 4xx₀`, `B = 4yy₀` this is `(r²)^{-a} F₂(…; ξ, η)`,
/// the building block of every fundamental solution.
pub fn appell_f2_scaled(
    hp: &HypergeometricParams,
    eps: f64,
    big_a: f64,
    big_b: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    hp.validate()?;
    ctrl.validate()?;
    if !(eps > 0.0 && eps.is_finite()) {
        return invalid(format!("scale eps = {eps} must be positive"));
    }
    if !(big_a >= 0.0 && big_b >= 0.0 && big_a.is_finite() && big_b.is_finite()) {
        return Err(Error::OutOfRegion { x: -big_a / eps, y: -big_b / eps });
    }
    let euler_ok = |p: &HypergeometricParams| p.b2 > 0.0 && p.c2 > p.b2;
    let (hp, big_a, big_b) = if big_b == 0.0 {
        (*hp, big_a, big_b)
    } else if big_a == 0.0 {
        (hp.swapped(), big_b, big_a)
    } else if euler_ok(hp) {
        (*hp, big_a, big_b)
    } else if euler_ok(&hp.swapped()) {
        (hp.swapped(), big_b, big_a)
    } else {
        return invalid("Euler integral needs 0 < b < c in one of the two variables");
    };
    let HypergeometricParams { a, b1, b2, c1, c2 } = hp;
    let inner = Gauss2F1::new(c1 - a, b1, c1)?;
    // integrand without the Jacobi weight: u^{b1-a} (u+A)^{-b1} F(c1-a, b1; c1; A/(u+A))
    let g = |u: f64| -> Result<f64> {
        let denom = u + big_a;
        let scale = ((b1 - a) * u.ln() - b1 * denom.ln()).exp();
        if big_a == 0.0 {
            return Ok(scale);
        }
        Ok(scale * inner.eval_pair(big_a / denom, u / denom, ctrl)?)
    };
    if big_b == 0.0 {
        return g(eps);
    }

    let p = b2 - 1.0;
    let q = c2 - b2 - 1.0;
    let s_star = eps / big_b;
    let mut total = 0.0;
    if s_star >= 0.25 {
        let rule = gauss_jacobi(24, p, q);
        for (s, w) in rule.nodes.iter().zip(&rule.weights) {
            total += w * g(eps + big_b * s)?;
        }
    } else {
        // [0, s*]: s = s* σ, weight σ^p
        let rule = gauss_jacobi(16, p, 0.0);
        let mut part = 0.0;
        for (sig, w) in rule.nodes.iter().zip(&rule.weights) {
            let s = s_star * sig;
            part += w * (1.0 - s).powf(q) * g(eps * (1.0 + sig))?;
        }
        total += s_star.powf(p + 1.0) * part;

        // [s*, 1/4]: s = s* e^τ puts the nearby branch point at Im τ = π
        let len = (0.25 / s_star).ln();
        let panels = (len / 2.5).ceil().max(1.0) as usize;
        let h = len / panels as f64;
        let rule = gauss_legendre(12);
        for k in 0..panels {
            let mut part = 0.0;
            for (v, w) in rule.nodes.iter().zip(&rule.weights) {
                let tau = h * (k as f64 + v);
                let s = s_star * tau.exp();
                part += w * ((p + 1.0) * s.ln()).exp() * (1.0 - s).powf(q) * g(eps + big_b * s)?;
            }
            total += h * part;
        }

        // [1/4, 1]: s = 1/4 + 3v/4, weight (1 - v)^q
        let rule = gauss_jacobi(16, 0.0, q);
        let mut part = 0.0;
        for (v, w) in rule.nodes.iter().zip(&rule.weights) {
            let s = 0.25 + 0.75 * v;
            part += w * s.powf(p) * g(eps + big_b * s)?;
        }
        total += 0.75f64.powf(q + 1.0) * part;
    }
    Ok(gamma_ratio(&[c2], &[b2, c2 - b2])? * total)
}

/// F₂ on `{|x| + |y| < 1} ∪ {x ≤ 0, y ≤ 0}` with automatic path selection.
pub fn appell_f2(hp: &HypergeometricParams, x: f64, y: f64, ctrl: &SeriesControl) -> Result<f64> {
    hp.validate()?;
    ctrl.validate()?;
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::OutOfRegion { x, y });
    }
    let radius = x.abs() + y.abs();
    if radius <= DIRECT_THRESHOLD {
        return appell_f2_direct(hp, x, y, ctrl);
    }
    if x <= 0.0 && y <= 0.0 {
        let xy = (x / (x - 1.0)) * (y / (y - 1.0));
        if xy <= SERIES_THRESHOLD {
            return appell_f2_series(hp, x, y, ctrl);
        }
        return appell_f2_integral(hp, x, y, ctrl);
    }
    if radius < 1.0 {
        return appell_f2_direct(hp, x, y, ctrl);
    }
    Err(Error::OutOfRegion { x, y })
}

/// `∂^{m+n} F₂ / ∂x^m ∂y^n` as a parameter-shifted F₂.
pub fn appell_f2_deriv(
    hp: &HypergeometricParams,
    m: u32,
    n: u32,
    x: f64,
    y: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    hp.validate()?;
    let coef = pochhammer(hp.a, m + n) * pochhammer(hp.b1, m) * pochhammer(hp.b2, n)
        / (pochhammer(hp.c1, m) * pochhammer(hp.c2, n));
    if coef == 0.0 {
        return Ok(0.0);
    }
    Ok(coef * appell_f2(&hp.shifted(m, n), x, y, ctrl)?)
}
