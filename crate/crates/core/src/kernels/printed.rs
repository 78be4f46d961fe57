//! Term-by-term closed forms of `∂q_i/∂n` in the shape they are usually
//! quoted: a `∂/∂n[ln r²]` term plus `dx/ds`, `dy/ds` terms with F₂ at
//! shifted parameters.
//!
//! These are kept for cross-checking only. The forms for `q₁` and `q₄`
//! agree with the chain-rule derivative in [`super::normal_derivative`];
//! the forms for `q₂` and `q₃` do not (see the crate README), and the
//! finite-difference oracle sides with [`super::normal_derivative`].

use crate::error::Result;
use crate::geometry::Point;
use crate::specfun::{appell_f2_scaled, HypergeometricParams, SeriesControl};

use super::{normalization_constant, BoundaryPoint, Params, SolutionIndex};

struct Ctx {
    r_sq: f64,
    big_a: f64,
    big_b: f64,
}

impl Ctx {
    /// `F₂(a; b₁, b₂; c₁, c₂; ξ, η)`.
    fn f2(&self, a: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> Result<f64> {
        let hp = HypergeometricParams::new(a, b1, b2, c1, c2)?;
        let scaled =
            appell_f2_scaled(&hp, self.r_sq, self.big_a, self.big_b, &SeriesControl::default())?;
        Ok(scaled * self.r_sq.powf(a))
    }
}

/// `∂q_i/∂n` assembled from the quoted closed form for index `i`.
pub fn printed_normal_derivative(
    i: SolutionIndex,
    bp: &BoundaryPoint,
    p0: Point,
    params: &Params,
) -> Result<f64> {
    params.validate()?;
    let (al, be) = (params.alpha, params.beta);
    let Point { x, y } = bp.position;
    let Point { x: x0, y: y0 } = p0;
    let r_sq = (x - x0).powi(2) + (y - y0).powi(2);
    let ctx = Ctx { r_sq, big_a: 4.0 * x * x0, big_b: 4.0 * y * y0 };
    let (dxds, dyds) = bp.tangent;
    let n = bp.normal();
    let dn_ln_r2 = 2.0 * ((x - x0) * n.0 + (y - y0) * n.1) / r_sq;
    let k = normalization_constant(i, params);
    let xx = (x * x0).powf(1.0 - 2.0 * al);
    let yy = (y * y0).powf(1.0 - 2.0 * be);

    let value = match i {
        SolutionIndex::Q1 => {
            let a = al + be;
            -a * k * r_sq.powf(-a) * ctx.f2(a + 1.0, al, be, 2.0 * al, 2.0 * be)? * dn_ln_r2
                + 2.0 * a * k * y0 * r_sq.powf(-a - 1.0)
                    * ctx.f2(a + 1.0, al, 1.0 + be, 2.0 * al, 1.0 + 2.0 * be)?
                    * dxds
                - 2.0 * a * k * x0 * r_sq.powf(-a - 1.0)
                    * ctx.f2(a + 1.0, al + 1.0, be, 2.0 * al + 1.0, 2.0 * be)?
                    * dyds
        }
        SolutionIndex::Q2 => {
            let a = 1.0 - al + be;
            let base = ctx.f2(a, 1.0 - al, be, 2.0 - 2.0 * al, 2.0 * be)?;
            -a * k * r_sq.powf(al - be - 1.0)
                * xx
                * ctx.f2(2.0 - al + be, 1.0 - al, be, 2.0 - 2.0 * al, 2.0 * be)?
                * dn_ln_r2
                - 4.0 * k * r_sq.powf(al - be - 2.0) * xx * x0 * base * dyds
                + k * (1.0 - 2.0 * al) * r_sq.powf(al - be - 1.0) * x.powf(-2.0 * al)
                    * x0.powf(1.0 - 2.0 * al)
                    * base
                    * dyds
                + 4.0 * k * r_sq.powf(al - be - 2.0) * yy * y0 * base * dxds
        }
        SolutionIndex::Q3 => {
            let a = 1.0 + al - be;
            let base = ctx.f2(a, al, 1.0 - be, 2.0 * al, 2.0 - 2.0 * be)?;
            -a * k * r_sq.powf(-al + be - 1.0)
                * yy
                * ctx.f2(2.0 + al - be, al, 1.0 - be, 2.0 * al, 2.0 - 2.0 * be)?
                * dn_ln_r2
                - 4.0 * k * r_sq.powf(-al + be - 2.0) * x0 * yy * base * dyds
                - (1.0 - 2.0 * be) * k * r_sq.powf(-al + be - 1.0) * y.powf(-2.0 * be)
                    * y0.powf(1.0 - 2.0 * be)
                    * base
                    * dxds
                + 2.0 * a * k * r_sq.powf(-al + be - 2.0)
                    * yy
                    * ctx.f2(2.0 + al - be, al, 2.0 - be, 2.0 * al, 3.0 - 2.0 * be)?
                    * dxds
        }
        SolutionIndex::Q4 => {
            let a = 2.0 - al - be;
            let base = ctx.f2(a, 1.0 - al, 1.0 - be, 2.0 - 2.0 * al, 2.0 - 2.0 * be)?;
            -k * a * r_sq.powf(al + be - 2.0)
                * xx
                * yy
                * ctx.f2(a + 1.0, 1.0 - al, 1.0 - be, 2.0 - 2.0 * al, 2.0 - 2.0 * be)?
                * dn_ln_r2
                + k * (1.0 - 2.0 * al) * r_sq.powf(al + be - 2.0) * x.powf(-2.0 * al)
                    * x0.powf(1.0 - 2.0 * al)
                    * yy
                    * base
                    * dyds
                - k * (1.0 - 2.0 * be) * r_sq.powf(al + be - 2.0) * xx * y.powf(-2.0 * be)
                    * y0.powf(1.0 - 2.0 * be)
                    * base
                    * dxds
                - 2.0 * k * a * r_sq.powf(al + be - 3.0)
                    * x.powf(1.0 - 2.0 * al)
                    * x0.powf(2.0 - 2.0 * al)
                    * yy
                    * ctx.f2(a + 1.0, 2.0 - al, 1.0 - be, 3.0 - 2.0 * al, 2.0 - 2.0 * be)?
                    * dyds
                + 2.0 * k * a * r_sq.powf(al + be - 3.0)
                    * xx
                    * y.powf(1.0 - 2.0 * be)
                    * y0.powf(2.0 - 2.0 * be)
                    * ctx.f2(a + 1.0, 1.0 - al, 2.0 - be, 2.0 - 2.0 * al, 3.0 - 2.0 * be)?
                    * dxds
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::normal_derivative;

    fn sample(i: SolutionIndex, params: &Params) -> (f64, f64) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bp = BoundaryPoint { position: Point::new(0.8, 0.6), tangent: (-s, s), weight: 1.0 };
        let p0 = Point::new(0.4, 0.3);
        (
            printed_normal_derivative(i, &bp, p0, params).unwrap(),
            normal_derivative(i, &bp, p0, params).unwrap(),
        )
    }

    #[test]
    fn q1_and_q4_forms_agree_with_chain_rule() {
        for params in [Params::new(0.25, 0.25).unwrap(), Params::new(0.1, 0.4).unwrap()] {
            for i in [SolutionIndex::Q1, SolutionIndex::Q4] {
                let (printed, derived) = sample(i, &params);
                assert!((printed - derived).abs() < 1e-9 * derived.abs(), "{i}: {printed} vs {derived}");
            }
        }
    }

    #[test]
    fn q2_and_q3_forms_disagree() {
        let params = Params::new(0.25, 0.25).unwrap();
        for i in [SolutionIndex::Q2, SolutionIndex::Q3] {
            let (printed, derived) = sample(i, &params);
            assert!((printed - derived).abs() > 1e-3 * derived.abs(), "{i}");
        }
    }
}
