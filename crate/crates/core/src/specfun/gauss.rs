//! Gauss hypergeometric function ₂F₁ on the real axis left of z = 1.

use crate::error::{invalid, Error, Result};

use super::gamma::{gamma_ratio, is_nonpositive_integer};
use super::SeriesControl;

/// Direct summation is used for `z` below this value; the `1 - z` connection
/// formula above it.
pub const Z_DIRECT: f64 = 0.5;

/// Parameter magnitude above which the connection series lose accuracy and
/// direct summation is preferred.
const CONNECTION_PARAM_LIMIT: f64 = 30.0;

/// Number of consecutive small terms required before a series is truncated.
pub(crate) const QUIET_TERMS: usize = 3;

/// Sums `Σ terms` produced by `next(n, prev)` with the shared truncation rule:
/// stop after `QUIET_TERMS` consecutive terms below `rel_tol·|sum|`, scaled by
/// the geometric tail factor `1 - ratio` when terms are still decaying slowly.
pub(crate) fn sum_series(
    what: &'static str,
    first: f64,
    ctrl: &SeriesControl,
    mut next: impl FnMut(usize, f64) -> f64,
) -> Result<f64> {
    let mut sum = first;
    let mut term = first;
    let mut quiet = 0;
    for n in 0..ctrl.max_terms {
        let new = next(n, term);
        sum += new;
        if new == 0.0 && term != 0.0 && n > 0 {
            // terminating series
            return Ok(sum);
        }
        let ratio = if term != 0.0 { (new / term).abs() } else { 0.0 };
        let tail = if ratio < 1.0 { new.abs() / (1.0 - ratio) } else { f64::INFINITY };
        let scale = sum.abs().max(f64::MIN_POSITIVE);
        if tail <= ctrl.rel_tol * scale {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        term = new;
        if term == 0.0 && n == 0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergent { what, terms: ctrl.max_terms })
}

/// Plain power series Σ (a)_n (b)_n / ((c)_n n!) zⁿ.
pub(crate) fn series_2f1(a: f64, b: f64, c: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    sum_series("2F1 power series", 1.0, ctrl, |n, prev| {
        let nf = n as f64;
        prev * (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z
    })
}

#[derive(Debug, Clone, Copy)]
struct Connection {
    /// c - a - b
    m: f64,
    g1: f64,
    g2: f64,
}

/// A ₂F₁ with fixed parameters, evaluated repeatedly at `z ∈ (-∞, 1)`.
///
/// Arguments are passed together with their complement `1 - z` so that values
/// of `z` within a few ulps of 1 keep full relative accuracy.
#[derive(Debug, Clone)]
pub struct Gauss2F1 {
    a: f64,
    b: f64,
    c: f64,
    terminating: bool,
    connection: Option<Connection>,
    /// `c - a - b` when it is (numerically) an integer.
    integer_m: Option<i32>,
}

impl Gauss2F1 {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if is_nonpositive_integer(c) {
            return invalid(format!("2F1 lower parameter c = {c} is a nonpositive integer"));
        }
        let terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
        let m = c - a - b;
        let near_integer = (m - m.round()).abs() < 1e-8;
        let small = a.abs().max(b.abs()).max(c.abs()) <= CONNECTION_PARAM_LIMIT;
        let integer_m = (!terminating && near_integer && small).then(|| m.round() as i32);
        let connection = if terminating || near_integer || !small {
            None
        } else {
            Some(Connection {
                m,
                g1: gamma_ratio(&[c, m], &[c - a, c - b])?,
                g2: gamma_ratio(&[c, -m], &[a, b])?,
            })
        };
        Ok(Self { a, b, c, terminating, connection, integer_m })
    }

    /// Evaluates at `z`; `zc` must equal `1 - z` (computed by the caller
    /// without cancellation where possible).
    pub fn eval_pair(&self, z: f64, zc: f64, ctrl: &SeriesControl) -> Result<f64> {
        let (a, b, c) = (self.a, self.b, self.c);
        if z == 0.0 {
            return Ok(1.0);
        }
        if !(zc > 0.0) {
            return Err(Error::OutOfRegion { x: z, y: 0.0 });
        }
        if self.terminating {
            return series_2f1(a, b, c, z, ctrl);
        }
        if z < 0.0 {
            // Pfaff: F(a,b;c;z) = (1-z)^{-b} F(c-a, b; c; z/(z-1))
            let inner = Gauss2F1::new(c - a, b, c)?;
            let w = -z / zc;
            let wc = 1.0 / zc;
            return Ok(zc.powf(-b) * inner.eval_pair(w, wc, ctrl)?);
        }
        if z <= Z_DIRECT {
            return series_2f1(a, b, c, z, ctrl);
        }
        if let Some(conn) = self.connection {
            let first = series_2f1(a, b, 1.0 - conn.m, zc, ctrl)?;
            let second = series_2f1(c - a, c - b, 1.0 + conn.m, zc, ctrl)?;
            return Ok(conn.g1 * first + conn.g2 * zc.powf(conn.m) * second);
        }
        if let Some(m) = self.integer_m {
            if m < 0 {
                // Euler: F(a,b;c;z) = (1-z)^{c-a-b} F(c-a, c-b; c; z)
                return Ok(zc.powi(m) * integer_case_series(c - a, c - b, -m, zc, ctrl)?);
            }
            return integer_case_series(a, b, m, zc, ctrl);
        }
        series_2f1(a, b, c, z, ctrl)
    }

    pub fn eval(&self, z: f64, ctrl: &SeriesControl) -> Result<f64> {
        self.eval_pair(z, 1.0 - z, ctrl)
    }
}

/// F(a, b; c; z) for real `z < 1`.
///
/// Direct summation on `[0, 1/2]`, the Pfaff transformation for `z < 0`
/// and the `1 - z` connection formula (or its logarithmic form when
/// `c - a - b` is an integer) on `(1/2, 1)`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    ctrl.validate()?;
    if !(z < 1.0) || !z.is_finite() {
        return invalid(format!("2F1 argument z = {z} must be finite and below 1"));
    }
    Gauss2F1::new(a, b, c)?.eval(z, ctrl)
}

/// Gauss summation F(a, b; c; 1) = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b)).
pub fn gauss_2f1_at_one(a: f64, b: f64, c: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return invalid(format!("c = {c} is a nonpositive integer"));
    }
    if !(c - a - b > 0.0) {
        return invalid(format!("Gauss summation needs c - a - b > 0, got {}", c - a - b));
    }
    gamma_ratio(&[c, c - a - b], &[c - a, c - b])
}

/// F(a, b; a + b; z) near z = 1 through the expansion in powers of `1 - z`
/// that isolates the `ln(1 - z)` singularity.
pub fn gauss_2f1_log_case(a: f64, b: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    ctrl.validate()?;
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return invalid("logarithmic expansion needs a, b not in {0, -1, -2, ...}");
    }
    if !(z > 0.0 && z < 1.0) {
        return invalid(format!("logarithmic expansion needs 0 < z < 1, got {z}"));
    }
    log_case_series(a, b, 1.0 - z, ctrl)
}

/// F(a, b; a + b + m; z) for integer `m ≥ 0`, expanded in powers of `1 - z`
/// with the logarithmic terms written out.
fn integer_case_series(a: f64, b: f64, m: i32, zc: f64, ctrl: &SeriesControl) -> Result<f64> {
    if m == 0 {
        return log_case_series(a, b, zc, ctrl);
    }
    let mf = f64::from(m);
    let c = a + b + mf;
    // finite part: Γ(m)Γ(c)/(Γ(a+m)Γ(b+m)) Σ_{n<m} (a)_n (b)_n / (n! (1-m)_n) (1-z)^n
    let mut finite = 0.0;
    let mut coef = 1.0;
    for n in 0..m {
        let nf = f64::from(n);
        finite += coef;
        coef *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * zc;
    }
    finite *= gamma_ratio(&[mf, c], &[a + mf, b + mf])?;

    // logarithmic part: -(z-1)^m Γ(c)/(Γ(a)Γ(b)) Σ (a+m)_n (b+m)_n / (n!(n+m)!) (1-z)^n
    //   × [ln(1-z) - ψ(n+1) - ψ(n+m+1) + ψ(a+n+m) + ψ(b+n+m)]
    let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
    let lead = sign * zc.powi(m) * gamma_ratio(&[c], &[a, b, mf + 1.0])?;
    let ln_zc = zc.ln();
    let mut psi_1 = -super::gamma::EULER_GAMMA;
    let mut psi_m = super::digamma(mf + 1.0)?;
    let mut psi_a = super::digamma(a + mf)?;
    let mut psi_b = super::digamma(b + mf)?;
    let mut coef = 1.0;
    let mut sum = ln_zc - psi_1 - psi_m + psi_a + psi_b;
    let mut quiet = 0;
    for n in 0..ctrl.max_terms {
        let nf = n as f64;
        coef *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (mf + nf + 1.0)) * zc;
        psi_1 += 1.0 / (nf + 1.0);
        psi_m += 1.0 / (mf + nf + 1.0);
        psi_a += 1.0 / (a + mf + nf);
        psi_b += 1.0 / (b + mf + nf);
        let term = coef * (ln_zc - psi_1 - psi_m + psi_a + psi_b);
        sum += term;
        let total = finite + lead * sum;
        if (lead * term).abs() <= ctrl.rel_tol * total.abs().max(f64::MIN_POSITIVE) {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergent { what: "2F1 integer-exponent expansion", terms: ctrl.max_terms })
}

fn log_case_series(a: f64, b: f64, zc: f64, ctrl: &SeriesControl) -> Result<f64> {
    let lead = gamma_ratio(&[a + b], &[a, b])?;
    let ln_zc = zc.ln();
    // ψ values at n = 0: ψ(1), ψ(a), ψ(b)
    let mut psi_one = -super::gamma::EULER_GAMMA;
    let mut psi_a = super::digamma(a)?;
    let mut psi_b = super::digamma(b)?;
    let mut coef = 1.0;
    let mut sum = coef * (2.0 * psi_one - psi_a - psi_b - ln_zc);
    let mut quiet = 0;
    for n in 0..ctrl.max_terms {
        let nf = n as f64;
        coef *= (a + nf) * (b + nf) / ((nf + 1.0) * (nf + 1.0)) * zc;
        psi_one += 1.0 / (nf + 1.0);
        psi_a += 1.0 / (a + nf);
        psi_b += 1.0 / (b + nf);
        let term = coef * (2.0 * psi_one - psi_a - psi_b - ln_zc);
        sum += term;
        if term.abs() <= ctrl.rel_tol * sum.abs() * (1.0 - zc) {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok(lead * sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergent { what: "2F1 logarithmic expansion", terms: ctrl.max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctrl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn value_at_origin_is_one() {
        assert_eq!(gauss_2f1(0.3, -1.7, 2.2, 0.0, &ctrl()).unwrap(), 1.0);
    }

    #[test]
    fn log_closed_form() {
        let v = gauss_2f1(1.0, 1.0, 2.0, 0.5, &ctrl()).unwrap();
        assert!((v - 4f64.ln()).abs() < 1e-12);
        // connection branch is unavailable (c - a - b = 0): log expansion takes over
        let z = 0.9;
        let v = gauss_2f1(1.0, 1.0, 2.0, z, &ctrl()).unwrap();
        assert!((v + (1.0 - z).ln() / z).abs() < 1e-12);
    }

    #[test]
    fn terminating_series_is_exact() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (0.7, 1.3, -5.0);
        let exact = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        let v = gauss_2f1(-2.0, b, c, z, &ctrl()).unwrap();
        assert!((v - exact).abs() < 1e-13 * exact.abs());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(gauss_2f1(1.0, 1.0, -2.0, 0.1, &ctrl()), Err(Error::InvalidParams(_))));
        assert!(gauss_2f1(1.0, 1.0, 2.0, 1.0, &ctrl()).is_err());
        assert!(gauss_2f1_at_one(1.0, 1.0, 2.0).is_err());
        assert!(gauss_2f1_log_case(0.0, 1.0, 0.5, &ctrl()).is_err());
    }

    #[test]
    fn nonconvergence_is_reported() {
        let tight = SeriesControl { rel_tol: 1e-15, max_terms: 5 };
        assert!(matches!(
            gauss_2f1(0.5, 0.5, 1.7, 0.45, &tight),
            Err(Error::NonConvergent { .. })
        ));
    }

    #[test]
    fn at_one_trivial_and_gamma_forms() {
        assert_eq!(gauss_2f1_at_one(0.0, 0.3, 1.4).unwrap(), 1.0);
        let v = gauss_2f1_at_one(0.25, 0.25, 1.5).unwrap();
        let g = |x: f64| super::super::gamma(x);
        assert!((v - g(1.5) * g(1.0) / (g(1.25) * g(1.25))).abs() < 1e-14);
    }

    #[test]
    fn log_case_near_one_is_finite() {
        let v = gauss_2f1_log_case(0.5, 0.5, 1.0 - 1e-8, &ctrl()).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn integer_exponent_cases() {
        // m = -1: F(1, 1; 1; z) = 1/(1-z)
        let v = gauss_2f1(1.0, 1.0, 1.0, 0.9, &ctrl()).unwrap();
        assert!((v - 10.0).abs() < 1e-12);
        // agreement with direct summation where it still converges quickly
        for (a, b, c) in [(0.25, 0.25, 1.5), (0.3, 0.7, 3.0), (1.5, 0.5, 1.0), (0.7, 0.8, -0.5)] {
            let z = 0.7;
            let direct = series_2f1(a, b, c, z, &ctrl()).unwrap();
            let v = gauss_2f1(a, b, c, z, &ctrl()).unwrap();
            assert!((v - direct).abs() < 1e-12 * direct.abs(), "{a} {b} {c}: {v} vs {direct}");
        }
        // approaches the Gauss sum when c - a - b = 1
        let exact = gauss_2f1_at_one(0.25, 0.25, 1.5).unwrap();
        let v = gauss_2f1(0.25, 0.25, 1.5, 1.0 - 1e-9, &ctrl()).unwrap();
        assert!((v - exact).abs() < 1e-7);
    }
}
