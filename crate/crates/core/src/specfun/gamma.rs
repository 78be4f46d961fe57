//! Gamma, log-gamma, reciprocal gamma, digamma and the Pochhammer symbol.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn lanczos_sum(x: f64) -> f64 {
    let mut s = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (x + k as f64);
    }
    s
}

/// `ln |Γ(x)|`. Infinite at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Sign of `Γ(x)`; `0.0` at the poles.
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if is_nonpositive_integer(x) {
        0.0
    } else if (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Γ(x)`; `NaN` at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x > 140.0 {
        return ln_gamma(x).exp();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// `1/Γ(x)`, which is entire: exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x.abs() < 140.0 {
        1.0 / gamma(x)
    } else {
        gamma_sign(x) * (-ln_gamma(x)).exp()
    }
}

/// `Π Γ(num) / Π Γ(den)` evaluated in log space. Returns 0 when a denominator
/// sits on a pole and an error when a numerator does.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    if let Some(x) = num.iter().find(|&&x| is_nonpositive_integer(x)) {
        return invalid(format!("gamma pole at {x} in numerator"));
    }
    if den.iter().any(|&x| is_nonpositive_integer(x)) {
        return Ok(0.0);
    }
    let mut log = 0.0;
    let mut sign = 1.0;
    for &x in num {
        log += ln_gamma(x);
        sign *= gamma_sign(x);
    }
    for &x in den {
        log -= ln_gamma(x);
        sign *= gamma_sign(x);
    }
    Ok(sign * log.exp())
}

/// Digamma ψ(x) = Γ'(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) || !x.is_finite() {
        return invalid(format!("digamma pole at {x}"));
    }
    Ok(digamma_unchecked(x))
}

fn digamma_unchecked(mut x: f64) -> f64 {
    let mut acc = 0.0;
    if x <= 0.0 {
        // ψ(x) = ψ(1 - x) - π cot(πx)
        acc -= PI / (PI * x).tan();
        x = 1.0 - x;
    }
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli tail: B_{2k} / (2k x^{2k})
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32_760.0))))));
    acc + x.ln() - 0.5 / x - tail
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1); equal to 1 for n = 0.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn gamma_at_known_points() {
        assert!(close(gamma(5.0), 24.0, 1e-14));
        assert!(close(gamma(0.5), PI.sqrt(), 1e-14));
        assert!(close(gamma(-0.5), -2.0 * PI.sqrt(), 1e-14));
        assert!(close(gamma(0.25), 3.625_609_908_221_908, 1e-14));
        assert!(close(ln_gamma(100.0), 359.134_205_369_575_4, 1e-14));
        assert!(gamma(-2.0).is_nan());
        assert_eq!(rgamma(-3.0), 0.0);
        assert_eq!(rgamma(0.0), 0.0);
    }

    #[test]
    fn gamma_sign_alternates_on_negative_axis() {
        assert_eq!(gamma_sign(-0.5), -1.0);
        assert_eq!(gamma_sign(-1.5), 1.0);
        assert_eq!(gamma_sign(-2.5), -1.0);
        assert!(gamma(-1.5) > 0.0);
    }

    #[test]
    fn gamma_ratio_handles_poles_and_overflow() {
        let r = gamma_ratio(&[200.5], &[200.0]).unwrap();
        // Γ(x+1/2)/Γ(x) ~ sqrt(x) (1 - 1/(8x))
        assert!(close(r, 200f64.sqrt() * (1.0 - 1.0 / 1600.0), 1e-6));
        assert_eq!(gamma_ratio(&[1.5], &[-1.0]).unwrap(), 0.0);
        assert!(gamma_ratio(&[-2.0], &[1.0]).is_err());
    }

    #[test]
    fn digamma_reference_values() {
        assert!(close(digamma(1.0).unwrap(), -EULER_GAMMA, 1e-14));
        let half = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!(close(digamma(0.5).unwrap(), half, 1e-14));
        assert!(close(digamma(2.0).unwrap() - digamma(1.0).unwrap(), 1.0, 1e-15));
        // reflection branch: ψ(-0.5) = ψ(1.5) + π cot(-π/2)... = 2 - γ - 2 ln 2 + 0
        assert!(close(digamma(-0.5).unwrap(), 2.0 - EULER_GAMMA - 2.0 * 2f64.ln() + 0.0, 1e-13));
        assert!(digamma(0.0).is_err());
        assert!(digamma(-3.0).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(0.7, 0), 1.0);
        assert_eq!(pochhammer(1.0, 4), 24.0);
        assert_eq!(pochhammer(0.5, 2), 0.75);
    }
}
