//! Fixed Gaussian rules on the unit interval.
//!
//! Rules are computed once per (order, exponents) and memoized behind a lock,
//! so every caller observes the same nodes and weights.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::specfun::ln_gamma;

/// Nodes and weights of a rule on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

type Key = (u64, u64, usize);

fn cache() -> &'static RwLock<HashMap<Key, Arc<Rule>>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<Rule>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn memoized(key: Key, build: impl FnOnce() -> Rule) -> Arc<Rule> {
    if let Some(rule) = cache().read().unwrap().get(&key) {
        return rule.clone();
    }
    let rule = Arc::new(build());
    cache().write().unwrap().entry(key).or_insert(rule).clone()
}

/// Gauss–Legendre rule with `n` nodes on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    assert!(n >= 1, "rule order must be positive");
    memoized((0.0f64.to_bits(), 0.0f64.to_bits(), n), || legendre_rule(n))
}

fn legendre_rule(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Jacobi rule for `∫₀¹ s^p (1-s)^q f(s) ds`, `p, q > -1`.
pub fn gauss_jacobi(n: usize, p: f64, q: f64) -> Arc<Rule> {
    assert!(n >= 1, "rule order must be positive");
    assert!(p > -1.0 && q > -1.0, "Jacobi exponents must exceed -1");
    if p == 0.0 && q == 0.0 {
        return gauss_legendre(n);
    }
    memoized((p.to_bits(), q.to_bits(), n), || jacobi_rule(n, p, q))
}

/// Golub–Welsch on the Jacobi matrix for weight (1-x)^a (1+x)^b on [-1, 1].
fn jacobi_rule(n: usize, p: f64, q: f64) -> Rule {
    let (a, b) = (q, p);
    let ab = a + b;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jm[(k, k)] = diag;
        if k + 1 < n {
            let m = kf + 1.0;
            let off_sq = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * m * (m + a) * (m + b) * (m + ab)
                    / ((2.0 * m + ab).powi(2) * (2.0 * m + ab + 1.0) * (2.0 * m + ab - 1.0))
            };
            let off = off_sq.sqrt();
            jm[(k, k + 1)] = off;
            jm[(k + 1, k)] = off;
        }
    }
    // total mass of s^p (1-s)^q on [0, 1]
    let mass = (ln_gamma(p + 1.0) + ln_gamma(q + 1.0) - ln_gamma(p + q + 2.0)).exp();
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (0.5 * (eig.eigenvalues[k] + 1.0), mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(8);
        for k in 0..16 {
            let got: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(k))
                .sum();
            assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn jacobi_moments_match_beta_function() {
        let (p, q) = (-0.75, -0.4);
        let rule = gauss_jacobi(12, p, q);
        for k in 0..20 {
            let got: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(k))
                .sum();
            let kf = k as f64;
            let exact =
                (ln_gamma(p + 1.0 + kf) + ln_gamma(q + 1.0) - ln_gamma(p + q + 2.0 + kf)).exp();
            assert!((got / exact - 1.0).abs() < 1e-13, "k = {k}: {got} vs {exact}");
        }
    }

    #[test]
    fn jacobi_handles_positive_exponents() {
        let rule = gauss_jacobi(10, 0.25, 1.5);
        let got: f64 = rule.weights.iter().sum();
        let exact = (ln_gamma(1.25) + ln_gamma(2.5) - ln_gamma(3.75)).exp();
        assert!((got / exact - 1.0).abs() < 1e-14);
        assert!(rule.nodes.iter().all(|&s| s > 0.0 && s < 1.0));
    }
}
