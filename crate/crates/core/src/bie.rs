//! Nyström discretization of the second-kind equations
//! `σ μ(t) + ∫ μ(s) K_i(s, t) ds = f(t)` on Γ, `σ = ∓½`.
//!
//! The parameter interval is split into panels whose breakpoints are graded
//! toward both ends of Γ; each panel carries a Gauss–Legendre rule, and `μ`
//! is represented by its Lagrange interpolant on every panel. Entries for
//! panels well separated from the collocation node use the plain rule; for
//! nearby panels the products `K_i(·, t_j) L_k` are integrated on a
//! geometric mesh refined toward `t_j`, which resolves the log singularity
//! of the kernel on the diagonal.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::Curve;
use crate::kernels::{Params, SolutionIndex};
use crate::potentials::{barycentric_weights, boundary_value, DiagonalKernel, Density, DensityPanel, LimitSide, SampledDensity};
use crate::quadrature::{gauss_legendre, grading_map, QuadConfig};

/// Smallest admissible node count.
pub const MIN_NODES: usize = 8;
/// Condition estimate above which a solve is refused.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Required relative residual `‖Aμ - f‖_∞ / ‖f‖_∞` of the dense solve.
pub const RESIDUAL_TARGET: f64 = 1e-10;

const NODES_PER_PANEL: usize = 16;
// geometric mesh toward the singular point: ratio 1/4, 20 levels (~1e-12)
const NEAR_LEVELS: i32 = 20;
const NEAR_ORDER: usize = 12;

/// A dense Nyström system for one kernel and one side of Γ.
#[derive(Debug, Clone)]
pub struct NystromSystem {
    index: SolutionIndex,
    side: LimitSide,
    panels: Vec<Panel>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    matrix: DMatrix<f64>,
}

#[derive(Debug, Clone)]
struct Panel {
    lo: f64,
    hi: f64,
    // index range of its nodes
    start: usize,
    len: usize,
    bary: Vec<f64>,
}

impl NystromSystem {
    pub fn index(&self) -> SolutionIndex {
        self.index
    }

    pub fn side(&self) -> LimitSide {
        self.side
    }

    /// The free term `σ`.
    pub fn sigma(&self) -> f64 {
        self.side.sign()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node parameters `t_j`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Composite Gauss weights (in the curve parameter).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Panel breakpoints, `0` to `1`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.panels.iter().map(|p| p.lo).collect();
        b.push(1.0);
        b
    }

    /// The full matrix `σI + K`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `(σI + K) v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.len() {
            return invalid(format!("vector of length {} for a system of size {}", v.len(), self.len()));
        }
        Ok((&self.matrix * DVector::from_column_slice(v)).iter().copied().collect())
    }

    /// `f` sampled at the nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&t| f(t)).collect()
    }

    /// Nodal values wrapped as a panel-wise interpolated density.
    pub fn density_from_values(&self, values: &[f64]) -> Result<SampledDensity> {
        if values.len() != self.len() {
            return invalid(format!("{} values for a system of size {}", values.len(), self.len()));
        }
        let panels = self
            .panels
            .iter()
            .map(|p| {
                let r = p.start..p.start + p.len;
                DensityPanel::new(p.lo, p.hi, self.nodes[r.clone()].to_vec(), values[r].to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        SampledDensity::new(panels)
    }
}

fn layout(n_nodes: usize, grading: f64) -> (Vec<Panel>, Vec<f64>, Vec<f64>) {
    let count = ((n_nodes as f64 / NODES_PER_PANEL as f64).round() as usize).max(1);
    let (base, extra) = (n_nodes / count, n_nodes % count);
    let mut panels = Vec::with_capacity(count);
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut weights = Vec::with_capacity(n_nodes);
    for k in 0..count {
        let lo = if k == 0 { 0.0 } else { grading_map(k as f64 / count as f64, grading).0 };
        let hi = if k + 1 == count { 1.0 } else { grading_map((k + 1) as f64 / count as f64, grading).0 };
        let len = base + usize::from(k < extra);
        let rule = gauss_legendre(len);
        let start = nodes.len();
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            nodes.push(lo + (hi - lo) * x);
            weights.push((hi - lo) * w);
        }
        let bary = barycentric_weights(&nodes[start..]);
        panels.push(Panel { lo, hi, start, len, bary });
    }
    (panels, nodes, weights)
}

/// Adds `∫_{lo}^{hi} K(s) L_m(s) ds` for every Lagrange basis function of
/// `panel` into `row`, refining geometrically toward `c ∈ [lo, hi]`.
fn product_integrate(
    kernel: &DiagonalKernel<'_>,
    panel: &Panel,
    nodes: &[f64],
    c: f64,
    row: &mut [f64],
) -> Result<()> {
    let rule = gauss_legendre(NEAR_ORDER);
    let local = &nodes[panel.start..panel.start + panel.len];
    let mut basis = vec![0.0; panel.len];
    for end in [panel.lo, panel.hi] {
        let span = end - c;
        if span == 0.0 {
            continue;
        }
        for level in 0..NEAR_LEVELS {
            let outer = span * 0.25f64.powi(level);
            // below rounding resolution the remaining sliver contributes nothing
            if outer.abs() <= 16.0 * f64::EPSILON * c.abs() {
                break;
            }
            let inner = outer * 0.25;
            let h = outer - inner;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let s = c + inner + h * x;
                let kw = kernel.eval(s)? * w * h.abs();
                lagrange(local, &panel.bary, s, &mut basis);
                for (r, l) in row[panel.start..].iter_mut().zip(&basis) {
                    *r += kw * l;
                }
            }
        }
    }
    Ok(())
}

// values of all Lagrange basis polynomials at t
fn lagrange(nodes: &[f64], bary: &[f64], t: f64, out: &mut [f64]) {
    if let Some(k) = nodes.iter().position(|&x| x == t) {
        out.iter_mut().enumerate().for_each(|(m, o)| *o = f64::from(u8::from(m == k)));
        return;
    }
    let mut total = 0.0;
    for ((o, x), b) in out.iter_mut().zip(nodes).zip(bary) {
        *o = b / (t - x);
        total += *o;
    }
    out.iter_mut().for_each(|o| *o /= total);
}

/// Assembles `σI + K` for `K_i` on Γ with `n_nodes` collocation nodes.
pub fn build_system(
    i: SolutionIndex,
    curve: &Curve,
    n_nodes: usize,
    side: LimitSide,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<NystromSystem> {
    params.validate()?;
    qcfg.validate()?;
    if n_nodes < MIN_NODES {
        return invalid(format!("at least {MIN_NODES} nodes are required, got {n_nodes}"));
    }
    let (panels, nodes, weights) = layout(n_nodes, qcfg.grading_exponent);
    let rows: Vec<Vec<f64>> = nodes
        .par_iter()
        .enumerate()
        .map(|(j, &tj)| {
            let kernel = DiagonalKernel::new(i, curve, tj, params);
            let mut row = vec![0.0; n_nodes];
            for panel in &panels {
                let gap = (panel.lo - tj).max(tj - panel.hi).max(0.0);
                if gap < panel.hi - panel.lo {
                    product_integrate(&kernel, panel, &nodes, tj.clamp(panel.lo, panel.hi), &mut row)?;
                } else {
                    for k in panel.start..panel.start + panel.len {
                        row[k] = weights[k] * kernel.eval(nodes[k])?;
                    }
                }
            }
            row[j] += side.sign();
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let matrix = DMatrix::from_fn(n_nodes, n_nodes, |r, c| rows[r][c]);
    Ok(NystromSystem { index: i, side, panels, nodes, weights, matrix })
}

/// A solved density with the diagnostics of the dense solve.
#[derive(Debug, Clone)]
pub struct DensitySolution {
    pub density: Density,
    /// `‖(σI+K)μ - f‖_∞ / ‖f‖_∞`.
    pub residual: f64,
    /// One-norm condition number of `σI + K`.
    pub condition: f64,
}

impl DensitySolution {
    /// Nodal values of the solution.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        match &self.density {
            Density::Sampled(s) => s.samples().collect(),
            _ => Vec::new(),
        }
    }
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.abs().sum()).fold(0.0, f64::max)
}

/// One-norm condition number `‖A‖₁ ‖A⁻¹‖₁` of a square matrix (infinite
/// when it is singular).
pub fn condition_estimate(m: &DMatrix<f64>) -> f64 {
    match m.clone().lu().try_inverse() {
        Some(inv) => norm1(m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

/// Solves `(σI + K) μ = f` for the nodal values `f` by LU with partial
/// pivoting.
pub fn solve_density(system: &NystromSystem, f: &[f64]) -> Result<DensitySolution> {
    if f.len() != system.len() {
        return invalid(format!("right-hand side of length {} for a system of size {}", f.len(), system.len()));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return invalid("right-hand side must be finite");
    }
    let condition = condition_estimate(&system.matrix);
    if !(condition <= CONDITION_LIMIT) {
        return Err(Error::IllConditioned { condition });
    }
    let rhs = DVector::from_column_slice(f);
    let mu = system
        .matrix
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
    let scale = rhs.amax();
    let residual = if scale == 0.0 { 0.0 } else { (&system.matrix * &mu - &rhs).amax() / scale };
    if !(residual <= RESIDUAL_TARGET) {
        return Err(Error::NoConvergence { residual });
    }
    let values: Vec<f64> = mu.iter().copied().collect();
    Ok(DensitySolution { density: Density::Sampled(system.density_from_values(&values)?), residual, condition })
}

/// Right-hand side produced by a known density: the one-sided boundary
/// values of its double-layer potential at the nodes of `system`.
pub fn forward_data(
    system: &NystromSystem,
    mu: &Density,
    curve: &Curve,
    params: &Params,
    qcfg: &QuadConfig,
) -> Result<Vec<f64>> {
    system
        .nodes
        .par_iter()
        .map(|&t| boundary_value(system.index, mu, curve, t, system.side, params, qcfg)?.value_checked())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Superellipse;

    fn setup() -> (Curve, Params, QuadConfig) {
        (
            Curve::new(Superellipse::new(1.0, 1.0, 2.5).unwrap()).unwrap(),
            Params::new(0.25, 0.25).unwrap(),
            QuadConfig::default(),
        )
    }

    #[test]
    fn layout_tiles_the_parameter_interval() {
        for n in [8, 20, 64, 100] {
            let (panels, nodes, weights) = layout(n, 3.0);
            assert_eq!(nodes.len(), n);
            assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(nodes.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(panels[0].lo, 0.0);
            assert_eq!(panels.last().unwrap().hi, 1.0);
        }
    }

    #[test]
    fn rejects_too_few_nodes() {
        let (c, p, q) = setup();
        assert!(matches!(
            build_system(SolutionIndex::Q1, &c, 4, LimitSide::Interior, &p, &q),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn constant_density_rows() {
        let (c, p, q) = setup();
        for (side, expected) in [(LimitSide::Interior, -1.0), (LimitSide::Exterior, 0.0)] {
            let sys = build_system(SolutionIndex::Q1, &c, 64, side, &p, &q).unwrap();
            let ones = vec![1.0; sys.len()];
            for v in sys.apply(&ones).unwrap() {
                assert!((v - expected).abs() < 1e-6, "{side}: {v}");
            }
        }
    }

    #[test]
    fn solve_is_linear() {
        let (c, p, q) = setup();
        let sys = build_system(SolutionIndex::Q4, &c, 16, LimitSide::Interior, &p, &q).unwrap();
        let f1 = sys.sample(|t| t.sin());
        let f2 = sys.sample(|t| 1.0 - t * t);
        let sum: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| a + b).collect();
        let s = |f: &[f64]| solve_density(&sys, f).unwrap().samples();
        let (a, b, ab) = (s(&f1), s(&f2), s(&sum));
        for k in 0..sys.len() {
            assert!((a[k].1 + b[k].1 - ab[k].1).abs() < 1e-12);
        }
    }
}
