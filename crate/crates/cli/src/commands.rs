//! `eval` and `solve`.

use std::path::PathBuf;

use biaxial_core::bie::{build_system, forward_data, solve_density};
use biaxial_core::geometry::Point;
use biaxial_core::kernels::{fundamental_solution, kernel, SolutionIndex};
use biaxial_core::potentials::{axis_correction, gauge, Density, LimitSide};
use biaxial_core::specfun::{appell_f2, gauss_2f1, HypergeometricParams};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};
use crate::report::{sci, write_file};

pub fn parse_index(s: &str) -> std::result::Result<SolutionIndex, String> {
    match s.trim_start_matches(['q', 'Q']) {
        "1" => Ok(SolutionIndex::Q1),
        "2" => Ok(SolutionIndex::Q2),
        "3" => Ok(SolutionIndex::Q3),
        "4" => Ok(SolutionIndex::Q4),
        _ => Err(format!("expected 1, 2, 3 or 4, got {s:?}")),
    }
}

/// `x,y` pairs.
pub fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let v = parse_list(s)?;
    match v[..] {
        [x, y] => Ok(Point::new(x, y)),
        _ => Err(format!("expected x,y, got {s:?}")),
    }
}

pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

/// What `eval` computes.
#[derive(Debug, Clone)]
pub enum EvalTarget {
    Solution { index: SolutionIndex, point: Point, pole: Point },
    F2 { index: SolutionIndex, params: Option<Vec<f64>>, x: f64, y: f64 },
    Gauss { a: f64, b: f64, c: f64, z: f64 },
    Kernel { index: SolutionIndex, s: f64, t: f64 },
    Gauge { index: SolutionIndex, poles: Vec<Point> },
}

#[derive(Serialize)]
struct EvalRow {
    label: String,
    value: f64,
}

pub fn eval(cfg: &RunConfig, target: &EvalTarget) -> Result<()> {
    let params = cfg.params()?;
    let rows = match target {
        EvalTarget::Solution { index, point, pole } => {
            vec![EvalRow { label: format!("{index}"), value: fundamental_solution(*index, *point, *pole, &params)? }]
        }
        EvalTarget::F2 { index, params: explicit, x, y } => {
            let hp = match explicit.as_deref() {
                None => index.f2_params(&params),
                Some(&[a, b1, b2, c1, c2]) => HypergeometricParams::new(a, b1, b2, c1, c2)?,
                Some(_) => return Err(CliError::usage("--params expects a,b1,b2,c1,c2")),
            };
            vec![EvalRow { label: "F2".into(), value: appell_f2(&hp, *x, *y, &cfg.series)? }]
        }
        EvalTarget::Gauss { a, b, c, z } => {
            vec![EvalRow { label: "2F1".into(), value: gauss_2f1(*a, *b, *c, *z, &cfg.series)? }]
        }
        EvalTarget::Kernel { index, s, t } => {
            let curve = cfg.build_curve()?;
            vec![EvalRow { label: format!("K{}", index.number()), value: kernel(*index, &curve, *s, *t, &params)? }]
        }
        EvalTarget::Gauge { index, poles } => {
            let curve = cfg.build_curve()?;
            let mut rows = Vec::new();
            for p0 in poles {
                let g = gauge(*index, &curve, *p0, &params, &cfg.quadrature)?;
                rows.push(EvalRow { label: format!("gauge {index} at {p0}"), value: g.value });
                if *index != SolutionIndex::Q1 {
                    let corr = axis_correction(*index, *p0, curve.a(), curve.b(), &params, &cfg.quadrature)?;
                    rows.push(EvalRow { label: format!("axis correction {index} at {p0}"), value: corr.value });
                }
            }
            rows
        }
    };
    let text = match cfg.format() {
        Format::Csv => rows.iter().map(|r| sci(r.value) + "\n").collect::<String>(),
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
    };
    match &cfg.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Right-hand side of a density solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rhs {
    Constant(f64),
    /// Boundary data generated by `μ(s) = sin(πs/l)`; the solve should give it back.
    SineRoundTrip,
}

pub fn parse_rhs(s: &str) -> std::result::Result<Rhs, String> {
    match s {
        "sine" => Ok(Rhs::SineRoundTrip),
        _ => s.parse().map(Rhs::Constant).map_err(|_| format!("expected a number or \"sine\", got {s:?}")),
    }
}

#[derive(Serialize)]
struct SolveSummary {
    index: String,
    side: LimitSide,
    alpha: f64,
    beta: f64,
    nodes: usize,
    residual: f64,
    condition: f64,
    /// Largest nodal deviation from the generating density (round trips only).
    #[serde(skip_serializing_if = "Option::is_none")]
    max_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<[f64; 3]>>,
}

pub fn solve(cfg: &RunConfig, index: SolutionIndex, side: LimitSide, rhs: Rhs, nodes: usize) -> Result<()> {
    let params = cfg.params()?;
    let curve = cfg.build_curve()?;
    let system = build_system(index, &curve, nodes, side, &params, &cfg.quadrature)?;
    let sine = Density::sine(&curve);
    let f = match rhs {
        Rhs::Constant(c) => vec![c; system.len()],
        Rhs::SineRoundTrip => forward_data(&system, &sine, &curve, &params, &cfg.quadrature)?,
    };
    let sol = solve_density(&system, &f)?;
    let samples: Vec<[f64; 3]> = sol.samples().into_iter().map(|(t, mu)| [t, curve.arclength(t), mu]).collect();
    let max_error = (rhs == Rhs::SineRoundTrip)
        .then(|| samples.iter().map(|&[t, _, mu]| (mu - sine.at(&curve, t)).abs()).fold(0.0, f64::max));
    let mut summary = SolveSummary {
        index: index.to_string(),
        side,
        alpha: params.alpha,
        beta: params.beta,
        nodes: system.len(),
        residual: sol.residual,
        condition: sol.condition,
        max_error,
        samples: None,
    };
    let format = cfg.format();
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from(format!("density.{}", format.extension())));
    match format {
        Format::Csv => {
            let mut csv = String::from("t,arclength,mu\n");
            for [t, s, mu] in &samples {
                csv += &format!("{},{},{}\n", sci(*t), sci(*s), sci(*mu));
            }
            write_file(&out, &csv)?;
            let sidecar = serde_json::to_string_pretty(&summary).expect("summary serializes");
            write_file(&out.with_extension("json"), &(sidecar + "\n"))?;
        }
        Format::Json => {
            summary.samples = Some(samples);
            write_file(&out, &(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"))?;
        }
    }
    eprintln!("{index} {side}: {} nodes, residual {:.2e}, condition {:.2e} -> {}", summary.nodes, summary.residual, summary.condition, out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_index("q3").unwrap(), SolutionIndex::Q3);
        assert_eq!(parse_index("2").unwrap(), SolutionIndex::Q2);
        assert!(parse_index("5").is_err());
        assert_eq!(parse_point("1, -2.5").unwrap(), Point::new(1.0, -2.5));
        assert!(parse_point("1").is_err());
        assert_eq!(parse_rhs("-1").unwrap(), Rhs::Constant(-1.0));
        assert_eq!(parse_rhs("sine").unwrap(), Rhs::SineRoundTrip);
        assert!(parse_rhs("cosine").is_err());
    }
}
