//! Run configuration: a JSON file merged with command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use biaxial_core::geometry::{Curve, CurveSpec};
use biaxial_core::kernels::Params;
use biaxial_core::quadrature::QuadConfig;
use biaxial_core::specfun::SeriesControl;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Identity suites run by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Gauge,
    Axis,
    Jump,
    Flux,
    Bounds,
    Specfun,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Gauge, Suite::Axis, Suite::Jump, Suite::Flux, Suite::Bounds, Suite::Specfun];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub curve: CurveSpec,
    pub quadrature: QuadConfig,
    pub series: SeriesControl,
    pub suites: Vec<Suite>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub curve: Option<String>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => serde_json::from_str(&read(p)?).map_err(|source| CliError::Json { path: p.to_owned(), source })?,
            None => RunConfig::default(),
        };
        cfg.alpha = overrides.alpha.or(cfg.alpha);
        cfg.beta = overrides.beta.or(cfg.beta);
        if let Some(curve) = overrides.curve {
            cfg.curve = parse_curve(&curve)?;
        }
        if let Some(tol) = overrides.tol {
            cfg.quadrature.rel_tol = tol;
        }
        cfg.out = overrides.out.or(cfg.out);
        cfg.format = overrides.format.or(cfg.format);
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        self.series.validate()?;
        self.param_sets()?;
        Ok(())
    }

    /// The explicitly requested parameter pair, if any (a missing partner
    /// defaults to 0.25).
    pub fn explicit_params(&self) -> Result<Option<Params>> {
        if self.alpha.is_none() && self.beta.is_none() {
            return Ok(None);
        }
        Ok(Some(Params::new(self.alpha.unwrap_or(0.25), self.beta.unwrap_or(0.25))?))
    }

    /// Parameters for single evaluations: the requested pair or `α = β = 1/4`.
    pub fn params(&self) -> Result<Params> {
        Ok(self.explicit_params()?.unwrap_or(Params { alpha: 0.25, beta: 0.25 }))
    }

    /// Parameter sets swept by `verify`: the requested pair, or both defaults.
    pub fn param_sets(&self) -> Result<Vec<Params>> {
        Ok(match self.explicit_params()? {
            Some(p) => vec![p],
            None => vec![Params { alpha: 0.25, beta: 0.25 }, Params { alpha: 0.1, beta: 0.4 }],
        })
    }

    pub fn build_curve(&self) -> Result<Curve> {
        Ok(Curve::from_spec(&self.curve)?)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}

/// `--curve` accepts inline JSON or the path of a JSON file.
fn parse_curve(arg: &str) -> Result<CurveSpec> {
    let (text, origin) = if arg.trim_start().starts_with('{') {
        (arg.to_owned(), PathBuf::from("--curve"))
    } else {
        (read(Path::new(arg))?, PathBuf::from(arg))
    };
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: origin, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"alpha": 0.1, "beta": 0.4, "quadrature": {"rel_tol": 1e-9}}"#).unwrap();
        let cfg = RunConfig::load(Some(&path), Overrides { beta: Some(0.2), ..Default::default() }).unwrap();
        assert_eq!(cfg.params().unwrap(), Params { alpha: 0.1, beta: 0.2 });
        assert_eq!(cfg.quadrature.rel_tol, 1e-9);
        assert_eq!(cfg.quadrature.nodes_per_panel, QuadConfig::default().nodes_per_panel);
    }

    #[test]
    fn defaults_sweep_both_parameter_sets() {
        let cfg = RunConfig::load(None, Overrides::default()).unwrap();
        assert_eq!(cfg.param_sets().unwrap().len(), 2);
        assert_eq!(cfg.format(), Format::Csv);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = Overrides { alpha: Some(0.6), ..Default::default() };
        assert_eq!(RunConfig::load(None, bad).unwrap_err().exit_code(), 2);
        let curve = Overrides { curve: Some(r#"{"type": "superellipse", "a": 1, "b": 1, "p": 2.2}"#.into()), ..Default::default() };
        assert!(matches!(RunConfig::load(None, curve).unwrap().curve, CurveSpec::Superellipse { p, .. } if p == 2.2));
        let unknown = Overrides { curve: Some(r#"{"type": "spiral"}"#.into()), ..Default::default() };
        assert!(RunConfig::load(None, unknown).is_err());
    }
}
