//! `biaxial`: evaluate fundamental solutions and special functions, run the
//! identity suites, and solve for double-layer densities.

mod commands;
mod config;
mod error;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use biaxial_core::geometry::Point;
use biaxial_core::kernels::SolutionIndex;
use biaxial_core::potentials::LimitSide;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{parse_index, parse_list, parse_point, parse_rhs, EvalTarget, Rhs};
use config::{Format, Overrides, RunConfig, Suite};
use error::Result;
use report::{write_file, Report};

#[derive(Parser)]
#[command(name = "biaxial", version, about = "Potentials of the bi-axially symmetric equation", allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Curve as inline JSON or a JSON file, e.g. '{"type":"superellipse","a":1,"b":1,"p":2.5}'.
    #[arg(long, global = true)]
    curve: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Print single values with 17 significant digits.
    Eval {
        #[command(subcommand)]
        target: EvalCommand,
    },
    /// Run identity suites and write a CSV and a JSON report.
    Verify {
        /// Suites to run (all when omitted and the config names none).
        #[arg(value_enum)]
        suites: Vec<Suite>,
    },
    /// Solve the boundary integral equation for a density.
    #[command(allow_negative_numbers = true)]
    Solve {
        #[arg(long, default_value = "1", value_parser = parse_index)]
        index: SolutionIndex,
        #[arg(long, value_enum, default_value = "interior")]
        side: SideArg,
        /// A constant right-hand side, or "sine" for the round trip of sin(πs/l).
        #[arg(long, default_value = "-1", value_parser = parse_rhs)]
        rhs: Rhs,
        #[arg(long, default_value_t = 128)]
        nodes: usize,
    },
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Fundamental solution q_i(point; pole).
    #[command(allow_negative_numbers = true)]
    Q {
        #[arg(long, default_value = "1", value_parser = parse_index)]
        index: SolutionIndex,
        #[arg(long, value_parser = parse_point)]
        point: Point,
        #[arg(long, value_parser = parse_point)]
        pole: Point,
    },
    /// Appell F2 with the parameters of q_i, or explicit a,b1,b2,c1,c2.
    #[command(allow_negative_numbers = true)]
    F2 {
        #[arg(long, default_value = "1", value_parser = parse_index)]
        index: SolutionIndex,
        #[arg(long, value_parser = parse_list)]
        params: Option<Vec<f64>>,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Gauss 2F1(a, b; c; z).
    #[command(name = "2f1")]
    #[command(allow_negative_numbers = true)]
    Gauss {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        z: f64,
    },
    /// Kernel K_i(s, t) at curve parameters s ≠ t.
    #[command(allow_negative_numbers = true)]
    Kernel {
        #[arg(long, default_value = "1", value_parser = parse_index)]
        index: SolutionIndex,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
    },
    /// Unit-density double layer at one or more poles (plus the axis correction for i > 1).
    #[command(allow_negative_numbers = true)]
    Gauge {
        #[arg(long, default_value = "1", value_parser = parse_index)]
        index: SolutionIndex,
        #[arg(long = "pole", value_parser = parse_point, required = true)]
        poles: Vec<Point>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Interior,
    Exterior,
}

impl From<SideArg> for LimitSide {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Interior => LimitSide::Interior,
            SideArg::Exterior => LimitSide::Exterior,
        }
    }
}

impl From<EvalCommand> for EvalTarget {
    fn from(c: EvalCommand) -> Self {
        match c {
            EvalCommand::Q { index, point, pole } => EvalTarget::Solution { index, point, pole },
            EvalCommand::F2 { index, params, x, y } => EvalTarget::F2 { index, params, x, y },
            EvalCommand::Gauss { a, b, c, z } => EvalTarget::Gauss { a, b, c, z },
            EvalCommand::Kernel { index, s, t } => EvalTarget::Kernel { index, s, t },
            EvalCommand::Gauge { index, poles } => EvalTarget::Gauge { index, poles },
        }
    }
}

/// Runs the suites and writes the report in the selected format plus its
/// sibling in the other one. Returns whether every check passed.
fn verify(cfg: &RunConfig, suites: Vec<Suite>) -> Result<bool> {
    let mut suites = if suites.is_empty() { cfg.suites.clone() } else { suites };
    if suites.is_empty() {
        suites = Suite::ALL.to_vec();
    }
    suites.sort();
    suites.dedup();
    let curve = cfg.build_curve()?;
    let mut report = Report::default();
    for params in cfg.param_sets()? {
        let cx = suites::Context { curve: &curve, params, quad: cfg.quadrature, series: cfg.series };
        for &suite in &suites {
            let records = suites::run(suite, &cx);
            let passed = records.iter().filter(|r| r.passed).count();
            eprintln!("{suite} (α={}, β={}): {passed}/{} passed", params.alpha, params.beta, records.len());
            report.extend(records);
        }
    }
    report.sort();
    let format = cfg.format();
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from(format!("report.{}", format.extension())));
    let (csv_path, json_path) = match format {
        Format::Csv => (out.clone(), out.with_extension("json")),
        Format::Json => (out.with_extension("csv"), out.clone()),
    };
    write_file(&csv_path, &report.to_csv()?)?;
    write_file(&json_path, &(report.to_json() + "\n"))?;
    for r in report.records.iter().filter(|r| !r.passed) {
        eprintln!("FAIL {}: computed {:e}, expected {:e}, error {:e} > {:e}{}", r.check_id, r.computed, r.expected, r.abs_error, r.tol,
            r.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default());
    }
    eprintln!("{}/{} checks passed -> {}", report.passed(), report.records.len(), out.display());
    Ok(report.all_passed())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = cli.global;
    let overrides = Overrides { alpha: g.alpha, beta: g.beta, curve: g.curve, tol: g.tol, out: g.out, format: g.format };
    let cfg = RunConfig::load(g.config.as_deref(), overrides)?;
    match cli.command {
        Command::Eval { target } => commands::eval(&cfg, &target.into())?,
        Command::Verify { suites } => {
            if !verify(&cfg, suites)? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Solve { index, side, rhs, nodes } => commands::solve(&cfg, index, side.into(), rhs, nodes)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
