//! Command-line surface: argument parsing, report assembly, and CSV/JSON
//! emission for every computation the crate offers.
//!
//! Angles cross this boundary in degrees and are converted to radians once;
//! everything below works in radians. Exit codes: 0 success, 1 runtime
//! error, 2 usage error.

use crate::classify;
use crate::error::{Error, Result};
use crate::polar::SteadyPolar;
use crate::reflection::{self, ReflectionSolution};
use crate::riemann::{RiemannSetup, Side, WallAbscissa};
use crate::sim::{FvGrid, SimConfig, Simulation};
use crate::thermo::GasModel;
use crate::verify;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "fourshock",
    version,
    about = "Shock-reflection configurations of the four-shock Riemann problem",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Riemann data, both local reflections, and the configuration
    States(StatesArgs),
    /// Tabulate one steady shock polar
    Polar(PolarArgs),
    /// Critical angles for (gamma, v2) and critical speeds for gamma
    Critical(CriticalArgs),
    /// Classify one parameter tuple
    Classify(StatesParams),
    /// Phase-diagram sweep over the incident-angle square
    Sweep(SweepArgs),
    /// Run the finite-volume simulation and dump the field
    Simulate(SimulateArgs),
    /// Run a named verification suite
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional key=value parameter file (command-line flags win)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatesParams {
    /// Adiabatic exponent, gamma >= 1
    #[arg(long)]
    pub gamma: f64,
    /// Vertical velocity of the top state, in (v_min, 0)
    #[arg(long, allow_hyphen_values = true)]
    pub v2: f64,
    /// Right incident angle in degrees, in [0, theta_cr)
    #[arg(long, default_value = "0")]
    pub theta1: f64,
    /// Left incident angle in degrees, in [0, theta_cr)
    #[arg(long, default_value = "0")]
    pub theta2: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatesArgs {
    #[command(flatten)]
    pub params: StatesParams,
}

#[derive(Debug, Args)]
pub struct PolarArgs {
    #[arg(long)]
    pub gamma: f64,
    /// Upstream Mach number, > 1
    #[arg(long)]
    pub mach: f64,
    /// Number of density-ratio samples
    #[arg(long, default_value = "1000")]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub v2: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub v2: f64,
    /// Grid points per incident angle
    #[arg(long, default_value = "64")]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: StatesParams,
    #[arg(long, default_value = "400")]
    pub nx: usize,
    #[arg(long, default_value = "200")]
    pub ny: usize,
    #[arg(long, default_value = "-4", allow_hyphen_values = true)]
    pub x_lo: f64,
    #[arg(long, default_value = "4")]
    pub x_hi: f64,
    #[arg(long, default_value = "2")]
    pub y_hi: f64,
    #[arg(long, default_value = "0.45")]
    pub cfl: f64,
    #[arg(long, default_value = "1.0")]
    pub t_final: f64,
    /// Write `<prefix>.csv` (field) and `<prefix>.header` (sidecar)
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name (see `verify --help` for the list)
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
    pub suite: String,
    /// Main grid resolution for the finite-volume suites
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

// ------------------------------------------------------------------ report

/// A typed value in a report; floats print with 17 significant digits.
#[derive(Debug, Clone)]
pub enum Value {
    F(f64),
    I(i64),
    S(String),
    B(bool),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::F(x) => format!("{x:.16e}"),
            Value::I(x) => x.to_string(),
            Value::S(s) => s.clone(),
            Value::B(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::F(x) if x.is_finite() => format!("{x:.16e}"),
            Value::F(x) => format!("\"{x}\""),
            Value::I(x) => x.to_string(),
            Value::S(s) => format!("\"{s}\""),
            Value::B(b) => b.to_string(),
        }
    }
}

/// Ordered key-value rows; CSV emits headers plus one line per row, JSON an
/// array of objects (or a single object for one-row reports) with the keys
/// exactly matching the CSV headers.
#[derive(Debug, Clone)]
pub struct Report {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn scalar(pairs: Vec<(&str, Value)>) -> Self {
        Self {
            headers: pairs.iter().map(|(k, _)| k.to_string()).collect(),
            rows: vec![pairs.into_iter().map(|(_, v)| v).collect()],
        }
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.headers.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.iter().map(Value::csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let obj = |row: &Vec<Value>| {
                    let mut s = String::from("{");
                    for (k, v) in self.headers.iter().zip(row) {
                        let _ = write!(s, "\"{k}\": {}, ", v.json());
                    }
                    if s.len() > 1 {
                        s.truncate(s.len() - 2);
                    }
                    s.push('}');
                    s
                };
                if self.rows.len() == 1 {
                    let mut s = obj(&self.rows[0]);
                    s.push('\n');
                    s
                } else {
                    let mut s = String::from("[\n");
                    for (n, row) in self.rows.iter().enumerate() {
                        s.push_str("  ");
                        s.push_str(&obj(row));
                        if n + 1 < self.rows.len() {
                            s.push(',');
                        }
                        s.push('\n');
                    }
                    s.push_str("]\n");
                    s
                }
            }
        }
    }
}

// ----------------------------------------------------------------- helpers

fn gas_and_angles(p: &StatesParams) -> Result<(GasModel, f64, f64)> {
    let gas = GasModel::with_v2(p.gamma, p.v2)?;
    let theta1 = p.theta1.to_radians();
    let theta2 = p.theta2.to_radians();
    let theta_cr = crate::riemann::vacuum_critical_angle(&gas, p.v2)?;
    for (name, theta) in [("theta1", theta1), ("theta2", theta2)] {
        if !(0.0..theta_cr).contains(&theta) {
            return Err(Error::ParameterDomain(format!(
                "{name} = {:.6} deg is outside [0, theta_cr = {:.6} deg)",
                theta.to_degrees(),
                theta_cr.to_degrees()
            )));
        }
    }
    Ok((gas, theta1, theta2))
}

fn abscissa_value(x: WallAbscissa, sign: f64) -> Value {
    Value::F(x.as_f64(sign))
}

fn push_reflection(pairs: &mut Vec<(&str, Value)>, sol: &ReflectionSolution, side: &str) {
    // keys are assembled per side with a fixed order
    let names: [(&str, f64); 6] = [
        ("rho_weak", sol.weak.state.rho),
        ("u_weak", sol.weak.state.u),
        ("shock_angle_weak", sol.weak.shock_angle),
        ("eta_intercept_weak", sol.weak.eta_intercept),
        ("sonic_radius_weak", sol.weak.sonic_radius),
        ("pseudo_speed_weak", sol.weak.pseudo_speed_at_p0),
    ];
    for (k, v) in names {
        pairs.push((Box::leak(format!("{k}_{side}").into_boxed_str()), Value::F(v)));
    }
    pairs.push((
        Box::leak(format!("supersonic_{side}").into_boxed_str()),
        Value::B(sol.weak.supersonic_at_reflection),
    ));
    if let Some(sg) = &sol.strong {
        pairs.push((Box::leak(format!("rho_strong_{side}").into_boxed_str()), Value::F(sg.state.rho)));
        pairs.push((Box::leak(format!("u_strong_{side}").into_boxed_str()), Value::F(sg.state.u)));
    }
}

// ---------------------------------------------------------------- commands

fn cmd_states(p: &StatesParams) -> Result<Report> {
    let (gas, theta1, theta2) = gas_and_angles(p)?;
    let setup = RiemannSetup::build(gas, p.v2, theta1, theta2)?;
    let kind = classify::classify(&gas, p.v2, theta1, theta2)?;

    let mut pairs: Vec<(&str, Value)> = vec![
        ("gamma", Value::F(p.gamma)),
        ("v2", Value::F(p.v2)),
        ("theta1_rad", Value::F(theta1)),
        ("theta2_rad", Value::F(theta2)),
        ("theta_cr", Value::F(setup.theta_cr)),
        ("configuration", Value::S(kind.to_string())),
        ("rho1", Value::F(setup.state1.rho)),
        ("u1", Value::F(setup.state1.u)),
        ("rho3", Value::F(setup.state3.rho)),
        ("u3", Value::F(setup.state3.u)),
        ("xi_p01", abscissa_value(setup.xi_p01, 1.0)),
        ("xi_p02", abscissa_value(setup.xi_p02, -1.0)),
        ("mach2_right", Value::F(setup.pseudo_mach_state2(Side::Right))),
        ("mach2_left", Value::F(setup.pseudo_mach_state2(Side::Left))),
    ];

    let right = reflection::solve_reflection(&gas, p.v2, theta1, Side::Right);
    let left = reflection::solve_reflection(&gas, p.v2, theta2, Side::Left);
    if let (Ok(r), Ok(l)) = (&right, &left) {
        push_reflection(&mut pairs, r, "right");
        push_reflection(&mut pairs, l, "left");
        let pi = reflection::intersection_point(r, l);
        pairs.push(("xi_pi", Value::F(pi.x)));
        pairs.push(("eta_pi", Value::F(pi.y)));
    } else {
        for (side, res) in [("right", &right), ("left", &left)] {
            if let Err(e) = res {
                pairs.push((
                    Box::leak(format!("reflection_{side}").into_boxed_str()),
                    Value::S(e.to_string()),
                ));
            }
        }
    }
    Ok(Report::scalar(pairs))
}

fn cmd_polar(a: &PolarArgs) -> Result<Report> {
    if a.samples < 2 {
        return Err(Error::ParameterDomain("polar needs at least 2 samples".into()));
    }
    let gas = GasModel::new(a.gamma)?;
    let p = SteadyPolar::new(gas, a.mach)?;
    let tau_bar = p.max_density_ratio();
    let mut rows = Vec::with_capacity(a.samples);
    for k in 0..a.samples {
        let tau = 1.0 + (tau_bar - 1.0) * k as f64 / (a.samples - 1) as f64;
        let (u, v, _) = p.downstream_state(tau)?;
        let w = p.deflection(tau)?;
        rows.push(vec![Value::F(tau), Value::F(u), Value::F(v), Value::F(w)]);
    }
    Ok(Report {
        headers: ["tau", "u", "v", "w"].map(String::from).to_vec(),
        rows,
    })
}

fn cmd_critical(a: &CriticalArgs) -> Result<Report> {
    let gas = GasModel::with_v2(a.gamma, a.v2)?;
    let ca = reflection::critical_angles(&gas, a.v2)?;
    let (v2s, v2d) = reflection::critical_v2(&gas)?;
    Ok(Report::scalar(vec![
        ("gamma", Value::F(a.gamma)),
        ("v2", Value::F(a.v2)),
        ("theta_cr", Value::F(ca.theta_cr)),
        ("theta_plus", Value::F(ca.theta_plus)),
        ("theta_s", Value::F(ca.theta_s)),
        ("theta_d", Value::F(ca.theta_d)),
        ("v2_s", Value::F(v2s)),
        ("v2_d", Value::F(v2d)),
        ("theta_plus_capped", Value::B(ca.theta_plus_capped)),
        ("theta_d_is_root", Value::B(ca.theta_d_is_root)),
        ("theta_s_is_root", Value::B(ca.theta_s_is_root)),
    ]))
}

fn cmd_classify(p: &StatesParams) -> Result<Report> {
    let (gas, theta1, theta2) = gas_and_angles(p)?;
    let ca = reflection::critical_angles(&gas, p.v2)?;
    let kind = classify::classify(&gas, p.v2, theta1, theta2)?;
    Ok(Report::scalar(vec![
        ("gamma", Value::F(p.gamma)),
        ("v2", Value::F(p.v2)),
        ("theta1_rad", Value::F(theta1)),
        ("theta2_rad", Value::F(theta2)),
        ("kind", Value::S(kind.to_string())),
        ("theta_s", Value::F(ca.theta_s)),
        ("theta_d", Value::F(ca.theta_d)),
        ("theta_cr", Value::F(ca.theta_cr)),
    ]))
}

fn cmd_sweep(a: &SweepArgs) -> Result<Report> {
    let gas = GasModel::with_v2(a.gamma, a.v2)?;
    let d = classify::sweep_phase_diagram(&gas, a.v2, a.n)?;
    let rows = d
        .cells
        .iter()
        .map(|c| {
            vec![
                Value::F(c.theta1),
                Value::F(c.theta2),
                Value::S(c.kind.to_string()),
                Value::F(d.angles.theta_s),
                Value::F(d.angles.theta_d),
                Value::F(d.angles.theta_cr),
            ]
        })
        .collect();
    Ok(Report {
        headers: ["theta1_rad", "theta2_rad", "kind", "theta_s", "theta_d", "theta_cr"]
            .map(String::from)
            .to_vec(),
        rows,
    })
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Report> {
    let (gas, theta1, theta2) = gas_and_angles(&a.params)?;
    let setup = RiemannSetup::build(gas, a.params.v2, theta1, theta2)?;
    let grid = FvGrid::new(a.nx, a.ny, a.x_lo, a.x_hi, a.y_hi)?;
    let config = SimConfig { cfl: a.cfl, t_final: a.t_final, ..SimConfig::default() };
    let mut sim = Simulation::new(setup, grid, config)?;
    let record = sim.run()?;

    if let Some(prefix) = &a.dump {
        let csv = sim.field.to_csv(&grid);
        std::fs::write(prefix.with_extension("csv"), csv)
            .map_err(|e| Error::ParameterDomain(format!("cannot write field dump: {e}")))?;
        std::fs::write(prefix.with_extension("header"), record.sidecar(sim.t))
            .map_err(|e| Error::ParameterDomain(format!("cannot write sidecar: {e}")))?;
    }

    Ok(Report::scalar(vec![
        ("nx", Value::I(record.nx as i64)),
        ("ny", Value::I(record.ny as i64)),
        ("t_final", Value::F(record.t_final)),
        ("steps", Value::I(record.steps as i64)),
        ("retries", Value::I(record.retries as i64)),
        ("mass_initial", Value::F(record.mass_initial)),
        ("mass_final", Value::F(record.mass_final)),
        ("boundary_influx", Value::F(record.boundary_influx)),
        ("mass_drift_rel", Value::F(record.mass_drift_rel)),
        ("irrotationality", Value::F(record.irrotationality)),
        ("min_rho", Value::F(record.min_rho)),
    ]))
}

// -------------------------------------------------------------- dispatcher

/// Execute a parsed command; the `Ok` payload is the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn std::io::Write) -> Result<i32> {
    let (report, output) = match &cli.command {
        Command::States(a) => (cmd_states(&a.params)?, Some(&a.params.output)),
        Command::Polar(a) => (cmd_polar(a)?, Some(&a.output)),
        Command::Critical(a) => (cmd_critical(a)?, Some(&a.output)),
        Command::Classify(p) => (cmd_classify(p)?, Some(&p.output)),
        Command::Sweep(a) => (cmd_sweep(a)?, Some(&a.output)),
        Command::Simulate(a) => (cmd_simulate(a)?, Some(&a.params.output)),
        Command::Verify(a) => {
            let checks = verify::run_suite(&a.suite, a.nx)?;
            let mut all_ok = true;
            for c in &checks {
                all_ok &= c.passed;
                writeln!(stdout, "{}", verify::format_check(c))
                    .map_err(|e| Error::ParameterDomain(e.to_string()))?;
            }
            return Ok(if all_ok { 0 } else { 1 });
        }
    };

    let output = output.expect("non-verify commands carry output settings");
    let text = report.emit(output.format);
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::ParameterDomain(format!("cannot write {}: {e}", path.display())))?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::ParameterDomain(e.to_string()))?,
    }
    Ok(0)
}

/// Expand `--config FILE` into leading arguments so explicit flags win, then
/// parse. Meant to be called with `std::env::args`.
pub fn parse_args<I: IntoIterator<Item = String>>(argv: I) -> std::result::Result<Cli, clap::Error> {
    let args: Vec<String> = argv.into_iter().collect();
    let config_path = args.iter().position(|a| a == "--config").and_then(|i| args.get(i + 1));
    let expanded = match config_path {
        Some(path) => {
            let content = std::fs::read_to_string(path).unwrap_or_default();
            let mut extra = Vec::new();
            for line in content.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                if let Some((k, v)) = line.split_once('=') {
                    extra.push(format!("--{}", k.trim()));
                    extra.push(v.trim().to_string());
                }
            }
            // program, subcommand, config-derived flags, then user flags
            let mut out: Vec<String> = args.iter().take(2).cloned().collect();
            out.extend(extra);
            out.extend(args.iter().skip(2).cloned());
            out
        }
        None => args,
    };
    Cli::try_parse_from(expanded)
}
