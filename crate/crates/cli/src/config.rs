//! Experiment configuration: a TOML file plus `--set key=value` overrides.

use std::path::{Path, PathBuf};

use blowup_lab::euler::SolverConfig;
use blowup_lab::fields::{DiffMethod, SnapshotFormat};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    GenData,
    Check,
    Burgers,
    Simulate,
    VerifyTheorem,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GenData => "gen-data",
            Command::Check => "check",
            Command::Burgers => "burgers",
            Command::Simulate => "simulate",
            Command::VerifyTheorem => "verify-theorem",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    #[default]
    F64,
}

/// Theorem selector of `verify-theorem`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Theorem {
    /// Integral (moment) condition: finite lifespan.
    #[serde(rename = "thm2.2")]
    #[value(name = "thm2.2")]
    Integral,
    /// Lifespan at most 1/λmax.
    #[serde(rename = "prop2.3")]
    #[value(name = "prop2.3")]
    Lifespan,
    /// H^m smallness with (ND): blow-up before 2/λmax.
    #[serde(rename = "thm2.5")]
    #[value(name = "thm2.5")]
    Smallness,
    /// Expansive data with small compactly supported density: global solution.
    #[serde(rename = "prop2.7")]
    #[value(name = "prop2.7")]
    Global,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    /// Cells per axis.
    pub cells: usize,
    /// The box is [−half_width, half_width]^dim.
    pub half_width: f64,
    pub periodic: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { dim: 1, cells: 256, half_width: 4.0, periodic: false }
    }
}

/// Gaussian density companion ρ̄_d + a exp(−|x|²/w²) for the velocity-only examples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensitySpec {
    pub background: f64,
    pub amplitude: f64,
    pub width: f64,
}

impl Default for DensitySpec {
    fn default() -> Self {
        Self { background: 0.0, amplitude: 1e-6, width: 1.0 }
    }
}

/// Initial datum. `rho_bar` and `gamma` come from the top level of the config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    #[default]
    Constant,
    #[serde(rename = "compressive_1d")]
    Compressive1d {
        lambda0: f64,
        inner: f64,
        outer: f64,
        rho_amplitude: f64,
    },
    ExpansiveLinear {
        inner: f64,
        outer: f64,
        rho_amplitude: f64,
        rho_radius: f64,
        #[serde(default)]
        rho_floor: f64,
    },
    SiderisPulse {
        excess: f64,
        radius: f64,
        margin: f64,
    },
    Example1 {
        radius: f64,
        n: u32,
        #[serde(default)]
        density: DensitySpec,
    },
    Example2 {
        radius: f64,
        lambda: f64,
        n: u32,
    },
    Example3 {
        radius: f64,
        #[serde(default)]
        density: DensitySpec,
    },
    /// A file written by `gen-data` or `simulate` (density then velocity).
    Snapshot {
        path: PathBuf,
        format: SnapshotFormat,
        #[serde(default)]
        periodic: bool,
    },
}

impl DataSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            DataSpec::Constant => "constant",
            DataSpec::Compressive1d { .. } => "compressive_1d",
            DataSpec::ExpansiveLinear { .. } => "expansive_linear",
            DataSpec::SiderisPulse { .. } => "sideris_pulse",
            DataSpec::Example1 { .. } => "example1",
            DataSpec::Example2 { .. } => "example2",
            DataSpec::Example3 { .. } => "example3",
            DataSpec::Snapshot { .. } => "snapshot",
        }
    }
}

/// Criteria inputs other than ρ̄ and γ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriteriaSpec {
    /// Support radius R of the integral condition.
    pub radius: f64,
    pub m: Option<usize>,
    pub alpha: f64,
    pub density_epsilon: f64,
    pub method: Option<DiffMethod>,
}

impl Default for CriteriaSpec {
    fn default() -> Self {
        let p = blowup_lab::criteria::ReportParams::default();
        Self { radius: p.radius, m: p.m, alpha: p.alpha, density_epsilon: p.density_epsilon, method: p.method }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct BurgersSpec {
    pub method: Option<DiffMethod>,
    /// Times at which v(t, ·) is written; times at or past t* are skipped.
    pub times: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TheoremSpec {
    pub name: Option<Theorem>,
    /// Allowed factor on the lifespan bounds (1/λmax, 2/λmax).
    pub bound_factor: f64,
    /// Largest allowed log–log slope of Γ(1+t)^a for the global result.
    pub slope_tol: f64,
    /// Decay parameter s in a = 1 + s + d/2.
    pub s: f64,
    /// Step r of the finite-difference slope u₀(x₀+rξ₀) − u₀(x₀) = −λ₀rξ₀.
    pub r: f64,
    /// Relative tolerance on the component of that difference orthogonal to ξ₀.
    pub direction_tol: f64,
    pub rate_tol: f64,
    pub drift_tol: f64,
}

impl Default for TheoremSpec {
    fn default() -> Self {
        Self {
            name: None,
            bound_factor: 1.25,
            slope_tol: 0.05,
            s: 0.0,
            r: 0.25,
            direction_tol: 1e-6,
            rate_tol: 1e-6,
            drift_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; must agree with the subcommand when given.
    pub command: Option<Command>,
    /// Output directory; `--out` wins. Not part of the report.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    pub precision: Precision,
    pub gamma: f64,
    /// Background density ρ̄ shared by the data, the criteria and the M(t) series.
    pub rho_bar: f64,
    pub snapshot_format: SnapshotFormat,
    pub grid: GridSpec,
    pub data: DataSpec,
    pub solver: SolverConfig,
    pub criteria: CriteriaSpec,
    pub burgers: BurgersSpec,
    pub theorem: TheoremSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: None,
            out: None,
            precision: Precision::F64,
            gamma: 2.0,
            rho_bar: 1.0,
            snapshot_format: SnapshotFormat::Binary,
            grid: GridSpec::default(),
            data: DataSpec::default(),
            solver: SolverConfig::default(),
            criteria: CriteriaSpec::default(),
            burgers: BurgersSpec::default(),
            theorem: TheoremSpec::default(),
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parses the right-hand side of `--set` as a TOML value, falling back to a
/// bare string so `--set data.kind=constant` works unquoted.
fn parse_value(raw: &str) -> toml::Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<(), CliError> {
    let (key, raw) =
        assignment.split_once('=').ok_or_else(|| config_err(format!("--set expects key=value, got `{assignment}`")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(config_err(format!("bad key `{key}`")));
    }
    let mut cur = table;
    for part in &path[..path.len() - 1] {
        let entry = cur.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| config_err(format!("`{part}` in `{key}` is not a section")))?;
    }
    cur.insert(path[path.len() - 1].to_string(), parse_value(raw.trim()));
    Ok(())
}

/// Reads `path` (if any), applies the overrides in order and validates.
pub fn load(path: Option<&Path>, sets: &[String]) -> Result<ExperimentConfig, CliError> {
    let mut table = match path {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| config_err(format!("cannot read {}: {e}", p.display())))?;
            toml::from_str::<toml::Table>(&text).map_err(|e| config_err(format!("{}: {e}", p.display())))?
        }
        None => toml::Table::new(),
    };
    for s in sets {
        apply_override(&mut table, s)?;
    }
    if table.get("solver").and_then(|s| s.get("rho_bar")).is_some() {
        return Err(config_err("set rho_bar at the top level, not in [solver]"));
    }
    let mut cfg: ExperimentConfig =
        toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| config_err(e.to_string()))?;
    // relative snapshot paths are taken relative to the config file
    if let (DataSpec::Snapshot { path: data_path, .. }, Some(p)) = (&mut cfg.data, path) {
        if data_path.is_relative() {
            if let Some(dir) = p.parent() {
                *data_path = dir.join(&*data_path);
            }
        }
    }
    cfg.solver.rho_bar = cfg.rho_bar;
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn validate(&self, command: Command) -> Result<(), CliError> {
        if let Some(c) = self.command {
            if c != command {
                return Err(config_err(format!("config is for `{}` but `{}` was invoked", c.name(), command.name())));
            }
        }
        if self.theorem.name.is_some() && command != Command::VerifyTheorem {
            return Err(config_err("a theorem selector is only valid with verify-theorem"));
        }
        if command == Command::VerifyTheorem && self.theorem.name.is_none() {
            return Err(config_err("verify-theorem needs a theorem (theorem.name or --theorem)"));
        }
        if !(self.gamma > 1.0) {
            return Err(config_err(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if !(self.rho_bar >= 0.0) {
            return Err(config_err("rho_bar must be non-negative"));
        }
        if !(1..=3).contains(&self.grid.dim) || self.grid.cells == 0 || !(self.grid.half_width > 0.0) {
            return Err(config_err("grid needs dim in 1..=3, cells ≥ 1 and half_width > 0"));
        }
        if let DataSpec::Snapshot { path, .. } = &self.data {
            if !path.exists() {
                return Err(config_err(format!("snapshot {} does not exist", path.display())));
            }
        }
        if self.theorem.bound_factor < 1.0 || !(self.theorem.r > 0.0) {
            return Err(config_err("theorem.bound_factor must be ≥ 1 and theorem.r positive"));
        }
        self.solver.validate().map_err(|e| config_err(e.to_string()))
    }
}
