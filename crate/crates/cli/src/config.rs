//! Run configuration: `key = value` files layered under command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cntflow_core::{
    mixture_ratios, BuiltinFluid, EnergyForm, FlowParameters, FluidProperties, MixtureRatios, ShootingConfig,
    SolverConfig,
};

use crate::CliError;

/// Keys accepted in config files and as `--key value` flags.
pub const KEYS: &[&str] = &[
    "phi",
    "porosity_k",
    "forchheimer_fr",
    "magnetic_m",
    "radiation_r",
    "prandtl",
    "suction_s",
    "velocity_slip",
    "thermal_slip",
    "energy_form",
    "particle",
    "base",
    "eta_max",
    "n_nodes",
    "tolerance",
    "solver",
    "out",
];

/// The nine flow parameters a sweep may vary.
pub const SWEEPABLE: &[&str] = &[
    "phi",
    "porosity_k",
    "forchheimer_fr",
    "magnetic_m",
    "radiation_r",
    "prandtl",
    "suction_s",
    "velocity_slip",
    "thermal_slip",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    KellerBox,
    Shooting,
    Both,
}

impl SolverChoice {
    pub fn name(self) -> &'static str {
        match self {
            SolverChoice::KellerBox => "kellerbox",
            SolverChoice::Shooting => "shooting",
            SolverChoice::Both => "both",
        }
    }
}

impl fmt::Display for SolverChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kellerbox" | "keller-box" | "keller_box" => Ok(SolverChoice::KellerBox),
            "shooting" => Ok(SolverChoice::Shooting),
            "both" => Ok(SolverChoice::Both),
            other => Err(CliError::Invalid(format!(
                "unknown solver '{other}' (expected kellerbox, shooting or both)"
            ))),
        }
    }
}

/// A fluid given by catalog name or by a `density,specific_heat,conductivity` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluidSpec {
    Builtin(BuiltinFluid),
    Custom(FluidProperties),
}

impl FluidSpec {
    pub fn properties(&self) -> FluidProperties {
        match self {
            FluidSpec::Builtin(b) => b.properties(),
            FluidSpec::Custom(p) => *p,
        }
    }
}

impl fmt::Display for FluidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FluidSpec::Builtin(b) => write!(f, "{b}"),
            FluidSpec::Custom(p) => write!(f, "{},{},{}", p.density, p.specific_heat, p.conductivity),
        }
    }
}

impl FromStr for FluidSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s.contains(',') {
            let parts: Vec<f64> = s
                .split(',')
                .map(|p| parse_f64("fluid property", p))
                .collect::<Result<_, _>>()?;
            if parts.len() != 3 {
                return Err(CliError::Invalid(format!(
                    "custom fluid needs density,specific_heat,conductivity, got '{s}'"
                )));
            }
            Ok(FluidSpec::Custom(FluidProperties::new(parts[0], parts[1], parts[2])?))
        } else {
            Ok(FluidSpec::Builtin(s.parse()?))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub base: FluidSpec,
    pub particle: FluidSpec,
    pub params: FlowParameters,
    pub eta_max: f64,
    /// Mesh nodes including both ends; intervals = n_nodes - 1.
    pub n_nodes: usize,
    pub tolerance: f64,
    pub solver: SolverChoice,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            base: FluidSpec::Builtin(BuiltinFluid::Kerosene),
            particle: FluidSpec::Builtin(BuiltinFluid::Swcnt),
            params: FlowParameters::default(),
            eta_max: 10.0,
            n_nodes: 1001,
            tolerance: 1e-6,
            solver: SolverChoice::KellerBox,
            out: PathBuf::from("."),
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Invalid(format!("{key}: '{}' is not a number", value.trim())))
}

impl RunConfig {
    /// Baseline shared by the property tables: 10% nanotubes in kerosene at
    /// Pr = 21 with every physical effect switched on.
    pub fn table_baseline() -> Self {
        Self {
            params: FlowParameters {
                phi: 0.1,
                porosity_k: 0.7,
                forchheimer_fr: 0.4,
                magnetic_m: 2.5,
                radiation_r: 10.0,
                prandtl: 21.0,
                suction_s: 0.5,
                velocity_slip: 0.1,
                thermal_slip: 0.1,
                energy_form: EnergyForm::Restated,
            },
            ..Self::default()
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let p = &mut self.params;
        match key {
            "phi" => p.phi = parse_f64(key, value)?,
            "porosity_k" => p.porosity_k = parse_f64(key, value)?,
            "forchheimer_fr" => p.forchheimer_fr = parse_f64(key, value)?,
            "magnetic_m" => p.magnetic_m = parse_f64(key, value)?,
            "radiation_r" => p.radiation_r = parse_f64(key, value)?,
            "prandtl" => p.prandtl = parse_f64(key, value)?,
            "suction_s" => p.suction_s = parse_f64(key, value)?,
            "velocity_slip" => p.velocity_slip = parse_f64(key, value)?,
            "thermal_slip" => p.thermal_slip = parse_f64(key, value)?,
            "energy_form" => p.energy_form = value.trim().parse()?,
            "particle" => self.particle = value.trim().parse()?,
            "base" => self.base = value.trim().parse()?,
            "eta_max" => self.eta_max = parse_f64(key, value)?,
            "n_nodes" => {
                self.n_nodes = value
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Invalid(format!("n_nodes: '{}' is not a count", value.trim())))?
            }
            "tolerance" => self.tolerance = parse_f64(key, value)?,
            "solver" => self.solver = value.parse()?,
            "out" => self.out = PathBuf::from(value.trim()),
            other => {
                return Err(CliError::Invalid(format!(
                    "unknown key '{other}' (expected one of {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let p = &self.params;
        Some(match key {
            "phi" => p.phi.to_string(),
            "porosity_k" => p.porosity_k.to_string(),
            "forchheimer_fr" => p.forchheimer_fr.to_string(),
            "magnetic_m" => p.magnetic_m.to_string(),
            "radiation_r" => p.radiation_r.to_string(),
            "prandtl" => p.prandtl.to_string(),
            "suction_s" => p.suction_s.to_string(),
            "velocity_slip" => p.velocity_slip.to_string(),
            "thermal_slip" => p.thermal_slip.to_string(),
            "energy_form" => p.energy_form.to_string(),
            "particle" => self.particle.to_string(),
            "base" => self.base.to_string(),
            "eta_max" => self.eta_max.to_string(),
            "n_nodes" => self.n_nodes.to_string(),
            "tolerance" => self.tolerance.to_string(),
            "solver" => self.solver.to_string(),
            "out" => self.out.display().to_string(),
            _ => return None,
        })
    }

    /// Apply `key = value` lines. `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), CliError> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Invalid(format!("config line {}: expected key = value", no + 1)))?;
            self.set(key.trim(), value)
                .map_err(|e| CliError::Invalid(format!("config line {}: {e}", no + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_file_text(&text)
    }

    /// Every key in canonical order, formatted as config-file lines.
    pub fn to_file_text(&self) -> String {
        KEYS.iter()
            .map(|k| format!("{k} = {}\n", self.get(k).unwrap_or_default()))
            .collect()
    }

    pub fn intervals(&self) -> usize {
        self.n_nodes.saturating_sub(1)
    }

    pub fn ratios(&self) -> Result<MixtureRatios, CliError> {
        Ok(mixture_ratios(
            &self.base.properties(),
            &self.particle.properties(),
            self.params.phi,
        )?)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.tolerance,
            eta_max: self.eta_max,
            intervals: self.intervals(),
            ..SolverConfig::default()
        }
    }

    pub fn shooting_config(&self) -> ShootingConfig {
        ShootingConfig {
            eta_max: self.eta_max,
            output_intervals: self.intervals().max(200),
            ..ShootingConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params.validate()?;
        if self.n_nodes < 9 {
            return Err(CliError::Invalid(format!(
                "n_nodes must be at least 9 (8 intervals), got {}",
                self.n_nodes
            )));
        }
        self.solver_config().validate()?;
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::Invalid(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        self.ratios()?;
        Ok(())
    }
}
