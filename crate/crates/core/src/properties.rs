//! Thermophysical property catalog and the CNT nanofluid mixture model.
//!
//! Mixture rules:
//!
//! ```text
//! mu_nf / mu_f          = (1 - phi)^-2.5
//! rho_nf / rho_f        = (1 - phi) + phi rho_p / rho_f
//! (rho cp)_nf / (..)_f  = (1 - phi) + phi (rho cp)_p / (rho cp)_f
//! k_nf / k_f            = [(k_p + 2k_f) - 2 phi (k_f - k_p)] / [(k_p + 2k_f) + phi (k_f - k_p)]
//! A1                    = 1 / [(1 - phi)^2.5 (1 - phi + phi rho_p / rho_f)]
//! ```
//!
//! The conductivity rule is the Maxwell-type rational form. It is often
//! attributed to Xue, whose actual model is logarithmic; the rational form is
//! what is implemented here.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Result};

/// Volume fractions at or above this bound are rejected.
pub const PHI_MAX: f64 = 0.3;
/// Volume fractions above this bound are accepted with a warning.
pub const PHI_WARN: f64 = 0.2;

/// Density (kg/m³), specific heat (J/(kg·K)) and thermal conductivity (W/(m·K)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidProperties {
    pub density: f64,
    pub specific_heat: f64,
    pub conductivity: f64,
}

impl FluidProperties {
    pub fn new(density: f64, specific_heat: f64, conductivity: f64) -> Result<Self> {
        let props = Self {
            density,
            specific_heat,
            conductivity,
        };
        props.validate()?;
        Ok(props)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("density", self.density),
            ("specific_heat", self.specific_heat),
            ("conductivity", self.conductivity),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Volumetric heat capacity rho·cp.
    pub fn heat_capacity(&self) -> f64 {
        self.density * self.specific_heat
    }
}

/// The built-in catalog: kerosene base fluid and two carbon-nanotube species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinFluid {
    Kerosene,
    Swcnt,
    Mwcnt,
}

impl BuiltinFluid {
    pub const ALL: [BuiltinFluid; 3] = [Self::Kerosene, Self::Swcnt, Self::Mwcnt];

    pub fn name(self) -> &'static str {
        match self {
            Self::Kerosene => "kerosene",
            Self::Swcnt => "swcnt",
            Self::Mwcnt => "mwcnt",
        }
    }

    pub fn properties(self) -> FluidProperties {
        let (density, specific_heat, conductivity) = match self {
            Self::Kerosene => (783.0, 2090.0, 0.145),
            Self::Swcnt => (2600.0, 425.0, 6600.0),
            Self::Mwcnt => (1600.0, 796.0, 3000.0),
        };
        FluidProperties {
            density,
            specific_heat,
            conductivity,
        }
    }
}

impl fmt::Display for BuiltinFluid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinFluid {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kerosene" => Ok(Self::Kerosene),
            "swcnt" => Ok(Self::Swcnt),
            "mwcnt" => Ok(Self::Mwcnt),
            other => Err(invalid(format!(
                "unknown fluid '{other}', expected one of: kerosene, swcnt, mwcnt"
            ))),
        }
    }
}

/// Look up a catalog fluid by name.
pub fn builtin_fluid(name: &str) -> Result<FluidProperties> {
    name.parse::<BuiltinFluid>().map(BuiltinFluid::properties)
}

/// Nanofluid-to-base-fluid property ratios plus the slip factor A1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureRatios {
    pub viscosity_ratio: f64,
    pub density_ratio: f64,
    pub heat_capacity_ratio: f64,
    pub conductivity_ratio: f64,
    pub slip_factor_a1: f64,
}

impl MixtureRatios {
    /// Ratios of the pure base fluid (phi = 0).
    pub const IDENTITY: MixtureRatios = MixtureRatios {
        viscosity_ratio: 1.0,
        density_ratio: 1.0,
        heat_capacity_ratio: 1.0,
        conductivity_ratio: 1.0,
        slip_factor_a1: 1.0,
    };

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("viscosity_ratio", self.viscosity_ratio),
            ("density_ratio", self.density_ratio),
            ("heat_capacity_ratio", self.heat_capacity_ratio),
            ("conductivity_ratio", self.conductivity_ratio),
            ("slip_factor_a1", self.slip_factor_a1),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Kinematic viscosity ratio nu_nf / nu_f.
    pub fn kinematic_viscosity_ratio(&self) -> f64 {
        self.viscosity_ratio / self.density_ratio
    }
}

impl Default for MixtureRatios {
    fn default() -> Self {
        Self::IDENTITY
    }
}

pub(crate) fn check_phi(phi: f64) -> Result<()> {
    if !(phi.is_finite() && (0.0..PHI_MAX).contains(&phi)) {
        return Err(invalid(format!(
            "volume fraction phi must lie in [0, {PHI_MAX}), got {phi}"
        )));
    }
    Ok(())
}

/// Evaluate the mixture model for a base fluid loaded with volume fraction
/// `phi` of `particle`.
pub fn mixture_ratios(base: &FluidProperties, particle: &FluidProperties, phi: f64) -> Result<MixtureRatios> {
    base.validate()?;
    particle.validate()?;
    check_phi(phi)?;
    if phi > PHI_WARN {
        log::warn!("phi = {phi} exceeds {PHI_WARN}; the mixture model is outside its usual range");
    }
    if phi == 0.0 {
        return Ok(MixtureRatios::IDENTITY);
    }

    let solid = 1.0 - phi;
    let viscosity_ratio = solid.powf(-2.5);
    let density_ratio = solid + phi * particle.density / base.density;
    let heat_capacity_ratio = solid + phi * particle.heat_capacity() / base.heat_capacity();

    let (kf, kp) = (base.conductivity, particle.conductivity);
    let conductivity_ratio = ((kp + 2.0 * kf) - 2.0 * phi * (kf - kp)) / ((kp + 2.0 * kf) + phi * (kf - kp));

    let slip_factor_a1 = 1.0 / (solid.powf(2.5) * density_ratio);

    let ratios = MixtureRatios {
        viscosity_ratio,
        density_ratio,
        heat_capacity_ratio,
        conductivity_ratio,
        slip_factor_a1,
    };
    ratios.validate()?;
    Ok(ratios)
}
