//! The similarity-reduced boundary-layer system.
//!
//! With `f' = m`, `m' = n`, `theta' = o` the momentum and energy equations become
//!
//! ```text
//! n' = (rho_nf/rho_f)/(mu_nf/mu_f) * [2 m^2 - f n + K m + Fr m^2 + M m]
//! o' = kappa * (m theta - f o)
//! ```
//!
//! with wall conditions `f(0) = S`, `m(0) = 1 + A1 lambda n(0)`,
//! `theta(0) = 1 + delta o(0)` and far-field conditions `m, theta -> 0`.
//! The energy coefficient `kappa` depends on [`EnergyForm`].

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::properties::{check_phi, FluidProperties, MixtureRatios};

/// How the radiation term enters the energy equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyForm {
    /// `Gamma theta'' = m theta - f theta'` with
    /// `Gamma = (1/Pr) (k_nf/k_f)/((rho cp)_nf/(rho cp)_f) + (4/3) R`.
    #[default]
    Literal,
    /// `theta'' = [Pr ((rho cp)_nf/(rho cp)_f)/(k_nf/k_f) + (3/4) R] (m theta - f theta')`.
    ///
    /// Radiation here raises the effective Prandtl number, so the wall heat
    /// flux grows with R. Used by the table-baseline sweeps.
    Restated,
}

impl EnergyForm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Literal => "literal",
            Self::Restated => "restated",
        }
    }
}

impl fmt::Display for EnergyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnergyForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "literal" => Ok(Self::Literal),
            "restated" => Ok(Self::Restated),
            other => Err(invalid(format!(
                "unknown energy form '{other}', expected literal or restated"
            ))),
        }
    }
}

/// The dimensionless groups governing the reduced system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParameters {
    /// Nanoparticle volume fraction.
    pub phi: f64,
    /// Darcy porosity parameter K.
    pub porosity_k: f64,
    /// Forchheimer number Fr.
    pub forchheimer_fr: f64,
    /// Magnetic parameter M.
    pub magnetic_m: f64,
    /// Radiation parameter R.
    pub radiation_r: f64,
    pub prandtl: f64,
    /// Suction (> 0) or blowing (< 0) parameter S.
    pub suction_s: f64,
    /// Velocity slip lambda.
    pub velocity_slip: f64,
    /// Thermal slip (temperature jump) delta.
    pub thermal_slip: f64,
    pub energy_form: EnergyForm,
}

impl Default for FlowParameters {
    /// The clean Magyari–Keller configuration at Pr = 1.
    fn default() -> Self {
        Self::clean(1.0)
    }
}

impl FlowParameters {
    /// Pure base fluid, impermeable no-slip wall, no porous medium, field or
    /// radiation.
    pub fn clean(prandtl: f64) -> Self {
        Self {
            phi: 0.0,
            porosity_k: 0.0,
            forchheimer_fr: 0.0,
            magnetic_m: 0.0,
            radiation_r: 0.0,
            prandtl,
            suction_s: 0.0,
            velocity_slip: 0.0,
            thermal_slip: 0.0,
            energy_form: EnergyForm::Literal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_phi(self.phi)?;
        if !(self.prandtl.is_finite() && self.prandtl > 0.0) {
            return Err(invalid(format!("prandtl must be positive, got {}", self.prandtl)));
        }
        for (name, v) in [
            ("porosity_k", self.porosity_k),
            ("forchheimer_fr", self.forchheimer_fr),
            ("magnetic_m", self.magnetic_m),
            ("radiation_r", self.radiation_r),
            ("velocity_slip", self.velocity_slip),
            ("thermal_slip", self.thermal_slip),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(format!("{name} must be non-negative, got {v}")));
            }
        }
        if !self.suction_s.is_finite() {
            return Err(invalid("suction_s must be finite"));
        }
        Ok(())
    }
}

/// Nodal unknowns `(f, f', f'', theta, theta')`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateVector {
    pub f: f64,
    /// f'
    pub m: f64,
    /// f''
    pub n: f64,
    pub theta: f64,
    /// theta'
    pub o: f64,
}

impl StateVector {
    pub const fn new(f: f64, m: f64, n: f64, theta: f64, o: f64) -> Self {
        Self { f, m, n, theta, o }
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.f, self.m, self.n, self.theta, self.o]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

impl From<[f64; 5]> for StateVector {
    fn from(a: [f64; 5]) -> Self {
        Self::from_array(a)
    }
}

/// A validated parameter set with the derived equation coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityModel {
    pub params: FlowParameters,
    pub ratios: MixtureRatios,
    /// `(rho_nf/rho_f) / (mu_nf/mu_f)`, multiplies the momentum bracket.
    momentum_coeff: f64,
    /// Multiplies `(m theta - f o)` in the energy equation.
    energy_coeff: f64,
}

impl SimilarityModel {
    pub fn new(params: FlowParameters, ratios: MixtureRatios) -> Result<Self> {
        params.validate()?;
        ratios.validate()?;
        let diffusivity = ratios.conductivity_ratio / ratios.heat_capacity_ratio;
        let energy_coeff = match params.energy_form {
            EnergyForm::Literal => {
                let gamma = diffusivity / params.prandtl + 4.0 / 3.0 * params.radiation_r;
                if !(gamma.is_finite() && gamma > 0.0) {
                    return Err(Error::DegenerateCoefficient(format!(
                        "energy diffusion coefficient must be positive, got {gamma}"
                    )));
                }
                1.0 / gamma
            }
            EnergyForm::Restated => {
                let c = params.prandtl / diffusivity + 0.75 * params.radiation_r;
                if !(c.is_finite() && c > 0.0) {
                    return Err(Error::DegenerateCoefficient(format!(
                        "energy coefficient must be positive, got {c}"
                    )));
                }
                c
            }
        };
        Ok(Self {
            params,
            ratios,
            momentum_coeff: ratios.density_ratio / ratios.viscosity_ratio,
            energy_coeff,
        })
    }

    pub fn momentum_coeff(&self) -> f64 {
        self.momentum_coeff
    }

    pub fn energy_coeff(&self) -> f64 {
        self.energy_coeff
    }

    /// Effective velocity-slip coefficient `A1 lambda`.
    pub fn slip(&self) -> f64 {
        self.ratios.slip_factor_a1 * self.params.velocity_slip
    }

    #[inline]
    pub fn rhs(&self, y: &[f64; 5]) -> [f64; 5] {
        let [f, m, n, theta, o] = *y;
        let p = &self.params;
        let momentum = 2.0 * m * m - f * n + p.porosity_k * m + p.forchheimer_fr * m * m + p.magnetic_m * m;
        [
            m,
            n,
            self.momentum_coeff * momentum,
            o,
            self.energy_coeff * (m * theta - f * o),
        ]
    }

    /// Analytic Jacobian `d rhs_i / d y_j`.
    #[inline]
    pub fn jacobian(&self, y: &[f64; 5]) -> [[f64; 5]; 5] {
        let [f, m, n, theta, o] = *y;
        let p = &self.params;
        let c = self.momentum_coeff;
        let k = self.energy_coeff;
        let dm = c * ((4.0 + 2.0 * p.forchheimer_fr) * m + p.porosity_k + p.magnetic_m);
        [
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [-c * n, dm, -c * f, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
            [-k * o, k * theta, 0.0, k * m, -k * f],
        ]
    }

    /// Residuals of the two-point boundary conditions; all vanish at a solution.
    pub fn boundary_residuals(&self, wall: &StateVector, far: &StateVector) -> [f64; 5] {
        [
            wall.f - self.params.suction_s,
            wall.m - 1.0 - self.slip() * wall.n,
            wall.theta - 1.0 - self.params.thermal_slip * wall.o,
            far.m,
            far.theta,
        ]
    }
}

/// Derivatives `(f', m', n', theta', o')` of the first-order system.
pub fn rhs_first_order(state: &StateVector, params: &FlowParameters, ratios: &MixtureRatios) -> Result<[f64; 5]> {
    let model = SimilarityModel::new(*params, *ratios)?;
    Ok(model.rhs(&state.to_array()))
}

pub fn boundary_residuals(
    wall_state: &StateVector,
    far_state: &StateVector,
    params: &FlowParameters,
    ratios: &MixtureRatios,
) -> Result<[f64; 5]> {
    let model = SimilarityModel::new(*params, *ratios)?;
    Ok(model.boundary_residuals(wall_state, far_state))
}

/// Dimensional description of a physical configuration, evaluated at a
/// station `x` along the sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalScenario {
    /// Reference stretching velocity U0 (m/s).
    pub u0: f64,
    /// Reference length L (m).
    pub length_l: f64,
    /// Base-fluid kinematic viscosity (m²/s).
    pub nu_f: f64,
    /// Permeability K1 (m²).
    pub permeability_k1: f64,
    /// Drag coefficient c_b.
    pub drag_cb: f64,
    /// Electrical conductivity sigma (S/m).
    pub electrical_conductivity: f64,
    /// Field strength B0 (T).
    pub b0: f64,
    /// Reference temperature excess T0 (K).
    pub t0: f64,
    /// Ambient temperature (K).
    pub t_inf: f64,
    /// Suction velocity scale V0 (m/s).
    pub v0: f64,
    /// Velocity slip scale N1.
    pub n1: f64,
    /// Thermal slip scale D1.
    pub d1: f64,
    /// Stefan–Boltzmann constant sigma* (W/(m²K⁴)).
    pub stefan_boltzmann: f64,
    /// Mean absorption coefficient K* (1/m).
    pub absorption_k: f64,
    /// Station x along the sheet (m).
    pub station_x: f64,
}

impl Default for DimensionalScenario {
    /// Unit scales, no field, no suction, no slip, x = 0.
    fn default() -> Self {
        Self {
            u0: 1.0,
            length_l: 1.0,
            nu_f: 1.0,
            permeability_k1: 1.0,
            drag_cb: 0.0,
            electrical_conductivity: 0.0,
            b0: 0.0,
            t0: 1.0,
            t_inf: 300.0,
            v0: 0.0,
            n1: 0.0,
            d1: 0.0,
            stefan_boltzmann: 5.670374419e-8,
            absorption_k: 1.0,
            station_x: 0.0,
        }
    }
}

impl DimensionalScenario {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("u0", self.u0),
            ("length_l", self.length_l),
            ("nu_f", self.nu_f),
            ("permeability_k1", self.permeability_k1),
            ("stefan_boltzmann", self.stefan_boltzmann),
            ("absorption_k", self.absorption_k),
            ("t_inf", self.t_inf),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("drag_cb", self.drag_cb),
            ("electrical_conductivity", self.electrical_conductivity),
            ("n1", self.n1),
            ("d1", self.d1),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(format!("{name} must be non-negative, got {v}")));
            }
        }
        for (name, v) in [
            ("b0", self.b0),
            ("t0", self.t0),
            ("v0", self.v0),
            ("station_x", self.station_x),
        ] {
            if !v.is_finite() {
                return Err(invalid(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Stretching velocity U_w = U0 e^{x/L}.
    pub fn wall_velocity(&self) -> f64 {
        self.u0 * (self.station_x / self.length_l).exp()
    }

    /// `sqrt(U0 nu_f / 2L)`, the normal-velocity scale at x = 0.
    pub fn normal_velocity_scale(&self) -> f64 {
        (self.u0 * self.nu_f / (2.0 * self.length_l)).sqrt()
    }
}

/// Map a dimensional scenario to the dimensionless groups at the scenario's
/// station x (local similarity: K and M carry an x dependence through U_w and B).
///
/// `base` supplies the absolute base-fluid properties needed for Pr, M and R.
pub fn nondimensionalize(
    scenario: &DimensionalScenario,
    base: &FluidProperties,
    ratios: &MixtureRatios,
    phi: f64,
) -> Result<FlowParameters> {
    scenario.validate()?;
    base.validate()?;
    ratios.validate()?;
    let s = scenario;
    let two_l = 2.0 * s.length_l;

    let u_w = s.wall_velocity();
    let nu_nf = s.nu_f * ratios.kinematic_viscosity_ratio();
    let field = s.b0 * (s.station_x / two_l).exp();
    let k_nf = ratios.conductivity_ratio * base.conductivity;

    let params = FlowParameters {
        phi,
        porosity_k: two_l * nu_nf / (s.permeability_k1 * u_w),
        forchheimer_fr: s.drag_cb / (2.0 * s.permeability_k1.sqrt()),
        magnetic_m: two_l * s.electrical_conductivity * field * field / (base.density * u_w),
        radiation_r: 4.0 * s.stefan_boltzmann * s.t_inf.powi(3) / (k_nf * s.absorption_k),
        prandtl: s.nu_f * base.heat_capacity() / base.conductivity,
        suction_s: s.v0 / s.normal_velocity_scale(),
        velocity_slip: s.n1 * s.normal_velocity_scale(),
        thermal_slip: s.d1 * (s.u0 / (two_l * s.nu_f)).sqrt(),
        energy_form: EnergyForm::Literal,
    };
    params.validate()?;
    Ok(params)
}
