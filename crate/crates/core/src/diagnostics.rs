//! Wall quantities and dimensional reconstruction.

use crate::error::{invalid, Result};
use crate::model::DimensionalScenario;
use crate::profile::SolutionProfile;
use crate::properties::{check_phi, MixtureRatios};

/// Reduced skin friction and Nusselt number, both positive for an attached,
/// cooling boundary layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallQuantities {
    /// `-(1 - phi)^-2.5 f''(0)`
    pub reduced_skin_friction: f64,
    /// `-(k_nf / k_f) theta'(0)`
    pub reduced_nusselt: f64,
    pub f_double_prime_0: f64,
    pub theta_prime_0: f64,
}

impl WallQuantities {
    pub fn from_wall_derivatives(
        f_double_prime_0: f64,
        theta_prime_0: f64,
        ratios: &MixtureRatios,
        phi: f64,
    ) -> Result<Self> {
        check_phi(phi)?;
        Ok(Self {
            reduced_skin_friction: -f_double_prime_0 / (1.0 - phi).powf(2.5),
            reduced_nusselt: -ratios.conductivity_ratio * theta_prime_0,
            f_double_prime_0,
            theta_prime_0,
        })
    }
}

pub fn wall_quantities(profile: &SolutionProfile, ratios: &MixtureRatios, phi: f64) -> Result<WallQuantities> {
    if !profile.converged {
        return Err(invalid("wall quantities need a converged profile"));
    }
    WallQuantities::from_wall_derivatives(profile.f_double_prime_0(), profile.theta_prime_0(), ratios, phi)
}

/// Dimensional fields across the boundary layer at one station.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionalField {
    pub station_x: f64,
    /// Wall-normal distance (m), one entry per profile node.
    pub y: Vec<f64>,
    /// Streamwise velocity (m/s).
    pub u: Vec<f64>,
    /// Wall-normal velocity (m/s).
    pub v: Vec<f64>,
    /// Temperature (K).
    pub temperature: Vec<f64>,
    /// Stream function (m²/s).
    pub psi: Vec<f64>,
    /// Stretching velocity U_w at the station.
    pub wall_velocity: f64,
    /// Prescribed wall temperature T_w at the station.
    pub wall_temperature: f64,
    /// `sqrt(x / 2L)`, relating the tabulated Nusselt number to `Re_x^-1/2 Nu_x`.
    pub nusselt_factor: f64,
}

struct Scales {
    eta_per_y: f64,
    velocity: f64,
    normal_velocity: f64,
    psi: f64,
    temperature: f64,
}

fn scales(s: &DimensionalScenario, x: f64) -> Scales {
    let l = s.length_l;
    let grow = (x / (2.0 * l)).exp();
    Scales {
        eta_per_y: (s.u0 / (2.0 * s.nu_f * l)).sqrt() * grow,
        velocity: s.u0 * (x / l).exp(),
        normal_velocity: s.normal_velocity_scale() * grow,
        psi: (2.0 * s.nu_f * l * s.u0).sqrt() * grow,
        temperature: s.t0 * grow,
    }
}

/// Undo the similarity transformation at `scenario.station_x`.
pub fn reconstruct_dimensional(profile: &SolutionProfile, scenario: &DimensionalScenario) -> Result<DimensionalField> {
    scenario.validate()?;
    if !profile.converged {
        return Err(invalid("reconstruction needs a converged profile"));
    }
    let x = scenario.station_x;
    let sc = scales(scenario, x);
    let eta = profile.eta();
    let st = &profile.states;
    Ok(DimensionalField {
        station_x: x,
        y: eta.iter().map(|e| e / sc.eta_per_y).collect(),
        u: st.iter().map(|s| sc.velocity * s.m).collect(),
        v: eta
            .iter()
            .zip(st)
            .map(|(e, s)| -sc.normal_velocity * (s.f + e * s.m))
            .collect(),
        temperature: st.iter().map(|s| scenario.t_inf + sc.temperature * s.theta).collect(),
        psi: st.iter().map(|s| sc.psi * s.f).collect(),
        wall_velocity: sc.velocity,
        wall_temperature: scenario.t_inf + sc.temperature,
        nusselt_factor: (x.max(0.0) / (2.0 * scenario.length_l)).sqrt(),
    })
}

/// Max-norm of `(du/dx + dv/dy) L / U_w` over interior nodes at the station,
/// from central differences of the reconstructed fields.
///
/// `dv/dy` uses neighbouring nodes; `du/dx` resamples the profile at
/// `x ± 1e-3 L` for the same physical `y`.
pub fn continuity_residual(profile: &SolutionProfile, scenario: &DimensionalScenario) -> Result<f64> {
    let field = reconstruct_dimensional(profile, scenario)?;
    let dx = 1e-3 * scenario.length_l;
    let x = scenario.station_x;
    let (ahead, behind) = (scales(scenario, x + dx), scales(scenario, x - dx));
    let eta_max = profile.mesh.eta_max();

    let n = field.y.len();
    let mut worst = 0.0f64;
    for j in 1..n - 1 {
        let y = field.y[j];
        let (ea, eb) = (y * ahead.eta_per_y, y * behind.eta_per_y);
        if ea > eta_max || eb > eta_max {
            continue;
        }
        let (Some(sa), Some(sb)) = (profile.sample(ea), profile.sample(eb)) else {
            continue;
        };
        let du_dx = (ahead.velocity * sa.m - behind.velocity * sb.m) / (2.0 * dx);
        let dv_dy = (field.v[j + 1] - field.v[j - 1]) / (field.y[j + 1] - field.y[j - 1]);
        worst = worst.max((du_dx + dv_dy).abs());
    }
    Ok(worst * scenario.length_l / field.wall_velocity)
}
