//! Keller-box solver.
//!
//! Each interval `[eta_{j-1}, eta_j]` is closed by the centred box relations
//!
//! ```text
//! y_j - y_{j-1} - h_j g((y_j + y_{j-1}) / 2) = 0
//! ```
//!
//! for the first-order system `y' = g(y)`, `y = (f, m, n, theta, o)`. Together
//! with three wall and two far-field conditions this is `5(J+1)` equations in
//! `5(J+1)` unknowns, linearized by Newton's method and solved as a
//! block-tridiagonal system.
//!
//! Block-row layout (rows within a block in brackets):
//!
//! * row 0: wall conditions [0..3], m- and theta-chain relations of interval 1 [3..5]
//! * row j, 0 < j < J: f-chain, momentum and energy relations of interval j [0..3],
//!   m- and theta-chain relations of interval j + 1 [3..5]
//! * row J: f-chain, momentum and energy relations of interval J [0..3],
//!   far-field conditions on m and theta [3..5]

use crate::blocklinalg::{factorize, BlockTridiagonalSystem, Vec5, ZERO_BLOCK};
use crate::error::{Error, Result};
use crate::model::{FlowParameters, SimilarityModel, StateVector};
use crate::properties::MixtureRatios;

pub use crate::profile::{Mesh, SolutionProfile};

/// Component order of the early (m-chain, theta-chain) and late (f-chain,
/// momentum, energy) interval relations.
const EARLY: [usize; 2] = [1, 3];
const LATE: [usize; 3] = [0, 2, 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Convergence threshold on the max-norm of the Newton correction.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Fraction of the Newton step tried first, in (0, 1].
    pub damping: f64,
    /// Step halvings allowed when the residual grows.
    pub max_halvings: usize,
    pub eta_max: f64,
    /// Number of uniform intervals J.
    pub intervals: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_iterations: 50,
            damping: 1.0,
            max_halvings: 8,
            eta_max: 10.0,
            intervals: 1000,
        }
    }
}

impl SolverConfig {
    /// Uniform spacing `h`, keeping `eta_max`.
    pub fn with_spacing(mut self, h: f64) -> Self {
        self.intervals = (self.eta_max / h).round().max(1.0) as usize;
        self
    }

    pub fn spacing(&self) -> f64 {
        self.eta_max / self.intervals as f64
    }

    pub fn mesh(&self) -> Result<Mesh> {
        Mesh::uniform(self.eta_max, self.intervals)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(crate::error::invalid("tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(crate::error::invalid("max_iterations must be at least 1"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(crate::error::invalid("damping must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Exponentially decaying starting profile that satisfies the three wall
/// conditions exactly.
pub fn initial_guess(mesh: &Mesh, params: &FlowParameters, ratios: &MixtureRatios) -> SolutionProfile {
    let c_m = 1.0 / (1.0 + ratios.slip_factor_a1 * params.velocity_slip);
    let c_t = 1.0 / (1.0 + params.thermal_slip);
    let s = params.suction_s;
    let states = mesh
        .nodes()
        .iter()
        .map(|&eta| {
            let e = (-eta).exp();
            StateVector::new(s + c_m * (1.0 - e), c_m * e, -c_m * e, c_t * e, -c_t * e)
        })
        .collect();
    SolutionProfile {
        mesh: mesh.clone(),
        states,
        converged: false,
        iterations: 0,
        final_correction_norm: f64::INFINITY,
        correction_history: Vec::new(),
    }
}

#[inline]
fn midpoint(a: &[f64; 5], b: &[f64; 5]) -> [f64; 5] {
    std::array::from_fn(|i| 0.5 * (a[i] + b[i]))
}

/// Discrete residuals in block-row order. Vanish at a discrete solution.
pub fn discrete_residuals(mesh: &Mesh, states: &[StateVector], model: &SimilarityModel) -> Vec<Vec5> {
    let jn = mesh.intervals();
    let ys: Vec<[f64; 5]> = states.iter().map(|s| s.to_array()).collect();
    let mut res = vec![[0.0; 5]; jn + 1];

    let wall = &states[0];
    let far = &states[jn];
    let bc = model.boundary_residuals(wall, far);
    res[0][..3].copy_from_slice(&bc[..3]);
    res[jn][3] = bc[3];
    res[jn][4] = bc[4];

    for j in 1..=jn {
        let h = mesh.spacing(j);
        let (a, b) = (&ys[j - 1], &ys[j]);
        let g = model.rhs(&midpoint(a, b));
        let r: [f64; 5] = std::array::from_fn(|k| b[k] - a[k] - h * g[k]);
        for (row, &k) in LATE.iter().enumerate() {
            res[j][row] = r[k];
        }
        for (row, &k) in EARLY.iter().enumerate() {
            res[j - 1][3 + row] = r[k];
        }
    }
    res
}

fn max_norm(v: &[Vec5]) -> f64 {
    v.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton system `A delta = -F` at the given states.
fn assemble(mesh: &Mesh, states: &[StateVector], model: &SimilarityModel) -> BlockTridiagonalSystem {
    let jn = mesh.intervals();
    let ys: Vec<[f64; 5]> = states.iter().map(|s| s.to_array()).collect();
    let mut sys = BlockTridiagonalSystem::zeros(jn + 1);

    let d0 = &mut sys.diag[0];
    d0[0][0] = 1.0;
    d0[1][1] = 1.0;
    d0[1][2] = -model.slip();
    d0[2][3] = 1.0;
    d0[2][4] = -model.params.thermal_slip;
    let dj = &mut sys.diag[jn];
    dj[3][1] = 1.0;
    dj[4][3] = 1.0;

    for j in 1..=jn {
        let h = mesh.spacing(j);
        let jac = model.jacobian(&midpoint(&ys[j - 1], &ys[j]));
        // d r_k / d y_j and d r_k / d y_{j-1}
        let mut right = ZERO_BLOCK;
        let mut left = ZERO_BLOCK;
        for k in 0..5 {
            for c in 0..5 {
                let half = 0.5 * h * jac[k][c];
                let id = if k == c { 1.0 } else { 0.0 };
                right[k][c] = id - half;
                left[k][c] = -id - half;
            }
        }
        // Late relations of interval j live in block row j.
        for (row, &k) in LATE.iter().enumerate() {
            sys.diag[j][row] = right[k];
            sys.sub[j - 1][row] = left[k];
        }
        // Early relations of interval j live in block row j - 1.
        for (row, &k) in EARLY.iter().enumerate() {
            sys.diag[j - 1][3 + row] = left[k];
            sys.sup[j - 1][3 + row] = right[k];
        }
    }

    let res = discrete_residuals(mesh, states, model);
    sys.rhs = res.iter().map(|r| r.map(|v| -v)).collect();
    sys
}

/// Linearized correction system for `profile`.
pub fn assemble_newton(
    profile: &SolutionProfile,
    params: &FlowParameters,
    ratios: &MixtureRatios,
) -> Result<BlockTridiagonalSystem> {
    let model = SimilarityModel::new(*params, *ratios)?;
    Ok(assemble(&profile.mesh, &profile.states, &model))
}

/// Solve from the default exponential starting profile.
pub fn solve(params: &FlowParameters, ratios: &MixtureRatios, config: &SolverConfig) -> Result<SolutionProfile> {
    config.validate()?;
    let mesh = config.mesh()?;
    let start = initial_guess(&mesh, params, ratios);
    solve_from(&start, params, ratios, config)
}

/// Damped Newton iteration starting from `initial` (its mesh is reused).
pub fn solve_from(
    initial: &SolutionProfile,
    params: &FlowParameters,
    ratios: &MixtureRatios,
    config: &SolverConfig,
) -> Result<SolutionProfile> {
    config.validate()?;
    let model = SimilarityModel::new(*params, *ratios)?;
    let mesh = initial.mesh.clone();
    if initial.states.len() != mesh.intervals() + 1 || !initial.states.iter().all(StateVector::is_finite) {
        return Err(crate::error::invalid(
            "initial profile does not match its mesh or is not finite",
        ));
    }
    let mut states = initial.states.clone();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut correction = f64::INFINITY;

    for iteration in 1..=config.max_iterations {
        iterations = iteration;
        let system = assemble(&mesh, &states, &model);
        let residual = max_norm(&system.rhs);
        let delta = factorize(&system)
            .and_then(|f| f.solve(&system.rhs))
            .map_err(|e| match e {
                Error::SingularBlock { index } => Error::SolverFailure {
                    iteration,
                    block: index,
                },
                other => other,
            })?;
        correction = max_norm(&delta);
        history.push(correction);
        if !correction.is_finite() {
            break;
        }

        let mut step = config.damping;
        let mut trial = apply_step(&states, &delta, step);
        for _ in 0..config.max_halvings {
            let ok = trial.iter().all(StateVector::is_finite) && {
                let r = max_norm(&discrete_residuals(&mesh, &trial, &model));
                r <= residual * (1.0 + 1e-8) + 1e-14
            };
            if ok {
                break;
            }
            step *= 0.5;
            trial = apply_step(&states, &delta, step);
        }
        if !trial.iter().all(StateVector::is_finite) {
            break;
        }
        states = trial;

        if correction < config.tolerance {
            converged = true;
            break;
        }
    }

    let profile = SolutionProfile {
        mesh,
        states,
        converged,
        iterations,
        final_correction_norm: correction,
        correction_history: history,
    };
    if converged {
        let (m, t) = profile.far_field_magnitude(0.1);
        if m > 1e-3 || t > 1e-3 {
            log::warn!(
                "far field not decayed over the outer 10% of the mesh (|f'| <= {m:.3e}, |theta| <= {t:.3e}); consider a larger eta_max"
            );
        }
    } else {
        log::warn!(
            "Keller-box iteration did not converge after {iterations} iterations (last correction {correction:.3e})"
        );
    }
    Ok(profile)
}

fn apply_step(states: &[StateVector], delta: &[Vec5], step: f64) -> Vec<StateVector> {
    states
        .iter()
        .zip(delta)
        .map(|(s, d)| {
            let y = s.to_array();
            StateVector::from_array(std::array::from_fn(|i| y[i] + step * d[i]))
        })
        .collect()
}
