//! Similarity-variable mesh and the nodal solution shared by both solvers.

use crate::error::{invalid, Result};
use crate::model::{SimilarityModel, StateVector};

/// Strictly increasing `eta` nodes starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
}

impl Mesh {
    pub const MIN_INTERVALS: usize = 8;

    pub fn uniform(eta_max: f64, intervals: usize) -> Result<Self> {
        if !(eta_max.is_finite() && eta_max > 0.0) {
            return Err(invalid(format!("eta_max must be positive, got {eta_max}")));
        }
        if intervals < Self::MIN_INTERVALS {
            return Err(invalid(format!(
                "mesh needs at least {} intervals, got {intervals}",
                Self::MIN_INTERVALS
            )));
        }
        let h = eta_max / intervals as f64;
        let mut nodes: Vec<f64> = (0..=intervals).map(|j| j as f64 * h).collect();
        nodes[intervals] = eta_max;
        Ok(Self { nodes })
    }

    /// Uniform mesh whose spacing is as close to `h` as divides `eta_max`.
    pub fn with_spacing(eta_max: f64, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(invalid(format!("mesh spacing must be positive, got {h}")));
        }
        Self::uniform(eta_max, (eta_max / h).round().max(1.0) as usize)
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < Self::MIN_INTERVALS + 1 {
            return Err(invalid(format!(
                "mesh needs at least {} intervals, got {}",
                Self::MIN_INTERVALS,
                nodes.len().saturating_sub(1)
            )));
        }
        if nodes[0] != 0.0 {
            return Err(invalid("first mesh node must be eta = 0"));
        }
        if !nodes.iter().all(|v| v.is_finite()) || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("mesh nodes must be finite and strictly increasing"));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of intervals J (there are J + 1 nodes).
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn eta_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// `h_j = eta_j - eta_{j-1}` for `j` in `1..=J`.
    pub fn spacing(&self, j: usize) -> f64 {
        self.nodes[j] - self.nodes[j - 1]
    }

    pub fn max_spacing(&self) -> f64 {
        (1..self.nodes.len()).map(|j| self.spacing(j)).fold(0.0, f64::max)
    }
}

/// Nodal values of `(f, f', f'', theta, theta')` plus solver bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionProfile {
    pub mesh: Mesh,
    pub states: Vec<StateVector>,
    pub converged: bool,
    pub iterations: usize,
    /// Max-norm of the last Newton correction (Keller box) or the last
    /// terminal residual (shooting).
    pub final_correction_norm: f64,
    /// Per-iteration history of the quantity above.
    pub correction_history: Vec<f64>,
}

impl SolutionProfile {
    pub fn wall(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn far(&self) -> &StateVector {
        &self.states[self.states.len() - 1]
    }

    pub fn f_double_prime_0(&self) -> f64 {
        self.wall().n
    }

    pub fn theta_prime_0(&self) -> f64 {
        self.wall().o
    }

    pub fn eta(&self) -> &[f64] {
        self.mesh.nodes()
    }

    pub fn boundary_residuals(&self, model: &SimilarityModel) -> [f64; 5] {
        model.boundary_residuals(self.wall(), self.far())
    }

    pub fn max_boundary_residual(&self, model: &SimilarityModel) -> f64 {
        self.boundary_residuals(model).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|f'|` and `|theta|` over the outer `fraction` of the mesh.
    pub fn far_field_magnitude(&self, fraction: f64) -> (f64, f64) {
        let start = self.mesh.eta_max() * (1.0 - fraction);
        self.mesh
            .nodes()
            .iter()
            .zip(&self.states)
            .filter(|(eta, _)| **eta >= start)
            .fold((0.0f64, 0.0f64), |(m, t), (_, s)| {
                (m.max(s.m.abs()), t.max(s.theta.abs()))
            })
    }

    /// Evaluate the profile at an arbitrary `eta` in `[0, eta_max]`.
    ///
    /// `f`, `f'` and `theta` use cubic Hermite interpolation with their nodal
    /// derivatives; `f''` and `theta'` are interpolated linearly.
    pub fn sample(&self, eta: f64) -> Option<StateVector> {
        let nodes = self.mesh.nodes();
        if !(eta >= 0.0 && eta <= self.mesh.eta_max()) {
            return None;
        }
        let j = match nodes.binary_search_by(|v| v.total_cmp(&eta)) {
            Ok(j) => return Some(self.states[j]),
            Err(j) => j,
        };
        let (a, b) = (&self.states[j - 1], &self.states[j]);
        let h = nodes[j] - nodes[j - 1];
        let t = (eta - nodes[j - 1]) / h;
        let hermite = |p0: f64, d0: f64, p1: f64, d1: f64| {
            let t2 = t * t;
            let t3 = t2 * t;
            (2.0 * t3 - 3.0 * t2 + 1.0) * p0
                + (t3 - 2.0 * t2 + t) * h * d0
                + (-2.0 * t3 + 3.0 * t2) * p1
                + (t3 - t2) * h * d1
        };
        let lerp = |p0: f64, p1: f64| p0 + t * (p1 - p0);
        Some(StateVector {
            f: hermite(a.f, a.m, b.f, b.m),
            m: hermite(a.m, a.n, b.m, b.n),
            n: lerp(a.n, b.n),
            theta: hermite(a.theta, a.o, b.theta, b.o),
            o: lerp(a.o, b.o),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mesh_structure() {
        let m = Mesh::uniform(10.0, 1000).unwrap();
        assert_eq!(m.nodes().len(), 1001);
        assert_eq!(m.nodes()[0], 0.0);
        assert_eq!(m.eta_max(), 10.0);
        assert!((m.spacing(500) - 0.01).abs() < 1e-12);
    }

    #[test]
    fn too_few_intervals() {
        assert!(Mesh::uniform(10.0, 7).is_err());
        assert!(Mesh::uniform(10.0, 8).is_ok());
        assert!(Mesh::from_nodes(vec![0.0, 1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn bad_nodes() {
        let mut nodes: Vec<f64> = (0..10).map(|i| i as f64).collect();
        nodes[4] = nodes[3];
        assert!(Mesh::from_nodes(nodes).is_err());
        let nodes: Vec<f64> = (1..11).map(|i| i as f64).collect();
        assert!(Mesh::from_nodes(nodes).is_err());
    }

    #[test]
    fn hermite_sampling_is_exact_for_cubics() {
        let mesh = Mesh::uniform(2.0, 8).unwrap();
        let f = |x: f64| x * x * x - 2.0 * x;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let states = mesh
            .nodes()
            .iter()
            .map(|&x| StateVector::new(f(x), df(x), 6.0 * x, 0.0, 0.0))
            .collect();
        let p = SolutionProfile {
            mesh,
            states,
            converged: true,
            iterations: 0,
            final_correction_norm: 0.0,
            correction_history: vec![],
        };
        for x in [0.0, 0.13, 0.77, 1.5, 1.99, 2.0] {
            let s = p.sample(x).unwrap();
            assert!((s.f - f(x)).abs() < 1e-13);
        }
        assert!(p.sample(2.5).is_none());
        assert!(p.sample(-0.1).is_none());
    }
}
