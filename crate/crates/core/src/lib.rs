//! Similarity solutions for MHD flow of a carbon-nanotube/kerosene nanofluid
//! over an exponentially stretching sheet in a Darcy–Forchheimer porous
//! medium, with radiation, suction and velocity/thermal slip.
//!
//! Two independent solvers share one model:
//!
//! * [`kellerbox`]: centred box finite differences, Newton linearization and a
//!   5×5 block-tridiagonal LU ([`blocklinalg`]).
//! * [`shooting`]: adaptive Dormand–Prince integration with Newton iteration
//!   on the unknown wall derivatives.
//!
//! [`diagnostics`] turns a converged profile into skin friction and Nusselt
//! numbers and reconstructs dimensional fields.

pub mod blocklinalg;
pub mod diagnostics;
mod error;
pub mod kellerbox;
pub mod model;
pub mod ode;
pub mod profile;
pub mod properties;
pub mod shooting;

pub use diagnostics::WallQuantities;
pub use error::{Error, Result};
pub use kellerbox::SolverConfig;
pub use model::{nondimensionalize, DimensionalScenario, EnergyForm, FlowParameters, SimilarityModel, StateVector};
pub use profile::{Mesh, SolutionProfile};
pub use properties::{builtin_fluid, mixture_ratios, BuiltinFluid, FluidProperties, MixtureRatios};
pub use shooting::{ShootingConfig, ShootingUnknowns};
