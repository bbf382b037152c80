//! Jets, the adaptive integrator and target paths shared by the family solvers.

pub mod integrate;
pub mod jet;
pub mod path;

pub use integrate::{integrate, integrate_fixed, integrate_with_hook, IntegratorConfig, Sample, Trajectory};
pub use jet::{jet_deriv, jet_div, jet_from_linear, jet_mul, jet_pow_int, Jet};
pub use path::TargetPath;
