//! Weierstrass elliptic functions on arbitrary lattices, critical-point flows
//! for one-parameter families of rational and elliptic functions, and the
//! Nuttall sheet partition of the genus-one surface of `∛(z³ − 1)`.

pub mod divisor;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod lattice;
pub mod nuttall;
pub mod period_derivs;
pub mod quadrature;
pub mod rational;
pub mod torus;
pub mod weierstrass;

pub use num_complex::Complex64;

/// Complex double used throughout the crate.
pub type C64 = num_complex::Complex64;

pub use error::{Error, Result};
pub use lattice::{make_lattice, CellPoint, Lattice};
pub use weierstrass::{invariants, EvalOptions, LatticeInvariants};
