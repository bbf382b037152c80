//! The three-sheeted genus-one surface of `∛(z³ − 1)`: triangle
//! normalization, the σ-quotient uniformizer on the hexagonal lattice, the
//! harmonic function `u`, its critical points, and the sheet partition.

mod analysis;
mod marching;
mod sheets;
mod triangle;
mod uniformizer;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::weierstrass::{EvalOptions, LatticeInvariants};
use crate::C64;

pub use analysis::{critical_points, g_value, is_real_mod_lattice, psi, psi_root, u_value};
pub use marching::{marching_squares, Polyline};
pub use sheets::{
    classify_sheets, sheet_components, COMPONENT_MARGIN, sheet_label, speckle_count, Contour, GridSpec, SheetField,
    PAIRS,
};
pub use triangle::{normalize_triangle, TriangleConfig};
pub use uniformizer::{
    alpha_from_triangle, schwarz_christoffel_inverse, sc_constant, uniformizer_pi, Z1,
};

/// Accuracy requested from the hexagonal-lattice σ, ζ, ℘ evaluations.
pub const HEX_TOL: f64 = 1e-14;

/// `e^{2πi/3}`.
pub fn rot() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Invariants of the hexagonal lattice `(√3, √3e^{iπ/3})`.
pub fn hexagonal_invariants() -> Result<LatticeInvariants> {
    let s = 3f64.sqrt();
    let lat = Lattice::new(C64::new(s, 0.0), C64::from_polar(s, PI / 3.0))?;
    LatticeInvariants::new(&lat, HEX_TOL)
}

/// The point `α` together with the hexagonal-lattice invariants.
#[derive(Clone, Debug)]
pub struct NuttallContext {
    pub alpha: C64,
    pub inv: LatticeInvariants,
}

impl NuttallContext {
    pub fn new(alpha: C64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be finite, got {alpha}")));
        }
        Ok(NuttallContext {
            alpha,
            inv: hexagonal_invariants()?,
        })
    }

    /// Real `α`, the symmetric case.
    pub fn real(alpha: f64) -> Result<Self> {
        Self::new(C64::new(alpha, 0.0))
    }

    /// Context whose `α` solves `π(α) = z₀` for the given triangle.
    pub fn from_triangle(t: &TriangleConfig) -> Result<Self> {
        let mut ctx = Self::new(C64::new(0.0, 0.0))?;
        ctx.alpha = alpha_from_triangle(t, &ctx)?;
        Ok(ctx)
    }

    /// `η₁`, equal to `2π/3` on this lattice.
    pub fn eta1(&self) -> f64 {
        self.inv.eta1.re
    }

    pub(crate) fn opt(&self) -> EvalOptions {
        EvalOptions::with_tol(HEX_TOL)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.inv.lattice
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta1_is_two_pi_over_three() {
        let ctx = NuttallContext::real(0.5).unwrap();
        assert!((ctx.eta1() - 2.0 * PI / 3.0).abs() < 1e-10);
        assert!(ctx.inv.eta1.im.abs() < 1e-10);
        let eta2 = ctx.inv.eta2;
        assert!((eta2 - C64::from_polar(2.0 * PI / 3.0, -PI / 3.0)).norm() < 1e-10);
    }
}
