//! Partial derivatives of ζ, ln σ and ℘ with respect to the periods.
//!
//! All formulas combine ℘, ℘′, ζ, the quasi-periods η₁, η₂ and `g₂` of the
//! lattice at fixed `z`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::weierstrass::{EvalOptions, LatticeInvariants};
use crate::C64;

/// Which period to differentiate with respect to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Period {
    One,
    Two,
}

impl TryFrom<u8> for Period {
    type Error = Error;

    fn try_from(which: u8) -> Result<Self> {
        match which {
            1 => Ok(Period::One),
            2 => Ok(Period::Two),
            _ => Err(Error::InvalidArgument(format!("period index must be 1 or 2, got {which}"))),
        }
    }
}

/// `(sign, ω_other, η_other)`: the ω₁ derivative uses `+1/2πi` with the
/// second period's data, the ω₂ derivative `−1/2πi` with the first's.
fn partner(inv: &LatticeInvariants, which: Period) -> (f64, C64, C64) {
    match which {
        Period::One => (1.0, inv.lattice.omega2(), inv.eta2),
        Period::Two => (-1.0, inv.lattice.omega1(), inv.eta1),
    }
}

fn two_pi_i() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

/// `∂ζ(z)/∂ω_k` at fixed `z` and fixed other period.
pub fn dzeta_domega(z: C64, inv: &LatticeInvariants, which: Period, opt: &EvalOptions) -> Result<C64> {
    let (p, dp, zeta) = inv.wp_wpp_zeta(z, opt)?;
    let (sign, w, eta) = partner(inv, which);
    let bracket = 0.5 * w * dp + (w * zeta - eta * z) * p + eta * zeta - w * inv.g2 / 12.0 * z;
    Ok(sign * bracket / two_pi_i())
}

/// `∂ ln σ(z)/∂ω_k`.
pub fn dlnsigma_domega(z: C64, inv: &LatticeInvariants, which: Period, opt: &EvalOptions) -> Result<C64> {
    let (p, _, zeta) = inv.wp_wpp_zeta(z, opt)?;
    let (sign, w, eta) = partner(inv, which);
    let bracket = 0.5 * w * (p - zeta * zeta) + eta * (z * zeta - 1.0) - w * inv.g2 / 24.0 * z * z;
    Ok(sign * bracket / two_pi_i())
}

/// `∂℘(z)/∂ω_k`.
pub fn dwp_domega(z: C64, inv: &LatticeInvariants, which: Period, opt: &EvalOptions) -> Result<C64> {
    let (p, dp, zeta) = inv.wp_wpp_zeta(z, opt)?;
    let (sign, w, eta) = partner(inv, which);
    let bracket = 2.0 * w * p * p - 2.0 * eta * p + (w * zeta - eta * z) * dp - w * inv.g2 / 3.0;
    Ok(-sign * bracket / two_pi_i())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::weierstrass::invariants;

    #[test]
    fn euler_relations_on_skew_lattice() {
        let lat = Lattice::new(C64::new(1.1, 0.3), C64::new(-0.2, 1.4)).unwrap();
        let inv = invariants(&lat, 1e-13).unwrap();
        let opt = EvalOptions::default();
        let (w1, w2) = (lat.omega1(), lat.omega2());
        let z = C64::new(0.31, -0.22);
        let (p, dp, zeta) = inv.wp_wpp_zeta(z, &opt).unwrap();

        let dz1 = dzeta_domega(z, &inv, Period::One, &opt).unwrap();
        let dz2 = dzeta_domega(z, &inv, Period::Two, &opt).unwrap();
        assert!((-z * p + w1 * dz1 + w2 * dz2 + zeta).norm() < 1e-9);

        let ds1 = dlnsigma_domega(z, &inv, Period::One, &opt).unwrap();
        let ds2 = dlnsigma_domega(z, &inv, Period::Two, &opt).unwrap();
        assert!((z * zeta + w1 * ds1 + w2 * ds2 - 1.0).norm() < 1e-9);

        let dp1 = dwp_domega(z, &inv, Period::One, &opt).unwrap();
        let dp2 = dwp_domega(z, &inv, Period::Two, &opt).unwrap();
        assert!((z * dp + w1 * dp1 + w2 * dp2 + 2.0 * p).norm() < 1e-9);
    }

    #[test]
    fn period_index_parsing() {
        assert_eq!(Period::try_from(2).unwrap(), Period::Two);
        assert!(Period::try_from(3).is_err());
    }
}
