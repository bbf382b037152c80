//! Elliptic functions with a prescribed divisor, built as σ-quotients.

use crate::error::{Error, Result};
use crate::weierstrass::{EvalOptions, LatticeInvariants};
use crate::C64;

/// Evaluator for `Π σ(z − a_k) / Π σ(z − b*_k)`, where the last pole is
/// shifted by the lattice vector `Σ(b_k − a_k)` so that the quotient is
/// doubly periodic. The overall constant is left to the caller.
#[derive(Clone, Debug)]
pub struct DivisorFunction {
    inv: LatticeInvariants,
    zeros: Vec<C64>,
    poles: Vec<C64>,
    opt: EvalOptions,
    /// The lattice vector subtracted from the last pole.
    pub shift: C64,
}

/// Builds the σ-quotient for a principal divisor.
pub fn elliptic_from_divisor(
    zeros: &[C64],
    poles: &[C64],
    inv: &LatticeInvariants,
    opt: &EvalOptions,
) -> Result<DivisorFunction> {
    if zeros.len() != poles.len() || zeros.is_empty() {
        return Err(Error::DivisorMismatch {
            zeros: zeros.len(),
            poles: poles.len(),
        });
    }
    let omega: C64 = poles.iter().sum::<C64>() - zeros.iter().sum::<C64>();
    if inv.lattice.distance_to_lattice(omega) > opt.tol.max(1e-12) * inv.lattice.scale() {
        return Err(Error::NotPrincipal(format!("{omega}")));
    }
    let (m1, m2) = inv.lattice.nearest_point(omega);
    let shift = inv.lattice.point(m1, m2);
    let mut poles = poles.to_vec();
    *poles.last_mut().expect("nonempty") -= shift;
    Ok(DivisorFunction {
        inv: inv.clone(),
        zeros: zeros.to_vec(),
        poles,
        opt: *opt,
        shift,
    })
}

impl DivisorFunction {
    /// Value at `z`; `PoleAtLatticePoint` at a pole, zero at a zero.
    pub fn eval(&self, z: C64) -> Result<C64> {
        let mut log = C64::new(0.0, 0.0);
        for &a in &self.zeros {
            match self.inv.log_sigma(z - a, &self.opt) {
                Ok(l) => log += l,
                Err(Error::PoleAtLatticePoint(_)) => return Ok(C64::new(0.0, 0.0)),
                Err(e) => return Err(e),
            }
        }
        for &b in &self.poles {
            log -= self.inv.log_sigma(z - b, &self.opt)?;
        }
        Ok(log.exp())
    }

    /// The poles after the periodicity correction.
    pub fn corrected_poles(&self) -> &[C64] {
        &self.poles
    }
}
