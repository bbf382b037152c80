//! The uniformizer `π` of the surface `w³ = z³ − 1` by the hexagonal torus,
//! and the Schwarz–Christoffel map of the unit disk onto the triangle
//! `0, e^{−iπ/6}, e^{iπ/6}` that inverts it there.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use super::{rot, NuttallContext, TriangleConfig};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_segment, segment_distance};
use crate::C64;

/// `√3/3`, the center of the fundamental triangle.
pub const Z1: f64 = 0.577_350_269_189_625_8;

/// Distance to a cube root of unity below which the integration path is refused.
const ROOT_CLEARANCE: f64 = 1e-6;

const SC_QUAD_TOL: f64 = 1e-13;
const NEWTON_ITERS: usize = 60;

fn z1_rotations() -> [C64; 3] {
    let z1 = C64::new(Z1, 0.0);
    [z1, z1 * rot(), z1 * rot().conj()]
}

/// `π(z) = −Π σ(z − z₁e^{2πik/3}) / Π σ(z + z₁e^{2πik/3})`.
pub fn uniformizer_pi(z: C64, ctx: &NuttallContext) -> Result<C64> {
    let lat = ctx.lattice();
    let eps = 1e-12 * lat.scale();
    let opt = ctx.opt();
    let zs = z1_rotations();
    if zs.iter().any(|r| lat.distance_to_lattice(z + r) < eps) {
        return Err(Error::PoleHit(format!("uniformizer pole at {z}")));
    }
    if zs.iter().any(|r| lat.distance_to_lattice(z - r) < eps) {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut log = C64::new(0.0, 0.0);
    for r in zs {
        log += ctx.inv.log_sigma(z - r, &opt)? - ctx.inv.log_sigma(z + r, &opt)?;
    }
    Ok(-log.exp())
}

/// Logarithmic derivative `π′/π`.
fn pi_log_derivative(z: C64, ctx: &NuttallContext) -> Result<C64> {
    let opt = ctx.opt();
    let mut acc = C64::new(0.0, 0.0);
    for r in z1_rotations() {
        acc += ctx.inv.zeta(z - r, &opt)? - ctx.inv.zeta(z + r, &opt)?;
    }
    Ok(acc)
}

/// `C₁ = −2π/Γ(1/3)³`.
pub fn sc_constant() -> f64 {
    -2.0 * PI / gamma(1.0 / 3.0).powi(3)
}

/// `z = z₁ + C₁ ∫₀^w (1 − s³)^{−2/3} ds` along the segment `[0, w]`, for `|w| ≤ 1`.
///
/// The integrand uses the principal power, which is continuous on the closed
/// disk away from the cube roots of unity. The substitution `s = w(1 − v³)`
/// removes the endpoint singularity when `w` approaches a root.
pub fn schwarz_christoffel_inverse(w: C64, _ctx: &NuttallContext) -> Result<C64> {
    if !(w.re.is_finite() && w.im.is_finite()) || w.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "Schwarz-Christoffel argument {w} must lie in the closed unit disk"
        )));
    }
    let zero = C64::new(0.0, 0.0);
    for k in 0..3 {
        let root = C64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
        if segment_distance(root, zero, w) < ROOT_CLEARANCE {
            return Err(Error::BranchPathCrossesSingularity(format!("{w}")));
        }
    }
    if w == zero {
        return Ok(C64::new(Z1, 0.0));
    }
    let w3 = w * w * w;
    let mut f = |v: C64| -> Result<C64> {
        let v = v.re;
        let t = 1.0 - v * v * v;
        let one_minus = (1.0 - w3) + w3 * (v * v * v * (1.0 + t + t * t));
        Ok(3.0 * v * v * one_minus.powf(-2.0 / 3.0))
    };
    let integral = integrate_segment(&mut f, zero, C64::new(1.0, 0.0), SC_QUAD_TOL)?;
    Ok(C64::new(Z1, 0.0) + sc_constant() * w * integral)
}

/// Solves `π(α) = z₀` by Newton's method seeded from the Schwarz–Christoffel
/// inverse of `z₀`.
pub fn alpha_from_triangle(t: &TriangleConfig, ctx: &NuttallContext) -> Result<C64> {
    let target = t.z0;
    let mut z = schwarz_christoffel_inverse(target, ctx)?;
    for _ in 0..NEWTON_ITERS {
        let p = uniformizer_pi(z, ctx)?;
        if (p - target).norm() < 1e-15 {
            return Ok(z);
        }
        let dp = p * pi_log_derivative(z, ctx)?;
        if dp.norm() == 0.0 {
            break;
        }
        let step = (p - target) / dp;
        z -= step;
        if step.norm() < 1e-14 {
            return Ok(z);
        }
    }
    let residual = (uniformizer_pi(z, ctx)? - target).norm();
    if residual < 1e-10 {
        Ok(z)
    } else {
        Err(Error::NoConvergence(format!(
            "Newton for pi(alpha) = {target} stalled at residual {residual:e}"
        )))
    }
}
