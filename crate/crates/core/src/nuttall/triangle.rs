//! Möbius normalization of a branch triple to the cube roots of unity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Relative cross product below which three points count as collinear.
const COLLINEAR_EPS: f64 = 1e-12;

/// A branch triple relabeled so that `a₁, a₃, a₂` run counterclockwise, with
/// the Möbius map `T(z) = (m₀z + m₁)/(m₂z + m₃)` sending `a₁ ↦ 1`,
/// `a₂ ↦ e^{2πi/3}`, `a₃ ↦ e^{−2πi/3}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleConfig {
    pub a1: C64,
    pub a2: C64,
    pub a3: C64,
    /// Anharmonic ratio `(a₃ − a₂)/(a₃ − a₁)`.
    pub gamma: C64,
    /// `T(∞)`, inside the unit disk.
    pub z0: C64,
    pub mobius: [C64; 4],
}

impl TriangleConfig {
    /// Applies `T`.
    pub fn map(&self, z: C64) -> C64 {
        let [a, b, c, d] = self.mobius;
        (a * z + b) / (c * z + d)
    }

    /// `T(∞) = m₀/m₂`, computed from the matrix rather than the ratio formula.
    pub fn image_of_infinity(&self) -> C64 {
        self.mobius[0] / self.mobius[2]
    }
}

/// Matrix of the map sending `p, q, r` to `0, 1, ∞`.
fn to_standard(p: C64, q: C64, r: C64) -> [C64; 4] {
    [q - r, -p * (q - r), q - p, -r * (q - p)]
}

fn inverse(m: [C64; 4]) -> [C64; 4] {
    [m[3], -m[1], -m[2], m[0]]
}

fn compose(x: [C64; 4], y: [C64; 4]) -> [C64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// Normalizes `a₁, a₂, a₃` (any order). When the input runs the wrong way
/// round, `a₂` and `a₃` are swapped.
pub fn normalize_triangle(a1: C64, a2: C64, a3: C64) -> Result<TriangleConfig> {
    let finite = [a1, a2, a3].iter().all(|a| a.re.is_finite() && a.im.is_finite());
    let cross = ((a3 - a1).conj() * (a2 - a1)).im;
    let size = (a3 - a1).norm() * (a2 - a1).norm();
    if !finite || size == 0.0 || cross.abs() <= COLLINEAR_EPS * size {
        return Err(Error::DegenerateTriangle);
    }
    let (a2, a3) = if cross > 0.0 { (a2, a3) } else { (a3, a2) };

    let t1 = C64::new(1.0, 0.0);
    let t2 = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let t3 = t2.conj();
    let m = compose(inverse(to_standard(t1, t2, t3)), to_standard(a1, a2, a3));
    let norm = (m[0] * m[3] - m[1] * m[2]).sqrt();
    let mobius = m.map(|x| x / norm);

    // The ratio formula is written for the labels (a₂, a₃, a₁); the rotation
    // by e^{2πi/3} moves its value to the image of ∞ under this T.
    let gamma = (a3 - a2) / (a3 - a1);
    let z0 = t2 * (gamma - C64::from_polar(1.0, -PI / 3.0)) / (gamma - C64::from_polar(1.0, PI / 3.0));
    Ok(TriangleConfig {
        a1,
        a2,
        a3,
        gamma,
        z0,
        mobius,
    })
}
