//! Period lattices `Λ = {m₁ω₁ + m₂ω₂}` and reduction of points to the
//! centered fundamental cell.

use crate::error::{Error, Result};
use crate::C64;

/// Relative size of `Im(ω₂ ω̄₁)` below which two periods count as collinear.
const COLLINEAR_EPS: f64 = 1e-14;

/// A period lattice with positive orientation, `Im(ω₂/ω₁) > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    omega1: C64,
    omega2: C64,
}

/// A point written as `z_red + m1·ω₁ + m2·ω₂` with `z_red` in the centered cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellPoint {
    pub z: C64,
    pub m1: i64,
    pub m2: i64,
}

/// Builds a positively oriented lattice, flipping the sign of `omega2` when
/// the input orientation is reversed.
pub fn make_lattice(omega1: C64, omega2: C64) -> Result<Lattice> {
    Lattice::new(omega1, omega2)
}

impl Lattice {
    pub fn new(omega1: C64, omega2: C64) -> Result<Self> {
        let finite = omega1.re.is_finite()
            && omega1.im.is_finite()
            && omega2.re.is_finite()
            && omega2.im.is_finite();
        let n1 = omega1.norm();
        let n2 = omega2.norm();
        let cross = (omega1.conj() * omega2).im;
        if !finite || n1 == 0.0 || n2 == 0.0 || cross.abs() <= COLLINEAR_EPS * n1 * n2 {
            return Err(Error::CollinearPeriods(
                format!("{omega1}"),
                format!("{omega2}"),
            ));
        }
        let omega2 = if cross < 0.0 { -omega2 } else { omega2 };
        Ok(Lattice { omega1, omega2 })
    }

    #[inline]
    pub fn omega1(&self) -> C64 {
        self.omega1
    }

    #[inline]
    pub fn omega2(&self) -> C64 {
        self.omega2
    }

    /// Period ratio `τ = ω₂/ω₁`, always in the upper half-plane.
    pub fn tau(&self) -> C64 {
        self.omega2 / self.omega1
    }

    #[inline]
    pub fn point(&self, m1: i64, m2: i64) -> C64 {
        self.omega1 * m1 as f64 + self.omega2 * m2 as f64
    }

    /// `max(|ω₁|, |ω₂|)`.
    pub fn scale(&self) -> f64 {
        self.omega1.norm().max(self.omega2.norm())
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn min_length(&self) -> f64 {
        self.reduced_basis().omega1.norm()
    }

    /// Area of the period parallelogram.
    pub fn area(&self) -> f64 {
        (self.omega1.conj() * self.omega2).im
    }

    /// Real coordinates `(s, t)` with `z = s·ω₁ + t·ω₂`.
    pub fn coords(&self, z: C64) -> (f64, f64) {
        let d = self.area();
        let t = (self.omega1.conj() * z).im / d;
        let s = -(self.omega2.conj() * z).im / d;
        (s, t)
    }

    /// Reduces `z` to the half-open centered cell: basis coordinates of the
    /// result lie in `[-1/2, 1/2)`.
    pub fn reduce(&self, z: C64) -> CellPoint {
        let (s, t) = self.coords(z);
        let m1 = (s + 0.5).floor();
        let m2 = (t + 0.5).floor();
        let (m1, m2) = (m1 as i64, m2 as i64);
        CellPoint {
            z: z - self.point(m1, m2),
            m1,
            m2,
        }
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn distance_to_lattice(&self, z: C64) -> f64 {
        let r = self.reduce(z).z;
        let mut best = f64::INFINITY;
        for i in -1..=1 {
            for j in -1..=1 {
                best = best.min((r - self.point(i, j)).norm());
            }
        }
        best
    }

    /// Nearest lattice point to `z` (searching the translates adjacent to the
    /// reduced representative).
    pub fn nearest_point(&self, z: C64) -> (i64, i64) {
        let c = self.reduce(z);
        let mut best = (f64::INFINITY, 0, 0);
        for i in -1..=1 {
            for j in -1..=1 {
                let d = (c.z - self.point(i, j)).norm();
                if d < best.0 {
                    best = (d, c.m1 + i, c.m2 + j);
                }
            }
        }
        (best.1, best.2)
    }

    /// Lagrange–Gauss reduced basis of the same lattice, positively oriented.
    /// The reduced ratio satisfies `|Re τ| ≤ 1/2`, `|τ| ≥ 1`.
    pub fn reduced_basis(&self) -> Lattice {
        let mut u = self.omega1;
        let mut v = self.omega2;
        for _ in 0..200 {
            if v.norm_sqr() < u.norm_sqr() {
                std::mem::swap(&mut u, &mut v);
            }
            let m = (v / u).re.round();
            if m == 0.0 {
                break;
            }
            v -= u * m;
        }
        if v.norm_sqr() < u.norm_sqr() {
            std::mem::swap(&mut u, &mut v);
        }
        if (u.conj() * v).im < 0.0 {
            v = -v;
        }
        Lattice {
            omega1: u,
            omega2: v,
        }
    }

    /// Integer coordinates of a lattice vector, rounded.
    pub fn integer_coords(&self, w: C64) -> (i64, i64) {
        let (s, t) = self.coords(w);
        (s.round() as i64, t.round() as i64)
    }

    /// Scales both periods by `alpha`; the orientation is preserved.
    pub fn scaled(&self, alpha: C64) -> Result<Lattice> {
        Lattice::new(self.omega1 * alpha, self.omega2 * alpha)
    }
}
