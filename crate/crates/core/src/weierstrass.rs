//! Weierstrass ℘, ℘′, ζ and σ on an arbitrary lattice.
//!
//! Every evaluation first reduces its argument to the centered cell of a
//! Lagrange-reduced basis `(w₁, w₂)` of the lattice, then sums the
//! row-accelerated series in the `w₁` direction,
//!
//! ```text
//! ℘(z) = k² [csc² v + Σ_{n≠0} csc²(v − nπτ)] − η₁/w₁,     k = π/w₁, v = kz,
//! ζ(z) = (η₁/w₁) z + k [cot v + Σ_{n≥1} (cot(v − nπτ) + cot(v + nπτ))],
//! σ(z) = k⁻¹ sin v · exp(η₁z²/2w₁) · Π_{n≥1} (1 − sin² v / sin² nπτ),
//! ```
//!
//! whose rows decay like `exp(−2πn Im τ)`. Results for unreduced arguments
//! follow from the quasi-periodicity laws of ζ and σ.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::{CellPoint, Lattice};
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Relative distance (in units of the lattice scale) at which an argument is
/// treated as a lattice point.
pub const LATTICE_POINT_EPS: f64 = 1e-13;

/// Hard cap on the number of series rows; more means the lattice is too
/// degenerate for the requested tolerance.
const MAX_ROWS: usize = 20_000;

/// Number of Laurent coefficients `c_2..c_7` kept near the origin (through z¹²).
const LAURENT_TERMS: usize = 6;

/// Options for point evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    /// Target absolute accuracy.
    pub tol: f64,
    /// Switch to Laurent expansions when the reduced argument is closer than
    /// this to the origin. `None` selects `0.1·min(|ω₁|, |ω₂|, |ω₁ ± ω₂|)`.
    pub near_origin_radius: Option<f64>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            tol: 1e-10,
            near_origin_radius: None,
        }
    }
}

impl EvalOptions {
    pub fn with_tol(tol: f64) -> Self {
        EvalOptions {
            tol,
            near_origin_radius: None,
        }
    }

    fn validate(&self, lat: &Lattice) -> Result<f64> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "evaluation tolerance must be positive, got {}",
                self.tol
            )));
        }
        let cap = lat.min_length() / 4.0;
        match self.near_origin_radius {
            None => Ok(0.1 * lat.min_length()),
            Some(r) if r > 0.0 && r < cap => Ok(r),
            Some(r) => Err(Error::InvalidArgument(format!(
                "near-origin radius {r} must lie in (0, {cap})"
            ))),
        }
    }
}

/// Row-accelerated series data for the reduced evaluation basis.
#[derive(Clone, Debug)]
struct Series {
    basis: Lattice,
    /// `π / w₁`
    k: C64,
    /// `exp(2πiτ)` for the reduced basis.
    q2: C64,
    im_tau: f64,
    /// Quasi-period constants of the reduced basis.
    eta1: C64,
    eta2: C64,
}

impl Series {
    fn new(basis: Lattice) -> Self {
        let tau = basis.tau();
        Series {
            basis,
            k: C64::new(PI, 0.0) / basis.omega1(),
            q2: (I * 2.0 * PI * tau).exp(),
            im_tau: tau.im,
            eta1: C64::new(0.0, 0.0),
            eta2: C64::new(0.0, 0.0),
        }
    }

    /// Rows needed so that the discarded tail of every series is below `tol`.
    fn rows(&self, tol: f64) -> Result<usize> {
        let decay = 2.0 * PI * self.im_tau;
        let amp = 40.0 * self.k.norm().powi(3).max(1.0) / (1.0 - (-decay).exp());
        let n = ((amp / tol).ln() / decay + 0.5).ceil().max(1.0) as usize + 1;
        if n > MAX_ROWS {
            return Err(Error::ToleranceUnreachable(format!(
                "{n} series rows needed for tolerance {tol:e}"
            )));
        }
        Ok(n)
    }

    /// `(Σ csc² rows, Σ csc²·cot rows, Σ cot rows)` at a reduced point,
    /// including the central `n = 0` term.
    fn row_sums(&self, zr: C64, rows: usize) -> (C64, C64, C64) {
        let v = self.k * zr;
        let (s, c) = (v.sin(), v.cos());
        let csc2 = ONE / (s * s);
        let cot = c / s;
        let mut wp = csc2;
        let mut wpp = csc2 * cot;
        let mut zeta = cot;
        let e = (I * 2.0 * v).exp();
        let einv = ONE / e;
        let mut qn = ONE;
        for _ in 0..rows {
            qn *= self.q2;
            let pp = e * qn;
            let pm = qn * einv;
            let dp = ONE / (ONE - pp);
            let dm = ONE / (ONE - pm);
            wp += -4.0 * (pp * dp * dp + pm * dm * dm);
            wpp += 4.0 * I * (pp * (ONE + pp) * dp * dp * dp - pm * (ONE + pm) * dm * dm * dm);
            zeta += 2.0 * I * (pm * dm - pp * dp);
        }
        (wp, wpp, zeta)
    }

    fn wp_cell(&self, zr: C64, rows: usize) -> C64 {
        let (wp, _, _) = self.row_sums(zr, rows);
        self.k * self.k * wp - self.eta1 / self.basis.omega1()
    }

    fn zeta_cell(&self, zr: C64, rows: usize) -> C64 {
        let (_, _, z) = self.row_sums(zr, rows);
        self.eta1 / self.basis.omega1() * zr + self.k * z
    }

    /// Principal-branch `log σ` on the reduced cell.
    fn log_sigma_cell(&self, zr: C64, rows: usize) -> C64 {
        let v = self.k * zr;
        let s = v.sin();
        let s2 = s * s;
        let mut prod = ONE;
        let mut qn = ONE;
        for _ in 0..rows {
            qn *= self.q2;
            let d = ONE - qn;
            prod *= ONE + 4.0 * qn * s2 / (d * d);
        }
        -self.k.ln() + s.ln() + self.eta1 * zr * zr / (2.0 * self.basis.omega1()) + prod.ln()
    }

    /// `ln|σ|` on the reduced cell.
    fn ln_abs_sigma_cell(&self, zr: C64, rows: usize) -> f64 {
        let v = self.k * zr;
        let s = v.sin();
        let s2 = s * s;
        let mut prod = ONE;
        let mut qn = ONE;
        for _ in 0..rows {
            qn *= self.q2;
            let d = ONE - qn;
            prod *= ONE + 4.0 * qn * s2 / (d * d);
        }
        -self.k.norm().ln()
            + s.norm().ln()
            + (self.eta1 * zr * zr / (2.0 * self.basis.omega1())).re
            + prod.norm().ln()
    }
}

/// Lattice together with its invariants, quasi-period constants and
/// half-period values.
#[derive(Clone, Debug)]
pub struct LatticeInvariants {
    pub lattice: Lattice,
    pub g2: C64,
    pub g3: C64,
    pub eta1: C64,
    pub eta2: C64,
    pub e1: C64,
    pub e2: C64,
    pub e3: C64,
    /// Number of series rows kept in the `ω₁` direction of the reduced basis.
    pub trunc_radius: usize,
    pub tol: f64,
    series: Series,
    /// Laurent coefficients `c_k`, `℘(z) = z⁻² + Σ_{k≥2} c_k z^{2k−2}`.
    laurent: [C64; LAURENT_TERMS],
}

/// Computes `g₂`, `g₃`, `η₁`, `η₂` and `e₁..e₃` for `lat` to tolerance `tol`.
pub fn invariants(lat: &Lattice, tol: f64) -> Result<LatticeInvariants> {
    LatticeInvariants::new(lat, tol)
}

impl LatticeInvariants {
    pub fn new(lat: &Lattice, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let basis = lat.reduced_basis();
        let mut series = Series::new(basis);
        let rows = series.rows(tol)?;

        // Eisenstein sums through the row identities
        // Σ_m (x − m w₁)^{-4} = k⁴(s² − 2s/3), Σ_m (x − m w₁)^{-6} = k⁶(s³ − s² + 2s/15),
        // with s = csc²(πx/w₁) at x = n w₂.
        let k = series.k;
        let k2 = k * k;
        let k4 = k2 * k2;
        let k6 = k4 * k2;
        let w1 = basis.omega1();
        let pi4 = PI.powi(4);
        let pi6 = PI.powi(6);
        let mut s4 = C64::new(pi4 / 45.0, 0.0) / (w1 * w1 * w1 * w1);
        let mut s6 = C64::new(2.0 * pi6 / 945.0, 0.0) / (w1 * w1 * w1 * w1 * w1 * w1);
        let mut csc_sum = C64::new(0.0, 0.0);
        let mut qn = ONE;
        for _ in 0..rows {
            qn *= series.q2;
            let d = ONE - qn;
            let s = -4.0 * qn / (d * d);
            csc_sum += s;
            s4 += 2.0 * k4 * (s * s - s * (2.0 / 3.0));
            s6 += 2.0 * k6 * (s * s * s - s * s + s * (2.0 / 15.0));
        }
        let g2 = 60.0 * s4;
        let g3 = 140.0 * s6;

        series.eta1 = w1 * k2 * (C64::new(1.0 / 3.0, 0.0) + 2.0 * csc_sum);
        // η₂ = 2ζ(w₂/2), summed directly on the cell boundary.
        series.eta2 = 2.0 * series.zeta_cell(basis.omega2() / 2.0, rows);

        let mut laurent = [C64::new(0.0, 0.0); LAURENT_TERMS];
        laurent[0] = g2 / 20.0;
        laurent[1] = g3 / 28.0;
        for kk in 4..(LAURENT_TERMS + 2) {
            let mut acc = C64::new(0.0, 0.0);
            for m in 2..=(kk - 2) {
                acc += laurent[m - 2] * laurent[kk - m - 2];
            }
            laurent[kk - 2] = acc * (3.0 / (((2 * kk + 1) * (kk - 3)) as f64));
        }

        let eta_of = |w: C64| -> C64 {
            let (m1, m2) = basis.integer_coords(w);
            series.eta1 * m1 as f64 + series.eta2 * m2 as f64
        };
        let eta1 = eta_of(lat.omega1());
        let eta2 = eta_of(lat.omega2());

        let mut inv = LatticeInvariants {
            lattice: *lat,
            g2,
            g3,
            eta1,
            eta2,
            e1: C64::new(0.0, 0.0),
            e2: C64::new(0.0, 0.0),
            e3: C64::new(0.0, 0.0),
            trunc_radius: rows,
            tol,
            series,
            laurent,
        };
        let opt = EvalOptions::with_tol(tol);
        inv.e1 = inv.wp(lat.omega1() / 2.0, &opt)?;
        inv.e2 = inv.wp(lat.omega2() / 2.0, &opt)?;
        inv.e3 = inv.wp((lat.omega1() + lat.omega2()) / 2.0, &opt)?;
        Ok(inv)
    }

    /// Quasi-period `η(ω)` of an arbitrary lattice vector.
    pub fn eta_of(&self, w: C64) -> C64 {
        let (m1, m2) = self.series.basis.integer_coords(w);
        self.series.eta1 * m1 as f64 + self.series.eta2 * m2 as f64
    }

    fn reduce_eval(&self, z: C64) -> CellPoint {
        self.series.basis.reduce(z)
    }

    fn check_pole(&self, zr: C64, z: C64) -> Result<()> {
        if zr.norm() <= LATTICE_POINT_EPS * self.lattice.scale() {
            return Err(Error::PoleAtLatticePoint(format!("{z}")));
        }
        Ok(())
    }

    fn rows_for(&self, opt: &EvalOptions) -> Result<usize> {
        if opt.tol >= self.tol {
            Ok(self.trunc_radius)
        } else {
            self.series.rows(opt.tol)
        }
    }

    fn laurent_wp(&self, z: C64) -> C64 {
        let z2 = z * z;
        let mut acc = C64::new(0.0, 0.0);
        for c in self.laurent.iter().rev() {
            acc = acc * z2 + c;
        }
        ONE / z2 + acc * z2
    }

    fn laurent_wp_prime(&self, z: C64) -> C64 {
        // d/dz Σ c_k z^{2k−2} = Σ (2k−2) c_k z^{2k−3}
        let z2 = z * z;
        let mut acc = C64::new(0.0, 0.0);
        for (i, c) in self.laurent.iter().enumerate().rev() {
            let k = (i + 2) as f64;
            acc = acc * z2 + c * (2.0 * k - 2.0);
        }
        -2.0 / (z2 * z) + acc * z
    }

    fn laurent_zeta(&self, z: C64) -> C64 {
        // ζ = 1/z − Σ c_k z^{2k−1}/(2k−1)
        let z2 = z * z;
        let mut acc = C64::new(0.0, 0.0);
        for (i, c) in self.laurent.iter().enumerate().rev() {
            let k = (i + 2) as f64;
            acc = acc * z2 + c / (2.0 * k - 1.0);
        }
        ONE / z - acc * z2 * z
    }

    /// Weierstrass ℘.
    pub fn wp(&self, z: C64, opt: &EvalOptions) -> Result<C64> {
        let radius = opt.validate(&self.series.basis)?;
        let r = self.reduce_eval(z);
        self.check_pole(r.z, z)?;
        if r.z.norm() < radius {
            return Ok(self.laurent_wp(r.z));
        }
        Ok(self.series.wp_cell(r.z, self.rows_for(opt)?))
    }

    /// Derivative ℘′.
    pub fn wp_prime(&self, z: C64, opt: &EvalOptions) -> Result<C64> {
        let radius = opt.validate(&self.series.basis)?;
        let r = self.reduce_eval(z);
        self.check_pole(r.z, z)?;
        if r.z.norm() < radius {
            return Ok(self.laurent_wp_prime(r.z));
        }
        let (_, wpp, _) = self.series.row_sums(r.z, self.rows_for(opt)?);
        let k = self.series.k;
        Ok(-2.0 * k * k * k * wpp)
    }

    /// ℘ and ℘′ together (one series pass).
    pub fn wp_and_prime(&self, z: C64, opt: &EvalOptions) -> Result<(C64, C64)> {
        let radius = opt.validate(&self.series.basis)?;
        let r = self.reduce_eval(z);
        self.check_pole(r.z, z)?;
        if r.z.norm() < radius {
            return Ok((self.laurent_wp(r.z), self.laurent_wp_prime(r.z)));
        }
        let (wp, wpp, _) = self.series.row_sums(r.z, self.rows_for(opt)?);
        let k = self.series.k;
        Ok((
            k * k * wp - self.series.eta1 / self.series.basis.omega1(),
            -2.0 * k * k * k * wpp,
        ))
    }

    /// Weierstrass ζ, continued quasi-periodically from the reduced cell.
    pub fn zeta(&self, z: C64, opt: &EvalOptions) -> Result<C64> {
        let radius = opt.validate(&self.series.basis)?;
        let r = self.reduce_eval(z);
        self.check_pole(r.z, z)?;
        let cell = if r.z.norm() < radius {
            self.laurent_zeta(r.z)
        } else {
            self.series.zeta_cell(r.z, self.rows_for(opt)?)
        };
        Ok(cell + self.series.eta1 * r.m1 as f64 + self.series.eta2 * r.m2 as f64)
    }

    /// ℘, ℘′ and ζ from a single series pass.
    pub fn wp_wpp_zeta(&self, z: C64, opt: &EvalOptions) -> Result<(C64, C64, C64)> {
        let radius = opt.validate(&self.series.basis)?;
        let r = self.reduce_eval(z);
        self.check_pole(r.z, z)?;
        let shift = self.series.eta1 * r.m1 as f64 + self.series.eta2 * r.m2 as f64;
        if r.z.norm() < radius {
            return Ok((
                self.laurent_wp(r.z),
                self.laurent_wp_prime(r.z),
                self.laurent_zeta(r.z) + shift,
            ));
        }
        let (wp, wpp, zeta) = self.series.row_sums(r.z, self.rows_for(opt)?);
        let k = self.series.k;
        let w1 = self.series.basis.omega1();
        Ok((
            k * k * wp - self.series.eta1 / w1,
            -2.0 * k * k * k * wpp,
            self.series.eta1 / w1 * r.z + k * zeta + shift,
        ))
    }

    /// A logarithm of σ(z). On the reduced cell every factor uses its
    /// principal branch; off the cell the quasi-periodicity law adds
    /// `η(ω)(z_red + ω/2)` and `iπ` for the sign flip.
    pub fn log_sigma(&self, z: C64, opt: &EvalOptions) -> Result<C64> {
        opt.validate(&self.series.basis)?;
        let r = self.reduce_eval(z);
        self.check_pole(r.z, z)?;
        let cell = self.series.log_sigma_cell(r.z, self.rows_for(opt)?);
        Ok(cell + self.quasi_log_factor(&r))
    }

    /// `ln|σ(z)|`, which is independent of any branch choice.
    pub fn ln_abs_sigma(&self, z: C64, opt: &EvalOptions) -> Result<f64> {
        opt.validate(&self.series.basis)?;
        let r = self.reduce_eval(z);
        self.check_pole(r.z, z)?;
        let cell = self.series.ln_abs_sigma_cell(r.z, self.rows_for(opt)?);
        Ok(cell + self.quasi_log_factor(&r).re)
    }

    fn quasi_log_factor(&self, r: &CellPoint) -> C64 {
        if r.m1 == 0 && r.m2 == 0 {
            return C64::new(0.0, 0.0);
        }
        let b = &self.series.basis;
        let w = b.point(r.m1, r.m2);
        let eta = self.series.eta1 * r.m1 as f64 + self.series.eta2 * r.m2 as f64;
        let sign = if r.m1 % 2 == 0 && r.m2 % 2 == 0 { 0.0 } else { PI };
        eta * (r.z + w / 2.0) + C64::new(0.0, sign)
    }

    /// Weierstrass σ; zero at lattice points.
    pub fn sigma(&self, z: C64, opt: &EvalOptions) -> Result<C64> {
        match self.log_sigma(z, opt) {
            Ok(l) => Ok(l.exp()),
            Err(Error::PoleAtLatticePoint(_)) => Ok(C64::new(0.0, 0.0)),
            Err(e) => Err(e),
        }
    }

    /// Second derivative `℘″ = 6℘² − g₂/2`.
    pub fn wp_second(&self, z: C64, opt: &EvalOptions) -> Result<C64> {
        let p = self.wp(z, opt)?;
        Ok(6.0 * p * p - self.g2 / 2.0)
    }

    /// Solves `℘(z) = w`; see [`wp_inverse`].
    pub fn wp_inverse(&self, w: C64, opt: &EvalOptions) -> Result<C64> {
        wp_inverse(w, self, opt)
    }
}

/// `z = z_red + m1·ω₁ + m2·ω₂` with `z_red` in the centered cell of `lat`.
pub fn reduce_to_cell(z: C64, lat: &Lattice) -> (C64, i64, i64) {
    let r = lat.reduce(z);
    (r.z, r.m1, r.m2)
}

pub fn wp(z: C64, inv: &LatticeInvariants, opt: &EvalOptions) -> Result<C64> {
    inv.wp(z, opt)
}

pub fn wp_prime(z: C64, inv: &LatticeInvariants, opt: &EvalOptions) -> Result<C64> {
    inv.wp_prime(z, opt)
}

pub fn zeta_w(z: C64, inv: &LatticeInvariants, opt: &EvalOptions) -> Result<C64> {
    inv.zeta(z, opt)
}

pub fn log_sigma(z: C64, inv: &LatticeInvariants, opt: &EvalOptions) -> Result<C64> {
    inv.log_sigma(z, opt)
}

pub fn sigma(z: C64, inv: &LatticeInvariants, opt: &EvalOptions) -> Result<C64> {
    inv.sigma(z, opt)
}

/// One solution `z*` of `℘(z) = w` in the centered cell of the lattice; the
/// other is `−z*` modulo the lattice.
///
/// Half-period values are matched exactly; otherwise Newton's method runs
/// from a coarse grid of seeds ordered by initial residual.
pub fn wp_inverse(w: C64, inv: &LatticeInvariants, opt: &EvalOptions) -> Result<C64> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("wp_inverse needs finite w, got {w}")));
    }
    let lat = &inv.lattice;
    let scale_w = w.norm().max(1.0);
    let halves = [
        (lat.omega1() / 2.0, inv.e1),
        (lat.omega2() / 2.0, inv.e2),
        ((lat.omega1() + lat.omega2()) / 2.0, inv.e3),
    ];
    for (h, e) in halves {
        if (w - e).norm() <= 1e-12 * scale_w {
            return Ok(lat.reduce(h).z);
        }
    }

    const GRID: usize = 8;
    let mut seeds: Vec<(f64, C64)> = Vec::with_capacity(GRID * GRID + 1);
    for i in 0..GRID {
        for j in 0..GRID {
            let s = (i as f64 + 0.5) / GRID as f64 - 0.5;
            let t = (j as f64 + 0.5) / GRID as f64 - 0.5;
            let z = lat.omega1() * s + lat.omega2() * t;
            if let Ok(p) = inv.wp(z, opt) {
                seeds.push(((p - w).norm(), z));
            }
        }
    }
    if w.norm() > 1.0 {
        let z = ONE / w.sqrt();
        if let Ok(p) = inv.wp(z, opt) {
            seeds.push(((p - w).norm(), z));
        }
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));

    let max_step = 0.25 * lat.min_length();
    let target = opt.tol.max(1e-14) * scale_w;
    for &(_, seed) in &seeds {
        let mut z = seed;
        for _ in 0..80 {
            let (p, dp) = match inv.wp_and_prime(z, opt) {
                Ok(v) => v,
                Err(_) => break,
            };
            let f = p - w;
            if f.norm() <= target {
                return Ok(lat.reduce(z).z);
            }
            if dp.norm() == 0.0 {
                break;
            }
            let mut step = f / dp;
            if step.norm() > max_step {
                step *= max_step / step.norm();
            }
            z -= step;
        }
    }
    Err(Error::NoConvergence(format!("wp_inverse({w}) failed from every seed")))
}
