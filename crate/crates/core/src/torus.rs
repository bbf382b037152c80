//! One-parameter families of elliptic functions with a single pole at the
//! origin and simple critical points, normalized by `ω₁ ≡ 1`:
//!
//! ```text
//! f′(z, t) = c(t) · Π_{k=0}^{n} σ(z − a_k(t)) / σ^{n+1}(z),   Σ a_k = 0,
//! ```
//!
//! with `σ` built on the lattice `(1, ω₂(t))` and critical values
//! `A_k(t) = f(a_k(t), t)`, `A₀ ≡ 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate, IntegratorConfig, TargetPath};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::period_derivs::{dlnsigma_domega, Period};
use crate::quadrature::{integrate_polyline, segment_distance};
use crate::weierstrass::{invariants, EvalOptions, LatticeInvariants};
use crate::C64;

/// Minimum `Im ω₂` tolerated during integration.
pub const MIN_IM_OMEGA2: f64 = 0.05;
/// Distance from the pole below which a critical point is rejected.
const POLE_GAP: f64 = 1e-8;
/// Invariants tolerance used for every lattice along a solve.
const LATTICE_TOL: f64 = 1e-12;
/// Clearance kept between quadrature contours and lattice points.
const CONTOUR_CLEARANCE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusFamilyState {
    #[serde(default)]
    pub t: f64,
    /// Critical points `a₀..a_n`.
    pub a: Vec<C64>,
    pub c: C64,
    pub omega2: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusFamilySpec {
    pub n: usize,
    pub initial: TorusFamilyState,
    /// Paths for `A₁..A_n`.
    pub paths: Vec<TargetPath>,
}

/// Velocities produced by [`torus_rhs`].
#[derive(Clone, Debug, PartialEq)]
pub struct TorusVelocity {
    /// `ȧ₁..ȧ_n`.
    pub adot: Vec<C64>,
    pub a0dot: C64,
    pub cdot: C64,
    pub omega2dot: C64,
}

impl TorusFamilyState {
    pub fn lattice(&self) -> Result<Lattice> {
        if !(self.omega2.im > MIN_IM_OMEGA2) {
            return Err(Error::LatticeDegenerate(self.omega2.im));
        }
        Lattice::new(C64::new(1.0, 0.0), self.omega2)
    }

    pub fn gauge(&self) -> C64 {
        self.a.iter().sum()
    }

    fn check(&self, lat: &Lattice) -> Result<()> {
        for (k, &ak) in self.a.iter().enumerate() {
            if lat.distance_to_lattice(ak) < POLE_GAP {
                return Err(Error::ParameterCollision(format!("critical point {k} hit the pole")));
            }
            for (j, &aj) in self.a.iter().enumerate().skip(k + 1) {
                if lat.distance_to_lattice(ak - aj) < POLE_GAP {
                    return Err(Error::ParameterCollision(format!(
                        "critical points {k} and {j} coincide modulo the lattice"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl TorusFamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ValidationError(m));
        if self.n < 2 {
            return bad(format!("order n = {} must be at least 2", self.n));
        }
        if self.initial.a.len() != self.n + 1 {
            return bad(format!(
                "{} critical points given, expected n + 1 = {}",
                self.initial.a.len(),
                self.n + 1
            ));
        }
        if self.paths.len() != self.n {
            return bad(format!("{} target paths given, expected n = {}", self.paths.len(), self.n));
        }
        if !(self.initial.omega2.im > MIN_IM_OMEGA2) {
            return bad(format!("Im(omega2) = {} must exceed {MIN_IM_OMEGA2}", self.initial.omega2.im));
        }
        if self.initial.c.norm() == 0.0 || !self.initial.c.norm().is_finite() {
            return bad("scale c must be finite and nonzero".into());
        }
        let lat = self.initial.lattice()?;
        self.initial
            .check(&lat)
            .map_err(|e| Error::ValidationError(e.to_string()))?;
        let g = self.initial.gauge();
        if g.norm() > 1e-8 {
            return bad(format!("critical points must sum to zero, sum is {g}"));
        }
        Ok(())
    }
}

/// Lattice invariants for `(1, ω₂)`, reused while `ω₂` is bit-identical.
#[derive(Default)]
pub struct LatticeCache {
    entry: Option<(u64, u64, LatticeInvariants)>,
}

impl LatticeCache {
    pub fn get(&mut self, omega2: C64) -> Result<&LatticeInvariants> {
        let key = (omega2.re.to_bits(), omega2.im.to_bits());
        let hit = matches!(&self.entry, Some((r, i, _)) if (*r, *i) == key);
        if !hit {
            if !(omega2.im > MIN_IM_OMEGA2) {
                return Err(Error::LatticeDegenerate(omega2.im));
            }
            let lat = Lattice::new(C64::new(1.0, 0.0), omega2)?;
            self.entry = Some((key.0, key.1, invariants(&lat, LATTICE_TOL)?));
        }
        Ok(&self.entry.as_ref().expect("filled above").2)
    }
}

/// `D_k = f″(a_k)` for every critical point.
pub fn torus_d(state: &TorusFamilyState, inv: &LatticeInvariants, opt: &EvalOptions) -> Result<Vec<C64>> {
    let n = state.a.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    for (k, &ak) in state.a.iter().enumerate() {
        let mut log = -(n as f64 + 1.0) * inv.log_sigma(ak, opt)?;
        for (j, &aj) in state.a.iter().enumerate() {
            if j != k {
                log += inv.log_sigma(ak - aj, opt)?;
            }
        }
        out.push(state.c * log.exp());
    }
    Ok(out)
}

fn gammas(state: &TorusFamilyState, adot: &[C64], d: &[C64]) -> Result<Vec<C64>> {
    let mut g = vec![C64::new(0.0, 0.0); state.a.len()];
    for k in 1..state.a.len() {
        if d[k].norm() < 1e-12 * state.c.norm() {
            return Err(Error::DegenerateCriticalPoint(format!("critical point {k} is not simple")));
        }
        g[k] = adot[k - 1] / d[k];
    }
    Ok(g)
}

/// The critical-point flow for critical-value velocities `adot` (`Ȧ₁..Ȧ_n`).
pub fn torus_rhs(state: &TorusFamilyState, adot: &[C64], inv: &LatticeInvariants) -> Result<TorusVelocity> {
    let n = state.a.len() - 1;
    if adot.len() != n {
        return Err(Error::InvalidArgument(format!("{} velocities for n = {n}", adot.len())));
    }
    state.check(&inv.lattice)?;
    let opt = EvalOptions::with_tol(1e-12);
    let d = torus_d(state, inv, &opt)?;
    let g = gammas(state, adot, &d)?;
    let a = &state.a;
    let eta1 = inv.eta1;

    let zeta_a: Vec<C64> = a.iter().map(|&x| inv.zeta(x, &opt)).collect::<Result<_>>()?;
    // zeta(a_s − a_l) for all ordered pairs.
    let mut zd = vec![vec![C64::new(0.0, 0.0); n + 1]; n + 1];
    for s in 0..=n {
        for l in 0..=n {
            if s != l {
                zd[s][l] = inv.zeta(a[s] - a[l], &opt)?;
            }
        }
    }
    let al_dot = |l: usize| -> C64 {
        let mut v = C64::new(0.0, 0.0);
        for k in 1..=n {
            if k != l {
                v += g[k] * (zd[k][l] - zeta_a[k] + eta1 * a[l]);
            }
        }
        let mut own = eta1 * a[l] + n as f64 * zeta_a[l];
        for s in 0..=n {
            if s != l {
                own += zd[s][l];
            }
        }
        v + g[l] * own
    };
    let adot_l: Vec<C64> = (1..=n).map(al_dot).collect();
    let a0dot = -adot_l.iter().sum::<C64>();
    let gsum: C64 = g.iter().sum();
    let omega2dot = C64::new(0.0, 2.0 * PI) * gsum;

    let mut log_rate = C64::new(0.0, 0.0);
    for j in 0..=n {
        let aj_dot = if j == 0 { a0dot } else { adot_l[j - 1] };
        let dls = dlnsigma_domega(a[j], inv, Period::Two, &opt)?;
        log_rate -= zeta_a[j] * aj_dot + omega2dot * dls;
    }
    for k in 1..=n {
        log_rate += n as f64 * g[k] * (inv.wp(a[k], &opt)? + eta1);
    }
    Ok(TorusVelocity {
        adot: adot_l,
        a0dot,
        cdot: state.c * log_rate,
        omega2dot,
    })
}

/// Right-hand side of (al) evaluated at `l = 0`; equals `ȧ₀` when the gauge
/// `Σ a_k = 0` is preserved.
pub fn torus_a0dot_direct(state: &TorusFamilyState, adot: &[C64], inv: &LatticeInvariants) -> Result<C64> {
    let n = state.a.len() - 1;
    let opt = EvalOptions::with_tol(1e-12);
    let d = torus_d(state, inv, &opt)?;
    let g = gammas(state, adot, &d)?;
    let a = &state.a;
    let mut v = C64::new(0.0, 0.0);
    for k in 1..=n {
        v += g[k] * (inv.zeta(a[k] - a[0], &opt)? - inv.zeta(a[k], &opt)? + inv.eta1 * a[0]);
    }
    Ok(v)
}

/// `h(z) = ḟ/f′ = Σ_j γ_j [ζ(z − a_j) + ζ(a_j) − η₁ z]`.
pub fn torus_h(state: &TorusFamilyState, adot: &[C64], inv: &LatticeInvariants, z: C64) -> Result<C64> {
    let opt = EvalOptions::with_tol(1e-12);
    let d = torus_d(state, inv, &opt)?;
    let g = gammas(state, adot, &d)?;
    let mut h = C64::new(0.0, 0.0);
    for (k, &ak) in state.a.iter().enumerate().skip(1) {
        h += g[k] * (inv.zeta(z - ak, &opt)? + inv.zeta(ak, &opt)? - inv.eta1 * z);
    }
    Ok(h)
}

/// Initial state of the family starting at `f = ℘² − 4℘` on the square
/// lattice `(1, i)`, with its critical values `A₀..A₄`.
pub fn torus_initial_p2m4p(tol: f64) -> Result<(TorusFamilyState, Vec<C64>)> {
    let lat = Lattice::new(C64::new(1.0, 0.0), C64::new(0.0, 1.0))?;
    let inv = invariants(&lat, tol)?;
    let opt = EvalOptions::with_tol(tol.max(1e-14));
    let mut a3 = inv.wp_inverse(C64::new(2.0, 0.0), &opt)?;
    if a3.im < 0.0 {
        a3 = -a3;
    }
    if a3.re < 0.0 {
        a3 += 1.0;
    }
    let half = C64::new(0.5, 0.0);
    let a = vec![C64::new(-0.5, -0.5), half, C64::new(0.0, 0.5), a3, -a3];
    let e1 = inv.e1;
    let f2 = (2.0 * e1 - 4.0) * (6.0 * e1 * e1 - inv.g2 / 2.0);
    let mut log = 5.0 * inv.log_sigma(a[1], &opt)?;
    for (j, &aj) in a.iter().enumerate() {
        if j != 1 {
            log -= inv.log_sigma(a[1] - aj, &opt)?;
        }
    }
    let c = f2 * log.exp();
    let e2 = inv.e2;
    let values = vec![
        C64::new(0.0, 0.0),
        e1 * e1 - 4.0 * e1,
        e2 * e2 - 4.0 * e2,
        C64::new(-4.0, 0.0),
        C64::new(-4.0, 0.0),
    ];
    Ok((
        TorusFamilyState {
            t: 0.0,
            a,
            c,
            omega2: C64::new(0.0, 1.0),
        },
        values,
    ))
}

/// The family obtained by moving `A₁..A₄` of the `℘² − 4℘` example by
/// `(i, −i, −1, +1)`.
pub fn torus_example_spec() -> Result<TorusFamilySpec> {
    let (initial, values) = torus_initial_p2m4p(1e-13)?;
    let deltas = [
        C64::new(0.0, 1.0),
        C64::new(0.0, -1.0),
        C64::new(-1.0, 0.0),
        C64::new(1.0, 0.0),
    ];
    let paths = deltas
        .iter()
        .zip(&values[1..])
        .map(|(&d, &s)| TargetPath::new(s, d))
        .collect();
    Ok(TorusFamilySpec { n: 4, initial, paths })
}

/// Output of [`solve_torus_family`].
#[derive(Clone, Debug)]
pub struct TorusSolution {
    pub checkpoints: Vec<TorusFamilyState>,
    pub end: TorusFamilyState,
    /// Largest `|Σ a_k|` over the recorded states.
    pub max_gauge: f64,
    pub accepted_steps: usize,
}

fn pack(state: &TorusFamilyState) -> Vec<C64> {
    let mut y = state.a.clone();
    y.push(state.c);
    y.push(state.omega2);
    y
}

fn unpack(t: f64, y: &[C64]) -> TorusFamilyState {
    let k = y.len();
    TorusFamilyState {
        t,
        a: y[..k - 2].to_vec(),
        c: y[k - 2],
        omega2: y[k - 1],
    }
}

/// Integrates the family from `t = 0` to `t = 1`.
pub fn solve_torus_family(
    spec: &TorusFamilySpec,
    cfg: &IntegratorConfig,
    checkpoints: &[f64],
) -> Result<TorusSolution> {
    spec.validate()?;
    let adot: Vec<C64> = spec.paths.iter().map(|p| p.derivative()).collect();
    let mut cache = LatticeCache::default();
    let rhs = |t: f64, y: &[C64]| -> Result<Vec<C64>> {
        let state = unpack(t, y);
        let inv = cache.get(state.omega2)?;
        let v = torus_rhs(&state, &adot, inv)?;
        let mut out = Vec::with_capacity(y.len());
        out.push(v.a0dot);
        out.extend(v.adot);
        out.push(v.cdot);
        out.push(v.omega2dot);
        Ok(out)
    };
    let traj = integrate(rhs, &pack(&spec.initial), (0.0, 1.0), cfg, checkpoints)?;
    let cps: Vec<TorusFamilyState> = traj.samples.iter().map(|s| unpack(s.t, &s.y)).collect();
    let end = unpack(traj.end.t, &traj.end.y);
    let max_gauge = cps
        .iter()
        .chain(std::iter::once(&end))
        .map(|s| s.gauge().norm())
        .fold(0.0, f64::max);
    Ok(TorusSolution {
        checkpoints: cps,
        end,
        max_gauge,
        accepted_steps: traj.accepted_steps,
    })
}

/// `f′(ζ)/c = Π σ(ζ − a_j) / σ^{n+1}(ζ)`.
pub fn torus_integrand(state: &TorusFamilyState, inv: &LatticeInvariants, z: C64, opt: &EvalOptions) -> Result<C64> {
    let n = state.a.len() - 1;
    let mut log = -(n as f64 + 1.0) * inv.log_sigma(z, opt)?;
    for &aj in &state.a {
        log += inv.log_sigma(z - aj, opt)?;
    }
    Ok(log.exp())
}

/// The contour from `a₀` to `target`: a straight segment, or a detour
/// through the cell center shifted by `0.25 + 0.25i` when the segment comes
/// within `0.05` of a lattice point.
pub fn torus_contour(a0: C64, target: C64, lat: &Lattice) -> Result<Vec<C64>> {
    let clear = |p: C64, q: C64| -> bool { lattice_clearance(p, q, lat) >= CONTOUR_CLEARANCE };
    if clear(a0, target) {
        return Ok(vec![a0, target]);
    }
    let center = (lat.omega1() + lat.omega2()) / 2.0;
    let base = lat.reduce(a0).z;
    let corner = a0 - base;
    for via in [
        corner + C64::new(0.25, 0.25),
        corner - C64::new(0.25, 0.25),
        corner + center * 0.5,
        corner - center * 0.5,
    ] {
        if clear(a0, via) && clear(via, target) {
            return Ok(vec![a0, via, target]);
        }
    }
    Err(Error::ContourBlocked(format!("no contour from {a0} to {target} avoids the pole")))
}

/// Minimum distance from the segment `[p, q]` to any lattice point nearby.
fn lattice_clearance(p: C64, q: C64, lat: &Lattice) -> f64 {
    let mid = lat.reduce((p + q) / 2.0);
    let shift = (p + q) / 2.0 - mid.z;
    let reach = ((q - p).norm() / lat.min_length()).ceil() as i64 + 2;
    let mut best = f64::INFINITY;
    for i in -reach..=reach {
        for j in -reach..=reach {
            best = best.min(segment_distance(shift + lat.point(i, j), p, q));
        }
    }
    best
}

/// Critical values `A_k = c ∫_{a₀}^{a_k} f′/c` by adaptive quadrature.
pub fn torus_critical_values(state: &TorusFamilyState, tol: f64) -> Result<Vec<C64>> {
    torus_critical_values_via(state, tol, None)
}

/// As [`torus_critical_values`], optionally forcing each contour through a
/// fixed intermediate point.
pub fn torus_critical_values_via(state: &TorusFamilyState, tol: f64, via: Option<C64>) -> Result<Vec<C64>> {
    let lat = state.lattice()?;
    let inv = invariants(&lat, LATTICE_TOL)?;
    let opt = EvalOptions::with_tol(1e-12);
    let mut f = |z: C64| torus_integrand(state, &inv, z, &opt);
    let a0 = state.a[0];
    let mut out = vec![C64::new(0.0, 0.0)];
    for &ak in &state.a[1..] {
        let route = match via {
            None => torus_contour(a0, ak, &lat)?,
            Some(w) => {
                let mut r = torus_contour(a0, w, &lat)?;
                r.pop();
                r.extend(torus_contour(w, ak, &lat)?);
                r
            }
        };
        out.push(state.c * integrate_polyline(&mut f, &route, tol)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_values() {
        let (s, values) = torus_initial_p2m4p(1e-13).unwrap();
        assert!((s.a[3] - C64::new(0.5, 0.292496)).norm() < 1e-5);
        assert!((values[1] - C64::new(19.767437, 0.0)).norm() < 1e-5);
        assert!((values[2] - C64::new(74.768923, 0.0)).norm() < 1e-5);
        assert!((s.c - C64::new(-56.796445, 7.628085)).norm() < 1e-4, "c = {}", s.c);
        assert_eq!(s.gauge(), C64::new(0.0, 0.0));
    }

    #[test]
    fn scale_from_pole_expansion() {
        // Near 0, f′ = (2℘ − 4)℘′ ≈ −4 z⁻⁵, so c·Π σ(−a_k) = −4.
        let (s, _) = torus_initial_p2m4p(1e-13).unwrap();
        let inv = invariants(&s.lattice().unwrap(), 1e-13).unwrap();
        let opt = EvalOptions::default();
        let prod: C64 = s.a.iter().map(|&a| inv.sigma(-a, &opt).unwrap()).product();
        assert!((s.c * prod + 4.0).norm() < 1e-9);
    }

    #[test]
    fn zero_velocity_is_stationary() {
        let (s, _) = torus_initial_p2m4p(1e-13).unwrap();
        let inv = invariants(&s.lattice().unwrap(), 1e-12).unwrap();
        let v = torus_rhs(&s, &[C64::new(0.0, 0.0); 4], &inv).unwrap();
        assert!(v.adot.iter().all(|x| x.norm() == 0.0));
        assert_eq!(v.cdot, C64::new(0.0, 0.0));
        assert_eq!(v.omega2dot, C64::new(0.0, 0.0));
    }

    #[test]
    fn degenerate_lattice_rejected() {
        let (mut s, _) = torus_initial_p2m4p(1e-13).unwrap();
        s.omega2 = C64::new(0.0, 0.01);
        assert_eq!(s.lattice().unwrap_err().name(), "LatticeDegenerate");
    }
}

