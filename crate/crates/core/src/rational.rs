//! One-parameter families of rational functions with prescribed motion of
//! their critical values.
//!
//! A family is determined by
//!
//! ```text
//! R′(z, t) = Π_l (z − a_l)^{m_l − 1} / Π_j (z − b_j)^{n_j + 1}
//! ```
//!
//! together with a base point for `R`: the first critical point when
//! `m > n`, infinity when `m < n − 1`, and `R(z) = z + ∫_∞^z (R′ − 1)` when
//! `m = n`, where `m = Σ(m_l − 1)` and `n = Σ(n_j + 1)`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_with_hook, jet_from_linear, IntegratorConfig, Jet, TargetPath};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_polyline, segment_distance};
use crate::C64;

/// Relative gap (in units of the initial parameter spread) below which two
/// parameters count as collided.
const COLLISION_GAP: f64 = 1e-8;

/// Tolerance for the normalization `Σ(m_l − 1)a_l = Σ(n_j + 1)b_j` at load.
pub const GAUGE_TOL: f64 = 1e-10;

/// Jet order used for the series of `R′` at infinity.
const TAIL_ORDER: usize = 48;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalFamilySpec {
    /// Multiplicities `m_l ≥ 2` of the critical points.
    pub m: Vec<u32>,
    /// Orders `n_j ≥ 1` of the finite poles.
    pub n: Vec<u32>,
    pub a0: Vec<C64>,
    pub b0: Vec<C64>,
    /// One path per critical value `A_l`.
    pub paths: Vec<TargetPath>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalFamilyState {
    pub t: f64,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

/// How `R` is anchored, decided by the balance of critical and pole orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasePoint {
    /// `R(a_1) = 0`.
    FirstCritical,
    /// `R(∞) = 0`.
    Infinity,
    /// `R(z) − z → 0` at infinity.
    Regularized,
}

impl RationalFamilySpec {
    pub fn m_sum(&self) -> i64 {
        self.m.iter().map(|&m| m as i64 - 1).sum()
    }

    pub fn n_sum(&self) -> i64 {
        self.n.iter().map(|&n| n as i64 + 1).sum()
    }

    pub fn base_point(&self) -> BasePoint {
        let (m, n) = (self.m_sum(), self.n_sum());
        if m > n {
            BasePoint::FirstCritical
        } else if m == n {
            BasePoint::Regularized
        } else {
            BasePoint::Infinity
        }
    }

    pub fn initial_state(&self) -> RationalFamilyState {
        RationalFamilyState {
            t: 0.0,
            a: self.a0.clone(),
            b: self.b0.clone(),
        }
    }

    /// Largest pairwise distance among the initial parameters.
    pub fn scale(&self) -> f64 {
        let pts: Vec<C64> = self.a0.iter().chain(&self.b0).copied().collect();
        let mut s: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                s = s.max((pts[i] - pts[j]).norm());
            }
        }
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// `Σ(m_l − 1)a_l − Σ(n_j + 1)b_j` for a parameter set.
    pub fn gauge(&self, a: &[C64], b: &[C64]) -> C64 {
        let sa: C64 = a.iter().zip(&self.m).map(|(x, &m)| x * (m as f64 - 1.0)).sum();
        let sb: C64 = b.iter().zip(&self.n).map(|(x, &n)| x * (n as f64 + 1.0)).sum();
        sa - sb
    }

    /// Checks every structural invariant; the message names the one violated.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ValidationError(msg));
        if self.m.is_empty() {
            return bad("at least one critical point is required".into());
        }
        if self.a0.len() != self.m.len() {
            return bad(format!("a0 has {} entries but m has {}", self.a0.len(), self.m.len()));
        }
        if self.b0.len() != self.n.len() {
            return bad(format!("b0 has {} entries but n has {}", self.b0.len(), self.n.len()));
        }
        if self.paths.len() != self.m.len() {
            return bad(format!(
                "{} target paths given for {} critical points",
                self.paths.len(),
                self.m.len()
            ));
        }
        if let Some(m) = self.m.iter().find(|&&m| m < 2) {
            return bad(format!("critical multiplicity {m} is below 2"));
        }
        if let Some(n) = self.n.iter().find(|&&n| n < 1) {
            return bad(format!("pole order {n} is below 1"));
        }
        if self.m_sum() == self.n_sum() - 1 {
            return bad(format!(
                "order balance m = n - 1 ({} = {} - 1) leaves a residue at infinity",
                self.m_sum(),
                self.n_sum()
            ));
        }
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        let all_finite = self.a0.iter().chain(&self.b0).all(finite)
            && self.paths.iter().all(|p| finite(&p.start) && finite(&p.delta));
        if !all_finite {
            return bad("parameters and paths must be finite".into());
        }
        let g = self.gauge(&self.a0, &self.b0);
        if g.norm() >= GAUGE_TOL {
            return bad(format!(
                "normalization sum((m_l - 1) a_l) - sum((n_j + 1) b_j) = 0 violated: residual {g}"
            ));
        }
        let pts: Vec<C64> = self.a0.iter().chain(&self.b0).copied().collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i] == pts[j] {
                    return bad(format!("parameters {i} and {j} coincide at {}", pts[i]));
                }
            }
        }
        if self.base_point() == BasePoint::FirstCritical && self.paths[0] != TargetPath::constant(C64::new(0.0, 0.0))
        {
            return bad("the first critical value is the base point and must stay at 0".into());
        }
        Ok(())
    }
}

/// `H_k` as a jet at `a_k` of order `order`.
fn h_jet(k: usize, a: &[C64], b: &[C64], spec: &RationalFamilySpec, order: usize) -> Result<Jet> {
    let x0 = a[k];
    let mut num = Jet::constant(C64::new(1.0, 0.0), x0, order);
    for (bj, &nj) in b.iter().zip(&spec.n) {
        num = num.mul(&jet_from_linear(*bj, x0, order).pow(nj as i64 + 1)?);
    }
    let mut den = Jet::constant(C64::new(1.0, 0.0), x0, order);
    for (i, (ai, &mi)) in a.iter().zip(&spec.m).enumerate() {
        if i != k {
            den = den.mul(&jet_from_linear(*ai, x0, order).pow(mi as i64 - 1)?);
        }
    }
    num.div(&den)
}

fn check_collisions(a: &[C64], b: &[C64], scale: f64) -> Result<()> {
    let pts: Vec<C64> = a.iter().chain(b).copied().collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[i] - pts[j]).norm() < COLLISION_GAP * scale {
                return Err(Error::ParameterCollision(format!(
                    "parameters {i} and {j} met near {}",
                    pts[i]
                )));
            }
        }
    }
    Ok(())
}

/// Velocities `(ȧ, ḃ)` of critical points and poles for critical-value
/// velocities `adot`.
pub fn rational_rhs(
    state: &RationalFamilyState,
    adot: &[C64],
    spec: &RationalFamilySpec,
) -> Result<(Vec<C64>, Vec<C64>)> {
    let (a, b) = (&state.a, &state.b);
    if adot.len() != a.len() {
        return Err(Error::InvalidArgument(format!(
            "{} critical-value velocities for {} critical points",
            adot.len(),
            a.len()
        )));
    }
    check_collisions(a, b, spec.scale())?;
    let order = spec.m.iter().copied().max().unwrap_or(2) as usize - 1;
    let zero = C64::new(0.0, 0.0);
    let mut da = vec![zero; a.len()];
    let mut db = vec![zero; b.len()];
    for k in 0..a.len() {
        if adot[k] == zero {
            continue;
        }
        let mk = spec.m[k] as usize;
        let h = h_jet(k, a, b, spec, order)?;
        da[k] += h.coeffs[mk - 1] * adot[k];
        for (l, dal) in da.iter_mut().enumerate() {
            if l != k {
                let g = h.div(&jet_from_linear(a[l], a[k], order))?;
                *dal += g.coeffs[mk - 2] * adot[k];
            }
        }
        for (j, dbj) in db.iter_mut().enumerate() {
            let i = h.div(&jet_from_linear(b[j], a[k], order))?;
            *dbj += i.coeffs[mk - 2] * adot[k];
        }
    }
    Ok((da, db))
}

/// Output of [`solve_rational_family`].
#[derive(Clone, Debug)]
pub struct RationalSolution {
    /// States at the requested checkpoints (every accepted step if none).
    pub checkpoints: Vec<RationalFamilyState>,
    pub end: RationalFamilyState,
    /// Largest normalization residual seen after any accepted step, before
    /// re-centering.
    pub max_gauge_drift: f64,
    pub accepted_steps: usize,
}

fn unpack(t: f64, y: &[C64], m: usize) -> RationalFamilyState {
    RationalFamilyState {
        t,
        a: y[..m].to_vec(),
        b: y[m..].to_vec(),
    }
}

/// Integrates the critical-point flow from `t = 0` to `t = 1`.
pub fn solve_rational_family(
    spec: &RationalFamilySpec,
    cfg: &IntegratorConfig,
    checkpoints: &[f64],
) -> Result<RationalSolution> {
    spec.validate()?;
    let m = spec.m.len();
    let adot: Vec<C64> = spec.paths.iter().map(|p| p.derivative()).collect();
    let y0: Vec<C64> = spec.a0.iter().chain(&spec.b0).copied().collect();
    let rhs = |t: f64, y: &[C64]| -> Result<Vec<C64>> {
        let (da, db) = rational_rhs(&unpack(t, y, m), &adot, spec)?;
        Ok(da.into_iter().chain(db).collect())
    };
    let denom = (spec.m_sum() - spec.n_sum()) as f64;
    let mut drift: f64 = 0.0;
    let hook = |_t: f64, y: &mut Vec<C64>| {
        let g = spec.gauge(&y[..m], &y[m..]);
        drift = drift.max(g.norm());
        if denom != 0.0 {
            let delta = g / denom;
            for v in y.iter_mut() {
                *v -= delta;
            }
        }
    };
    let traj = integrate_with_hook(rhs, &y0, (0.0, 1.0), cfg, checkpoints, hook)?;
    Ok(RationalSolution {
        checkpoints: traj.samples.iter().map(|s| unpack(s.t, &s.y, m)).collect(),
        end: unpack(traj.end.t, &traj.end.y, m),
        max_gauge_drift: drift,
        accepted_steps: traj.accepted_steps,
    })
}

/// `R′` at `z`, optionally minus one.
fn integrand(z: C64, state: &RationalFamilyState, spec: &RationalFamilySpec, minus_one: bool) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for (a, &m) in state.a.iter().zip(&spec.m) {
        v *= (z - a).powi(m as i32 - 1);
    }
    for (b, &n) in state.b.iter().zip(&spec.n) {
        v /= (z - b).powi(n as i32 + 1);
    }
    if minus_one {
        v - 1.0
    } else {
        v
    }
}

/// A polyline from `start` to `end` that keeps at least `clearance` from
/// every point in `avoid`, found by detouring around the nearest offender.
pub fn route_polyline(start: C64, end: C64, avoid: &[C64], clearance: f64) -> Result<Vec<C64>> {
    fn go(start: C64, end: C64, avoid: &[C64], clearance: f64, depth: u32) -> Option<Vec<C64>> {
        let offender = avoid
            .iter()
            .map(|&p| (segment_distance(p, start, end), p))
            .filter(|&(d, _)| d < clearance)
            .min_by(|x, y| x.0.total_cmp(&y.0));
        let Some((_, p)) = offender else {
            return Some(vec![start, end]);
        };
        if depth == 0 || (p - start).norm() < clearance || (p - end).norm() < clearance {
            return None;
        }
        let dir = end - start;
        let normal = C64::new(0.0, 1.0) * dir / dir.norm();
        for sign in [1.0, -1.0] {
            let w = p + normal * (2.0 * clearance * sign);
            if let (Some(mut first), Some(second)) = (
                go(start, w, avoid, clearance, depth - 1),
                go(w, end, avoid, clearance, depth - 1),
            ) {
                first.pop();
                first.extend(second);
                return Some(first);
            }
        }
        None
    }
    go(start, end, avoid, clearance, 6)
        .ok_or_else(|| Error::ContourBlocked(format!("no pole-free route from {start} to {end}")))
}

/// Clearance kept from the poles: a tenth of the parameter spread, reduced
/// when an endpoint itself lies closer to a pole.
fn clearance_for(endpoints: &[C64], poles: &[C64], scale: f64) -> f64 {
    let mut c = 0.1 * scale;
    for &e in endpoints {
        for &p in poles {
            c = c.min(0.5 * (e - p).norm());
        }
    }
    c
}

/// `∫_∞^P R′` (or `∫_∞^P (R′ − 1)`) from the Laurent series of `R′` at infinity.
fn tail_from_infinity(p: C64, state: &RationalFamilyState, spec: &RationalFamilySpec, regularized: bool) -> Result<C64> {
    // R′(ζ) = ζ^{m−n} G(1/ζ),  G(u) = Π(1 − a u)^{m−1} / Π(1 − b u)^{n+1}.
    let zero = C64::new(0.0, 0.0);
    let mut g = Jet::constant(C64::new(1.0, 0.0), zero, TAIL_ORDER);
    for (a, &m) in state.a.iter().zip(&spec.m) {
        // 1 − a u = −a (u − 1/a); the jet of (1 − a u) at u = 0 is [1, −a].
        let mut lin = Jet::constant(C64::new(1.0, 0.0), zero, TAIL_ORDER);
        lin.coeffs[1] = -a;
        g = g.mul(&lin.pow(m as i64 - 1)?);
    }
    for (b, &n) in state.b.iter().zip(&spec.n) {
        let mut lin = Jet::constant(C64::new(1.0, 0.0), zero, TAIL_ORDER);
        lin.coeffs[1] = -b;
        g = g.div(&lin.pow(n as i64 + 1)?)?;
    }
    let shift = spec.m_sum() - spec.n_sum();
    let mut acc = zero;
    for (k, ck) in g.coeffs.iter().enumerate() {
        let power = shift - k as i64;
        if regularized && k == 0 {
            continue;
        }
        if power == -1 {
            // Residue term; zero under the normalization.
            continue;
        }
        acc += ck * p.powi((power + 1) as i32) / (power + 1) as f64;
    }
    Ok(acc)
}

/// Critical values `A_l = R(a_l)` by quadrature along pole-avoiding polylines.
pub fn critical_values_quadrature(
    state: &RationalFamilyState,
    spec: &RationalFamilySpec,
    tol: f64,
) -> Result<Vec<C64>> {
    critical_values_with_waypoints(state, spec, tol, &[])
}

/// As [`critical_values_quadrature`], with the route from the base point to
/// each critical point forced through `waypoints` (each leg is still
/// detoured around the poles).
pub fn critical_values_with_waypoints(
    state: &RationalFamilyState,
    spec: &RationalFamilySpec,
    tol: f64,
    waypoints: &[C64],
) -> Result<Vec<C64>> {
    if state.a.len() != spec.m.len() || state.b.len() != spec.n.len() {
        return Err(Error::InvalidArgument("state does not match the family spec".into()));
    }
    let base = spec.base_point();
    let regularized = base == BasePoint::Regularized;
    let poles = &state.b;
    let radius = state
        .a
        .iter()
        .chain(poles.iter())
        .chain(waypoints.iter())
        .map(|z| z.norm())
        .fold(1.0f64, f64::max)
        * 4.0;
    let mut f = |z: C64| Ok(integrand(z, state, spec, regularized));
    let mut out = Vec::with_capacity(state.a.len());
    for (l, &al) in state.a.iter().enumerate() {
        let (start, offset) = match base {
            BasePoint::FirstCritical => {
                if l == 0 {
                    out.push(C64::new(0.0, 0.0));
                    continue;
                }
                (state.a[0], C64::new(0.0, 0.0))
            }
            BasePoint::Infinity | BasePoint::Regularized => {
                let dir = if al.norm() > 0.0 { al / al.norm() } else { C64::new(1.0, 0.0) };
                let p = dir * radius;
                let tail = tail_from_infinity(p, state, spec, regularized)?;
                (p, tail + if regularized { al } else { C64::new(0.0, 0.0) })
            }
        };
        let mut stops = vec![start];
        stops.extend_from_slice(waypoints);
        stops.push(al);
        let clearance = clearance_for(&stops, poles, spec.scale());
        let mut route = vec![start];
        for leg in stops.windows(2) {
            let seg = route_polyline(leg[0], leg[1], poles, clearance)?;
            route.extend_from_slice(&seg[1..]);
        }
        let integral = integrate_polyline(&mut f, &route, tol)?;
        out.push(offset + integral);
    }
    Ok(out)
}
