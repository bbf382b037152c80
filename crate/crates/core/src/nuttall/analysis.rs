//! The harmonic function `u`, the comparison function `g` and the critical
//! points of `g` in the symmetric case of real `α`.

use super::{rot, NuttallContext};
use crate::error::{Error, Result};
use crate::C64;

const SEED_GRID: usize = 12;
const NEWTON_ITERS: usize = 80;
/// Roots closer than this modulo the lattice are merged.
const DEDUP_TOL: f64 = 1e-5;
/// `|F′|` below this at a converged root marks a double root.
const DOUBLE_ROOT_SLOPE: f64 = 1e-3;

fn singular_check(z: C64, ctx: &NuttallContext) -> Result<()> {
    let lat = ctx.lattice();
    let eps = 1e-12 * lat.scale();
    for r in [C64::new(1.0, 0.0), rot(), rot().conj()] {
        if lat.distance_to_lattice(z - ctx.alpha * r) < eps {
            return Err(Error::SingularPoint(format!(
                "{z} is congruent to a rotation of alpha = {}",
                ctx.alpha
            )));
        }
    }
    Ok(())
}

/// `u(z) = −2ln|σ(z−α)| + ln|σ(z−e^{2πi/3}α)| + ln|σ(z−e^{−2πi/3}α)| − √3η₁Re(ᾱz)`,
/// doubly periodic on the hexagonal lattice.
pub fn u_value(z: C64, ctx: &NuttallContext) -> Result<f64> {
    singular_check(z, ctx)?;
    let opt = ctx.opt();
    let a = ctx.alpha;
    let ls = |w: C64| ctx.inv.ln_abs_sigma(w, &opt);
    let harm = -2.0 * ls(z - a)? + ls(z - rot() * a)? + ls(z - rot().conj() * a)?;
    Ok(harm - 3f64.sqrt() * ctx.eta1() * (a.conj() * z).re)
}

/// `g(z) = ln|σ(z−e^{−2πi/3}α)| − ln|σ(z−e^{2πi/3}α)| − η₁ Re(ᾱ(e^{−2πi/3} − e^{2πi/3})z)/√3`,
/// whose zero set is `Γ₁₂`. For real `α` the last term is `η₁α Im z`.
pub fn g_value(z: C64, ctx: &NuttallContext) -> Result<f64> {
    singular_check(z, ctx)?;
    let opt = ctx.opt();
    let a = ctx.alpha;
    let ls = |w: C64| ctx.inv.ln_abs_sigma(w, &opt);
    let lin = (3f64.sqrt() / 3.0) * ctx.eta1() * (a.conj() * (rot().conj() - rot()) * z).re;
    Ok(ls(z - rot().conj() * a)? - ls(z - rot() * a)? - lin)
}

fn require_symmetric(alpha: f64) -> Result<()> {
    let top = 3f64.sqrt() / 2.0;
    if !(alpha > 0.0 && alpha < top) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} must lie in (0, sqrt(3)/2)"
        )));
    }
    Ok(())
}

/// `F(z) = ζ(z − e^{−2πi/3}α) − ζ(z − e^{2πi/3}α) + iη₁α` and `F′(z)`.
fn crit_eq(z: C64, alpha: f64, ctx: &NuttallContext) -> Result<(C64, C64)> {
    let opt = ctx.opt();
    let p = rot().conj() * alpha;
    let q = rot() * alpha;
    let (wp_p, _, z_p) = ctx.inv.wp_wpp_zeta(z - p, &opt)?;
    let (wp_q, _, z_q) = ctx.inv.wp_wpp_zeta(z - q, &opt)?;
    let f = z_p - z_q + C64::new(0.0, ctx.eta1() * alpha);
    Ok((f, wp_q - wp_p))
}

/// Representative with lattice coordinates in `[−ε, 1 − ε)`.
fn canonical(z: C64, ctx: &NuttallContext) -> C64 {
    let lat = ctx.lattice();
    let (s, t) = lat.coords(z);
    let shift = |x: f64| (x + 1e-9).floor();
    z - lat.point(shift(s) as i64, shift(t) as i64)
}

/// Whether `z` is congruent to a real number modulo the lattice.
pub fn is_real_mod_lattice(z: C64, ctx: &NuttallContext, tol: f64) -> bool {
    let (_, t) = ctx.lattice().coords(z);
    let per = ctx.lattice().omega2().im;
    (t - t.round()).abs() * per < tol
}

/// Critical points of `g` for real `α ∈ (0, √3/2)`: the solutions of
/// `ζ(z − e^{−2πi/3}α) − ζ(z − e^{2πi/3}α) + iη₁α = 0` in one period cell,
/// listed with multiplicity (a double root appears twice).
pub fn critical_points(alpha: f64, ctx: &NuttallContext) -> Result<Vec<C64>> {
    require_symmetric(alpha)?;
    let lat = *ctx.lattice();
    let poles = [rot().conj() * alpha, rot() * alpha];
    let mut roots: Vec<(C64, bool)> = Vec::new();
    for i in 0..SEED_GRID {
        for j in 0..SEED_GRID {
            let s = (i as f64 + 0.5) / SEED_GRID as f64;
            let t = (j as f64 + 0.5) / SEED_GRID as f64;
            let mut z = lat.omega1() * s + lat.omega2() * t;
            if poles.iter().any(|p| lat.distance_to_lattice(z - p) < 1e-6) {
                continue;
            }
            let mut found = None;
            for _ in 0..NEWTON_ITERS {
                let Ok((f, df)) = crit_eq(z, alpha, ctx) else { break };
                if f.norm() < 1e-13 {
                    found = Some(df.norm() < DOUBLE_ROOT_SLOPE);
                    break;
                }
                if df.norm() == 0.0 {
                    break;
                }
                let mut step = f / df;
                let cap = 0.25 * lat.min_length();
                if step.norm() > cap {
                    step *= cap / step.norm();
                }
                z -= step;
                if step.norm() < 1e-15 {
                    found = Some(df.norm() < DOUBLE_ROOT_SLOPE);
                    break;
                }
            }
            let Some(double) = found else { continue };
            let z = canonical(z, ctx);
            if !roots.iter().any(|(r, _)| lat.distance_to_lattice(z - r) < DEDUP_TOL) {
                roots.push((z, double));
            }
        }
    }
    roots.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut out = Vec::new();
    for (z, double) in roots {
        out.push(z);
        if double {
            out.push(z);
        }
    }
    Ok(out)
}

/// `ψ(α) = Im ζ((√3/2)(1 − iα)) − η₁α/2`.
pub fn psi(alpha: f64, ctx: &NuttallContext) -> Result<f64> {
    let top = 3f64.sqrt() / 2.0;
    if !(0.0..=top).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} must lie in [0, sqrt(3)/2]"
        )));
    }
    let z = C64::new(top, -top * alpha);
    Ok(ctx.inv.zeta(z, &ctx.opt())?.im - ctx.eta1() * alpha / 2.0)
}

/// The zero of `ψ` in `(0, √3/2]`, bisected to `1e−12`.
pub fn psi_root(ctx: &NuttallContext) -> Result<f64> {
    let top = 3f64.sqrt() / 2.0;
    let n = 200;
    let mut prev = (top / n as f64, psi(top / n as f64, ctx)?);
    for k in 2..=n {
        let a = top * k as f64 / n as f64;
        let v = psi(a, ctx)?;
        if prev.1 > 0.0 && v <= 0.0 {
            let (mut lo, mut hi) = (prev.0, a);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if psi(mid, ctx)? > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        prev = (a, v);
    }
    Err(Error::NoConvergence("psi has no sign change on (0, sqrt(3)/2]".into()))
}
