//! Adaptive 32-point Gauss–Legendre quadrature of complex integrands along
//! straight segments and polylines.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::C64;

const NODES: usize = 32;
const MAX_DEPTH: u32 = 40;

/// Nodes and weights on `[-1, 1]`, computed once by Newton iteration on `P₃₂`.
fn rule() -> &'static ([f64; NODES], [f64; NODES]) {
    static RULE: OnceLock<([f64; NODES], [f64; NODES])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES;
        let mut x = [0.0; NODES];
        let mut w = [0.0; NODES];
        for i in 0..n.div_ceil(2) {
            let mut r = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, r);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * r * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (r * p1 - p0) / (r * r - 1.0);
                let dr = p1 / dp;
                r -= dr;
                if dr.abs() < 1e-16 {
                    break;
                }
            }
            let wi = 2.0 / ((1.0 - r * r) * dp * dp);
            x[i] = -r;
            x[n - 1 - i] = r;
            w[i] = wi;
            w[n - 1 - i] = wi;
        }
        (x, w)
    })
}

/// Single-panel 32-point rule on the segment `[a, b]`.
pub fn gauss_legendre<F>(f: &mut F, a: C64, b: C64) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    let (x, w) = rule();
    let mid = (a + b) / 2.0;
    let half = (b - a) / 2.0;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..NODES {
        acc += f(mid + half * x[i])? * w[i];
    }
    Ok(acc * half)
}

/// Adaptive integral of `f` along the segment `[a, b]`, halving panels until
/// successive estimates agree to `tol·max(1, |I|)`.
pub fn integrate_segment<F>(f: &mut F, a: C64, b: C64, tol: f64) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    let whole = gauss_legendre(f, a, b)?;
    refine(f, a, b, whole, tol, 0)
}

fn refine<F>(f: &mut F, a: C64, b: C64, whole: C64, tol: f64, depth: u32) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    let m = (a + b) / 2.0;
    let left = gauss_legendre(f, a, m)?;
    let right = gauss_legendre(f, m, b)?;
    let split = left + right;
    if (split - whole).norm() <= tol * split.norm().max(1.0) {
        return Ok(split);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NoConvergence(format!(
            "quadrature on [{a}, {b}] did not settle"
        )));
    }
    Ok(refine(f, a, m, left, tol / 2.0, depth + 1)? + refine(f, m, b, right, tol / 2.0, depth + 1)?)
}

/// Sum of segment integrals along the polyline through `points`.
pub fn integrate_polyline<F>(f: &mut F, points: &[C64], tol: f64) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    let mut acc = C64::new(0.0, 0.0);
    for w in points.windows(2) {
        if w[0] != w[1] {
            acc += integrate_segment(f, w[0], w[1], tol)?;
        }
    }
    Ok(acc)
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a) * d.conj()).re / len2;
    (p - (a + d * s.clamp(0.0, 1.0))).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let (x, w) = rule();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn polynomial_exact() {
        let mut f = |z: C64| Ok(z.powi(7));
        let v = gauss_legendre(&mut f, C64::new(0.0, 0.0), C64::new(1.0, 1.0)).unwrap();
        let exact = C64::new(1.0, 1.0).powi(8) / 8.0;
        assert!((v - exact).norm() < 1e-13);
    }

    #[test]
    fn adaptive_exponential_along_polyline() {
        let mut f = |z: C64| Ok(z.exp());
        let pts = [C64::new(0.0, 0.0), C64::new(2.0, 0.0), C64::new(2.0, 3.0)];
        let v = integrate_polyline(&mut f, &pts, 1e-12).unwrap();
        let exact = C64::new(2.0, 3.0).exp() - 1.0;
        assert!((v - exact).norm() < 1e-11);
    }

    #[test]
    fn distance_to_segment() {
        let d = segment_distance(C64::new(0.5, 1.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        assert!((d - 1.0).abs() < 1e-15);
        let d = segment_distance(C64::new(3.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        assert!((d - 2.0).abs() < 1e-15);
    }
}
