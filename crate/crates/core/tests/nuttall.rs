mod common;

use std::f64::consts::PI;

use common::{c, rng};
use rand::Rng;
use uniformize_core::nuttall::{
    alpha_from_triangle, classify_sheets, critical_points, g_value, is_real_mod_lattice, normalize_triangle, psi,
    psi_root, rot, sc_constant, schwarz_christoffel_inverse, sheet_components, sheet_label, speckle_count,
    u_value, uniformizer_pi, GridSpec, NuttallContext, SheetField, COMPONENT_MARGIN, Z1,
};
use uniformize_core::C64;

const TOP: f64 = 0.866_025_403_784_438_6;

fn ctx(alpha: f64) -> NuttallContext {
    NuttallContext::real(alpha).unwrap()
}

#[test]
fn u_is_doubly_periodic() {
    let mut r = rng(31);
    for alpha in [0.3, 0.5, 0.57735, 0.6] {
        let x = ctx(alpha);
        let lat = *x.lattice();
        let mut checked = 0;
        while checked < 50 {
            let z = c(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let Ok(u) = u_value(z, &x) else { continue };
            if u.abs() > 1e3 {
                continue;
            }
            for w in [lat.omega1(), lat.omega2()] {
                assert!((u_value(z + w, &x).unwrap() - u).abs() < 1e-9, "alpha {alpha} at {z}");
            }
            checked += 1;
        }
    }
}

#[test]
fn u_is_real_symmetric() {
    let mut r = rng(32);
    let x = ctx(0.45);
    for _ in 0..30 {
        let z = c(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let u = u_value(z, &x).unwrap();
        assert!((u_value(z.conj(), &x).unwrap() - u).abs() < 1e-10);
    }
}

#[test]
fn g_vanishes_on_real_axis() {
    for alpha in [0.2, 0.5, 0.57735, 0.7] {
        let x = ctx(alpha);
        for k in 0..20 {
            let t = -3.0 + 0.31 * k as f64;
            assert!(g_value(c(t, 0.0), &x).unwrap().abs() < 1e-10, "alpha {alpha} x {t}");
        }
    }
}

#[test]
fn psi_rises_then_falls() {
    let x = ctx(0.5);
    assert!(psi(0.0, &x).unwrap().abs() < 1e-12);
    assert!(psi(0.3, &x).unwrap() > 0.0);
    let n = 200;
    let vals: Vec<f64> = (0..=n).map(|k| psi(TOP * k as f64 / n as f64, &x).unwrap()).collect();
    let slopes: Vec<f64> = vals.windows(2).map(|w| w[1] - w[0]).collect();
    let changes = slopes.windows(2).filter(|s| s[0].signum() != s[1].signum()).count();
    assert_eq!(changes, 1);
    assert!(slopes[0] > 0.0 && *slopes.last().unwrap() < 0.0);
    assert!((psi_root(&x).unwrap() - 3f64.sqrt() / 3.0).abs() < 1e-8);
}

#[test]
fn two_critical_points_counting_multiplicity() {
    for k in 1..=16 {
        let alpha = 0.05 * k as f64;
        if alpha >= TOP {
            break;
        }
        let x = ctx(alpha);
        let roots = critical_points(alpha, &x).unwrap();
        assert_eq!(roots.len(), 2, "alpha {alpha}: {roots:?}");
    }
    let x = ctx(Z1);
    let roots = critical_points(Z1, &x).unwrap();
    assert_eq!(roots.len(), 2);
    assert!((roots[0] - roots[1]).norm() < 1e-4);
}

#[test]
fn critical_point_regimes() {
    let x = ctx(0.5);
    let roots = critical_points(0.5, &x).unwrap();
    assert!(roots.iter().all(|&z| !is_real_mod_lattice(z, &x, 1e-6)));
    let x = ctx(0.6);
    let roots = critical_points(0.6, &x).unwrap();
    assert!(roots.iter().all(|&z| is_real_mod_lattice(z, &x, 1e-8)));
    // symmetric about −α/2 + √3/2 modulo √3
    let center = -0.3 + TOP;
    let per = 3f64.sqrt();
    let offs: Vec<f64> = roots.iter().map(|z| (z.re - center).rem_euclid(per)).collect();
    assert!((offs[0] + offs[1] - per).abs() < 1e-8 || (offs[0] + offs[1]).abs() < 1e-8, "{offs:?}");
}

#[test]
fn triangle_normalization() {
    let w = rot();
    let t = normalize_triangle(c(1.0, 0.0), w, w.conj()).unwrap();
    assert!(t.z0.norm() < 1e-12);
    let (s, sh) = (C64::from_polar(2.5, 0.7), c(-3.0, 1.2));
    let t = normalize_triangle(s + sh, s * w + sh, s * w.conj() + sh).unwrap();
    assert!(t.z0.norm() < 1e-10);
    let mut r = rng(33);
    for _ in 0..20 {
        let pts: Vec<C64> = (0..3).map(|_| c(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0))).collect();
        let Ok(t) = normalize_triangle(pts[0], pts[1], pts[2]) else { continue };
        assert!((t.map(t.a1) - 1.0).norm() < 1e-12);
        assert!((t.map(t.a2) - w).norm() < 1e-12);
        assert!((t.map(t.a3) - w.conj()).norm() < 1e-12);
        assert!((t.image_of_infinity() - t.z0).norm() < 1e-10 * t.z0.norm().max(1.0));
        assert!(t.z0.norm() < 1.0);
    }
    let e = normalize_triangle(c(0.0, 0.0), c(1.0, 1.0), c(2.0, 2.0)).unwrap_err();
    assert_eq!(e.name(), "DegenerateTriangle");
}

#[test]
fn uniformizer_values() {
    let x = ctx(0.5);
    assert!((uniformizer_pi(c(0.0, 0.0), &x).unwrap() - 1.0).norm() < 1e-10);
    assert!((sc_constant() + 0.326807).abs() < 1e-6);
    assert!((schwarz_christoffel_inverse(c(0.0, 0.0), &x).unwrap() - Z1).norm() < 1e-14);
    let mut r = rng(34);
    for _ in 0..10 {
        let w = C64::from_polar(r.gen_range(0.0..0.9), r.gen_range(-PI..PI));
        let z = schwarz_christoffel_inverse(w, &x).unwrap();
        assert!((uniformizer_pi(z, &x).unwrap() - w).norm() < 1e-6, "{w}");
    }
    let lat = *x.lattice();
    let z = c(0.21, 0.37);
    let p = uniformizer_pi(z, &x).unwrap();
    assert!((uniformizer_pi(z + lat.omega1(), &x).unwrap() - p).norm() < 1e-9 * p.norm());
    assert_eq!(uniformizer_pi(c(-Z1, 0.0), &x).unwrap_err().name(), "PoleHit");
}

#[test]
fn alpha_solves_uniformizer_equation() {
    let x = ctx(0.5);
    for pts in [
        [c(0.0, 0.0), c(2.0, 0.0), c(0.7, 1.1)],
        [c(-1.0, 0.3), c(1.5, -0.2), c(0.2, 2.5)],
    ] {
        let t = normalize_triangle(pts[0], pts[1], pts[2]).unwrap();
        let alpha = alpha_from_triangle(&t, &x).unwrap();
        assert!((uniformizer_pi(alpha, &x).unwrap() - t.z0).norm() < 1e-10);
        let from = NuttallContext::from_triangle(&t).unwrap();
        assert!((from.alpha - alpha).norm() < 1e-12);
    }
}

fn field(alpha: f64, n: usize) -> SheetField {
    classify_sheets(&ctx(alpha), &GridSpec::standard(n)).unwrap()
}

/// Largest distance of a long polyline from `Im z = y0`, over the polylines
/// of `Γ₁₂` that stay within two cells of that line.
fn horizontal_line_deviation(f: &SheetField, y0: f64) -> Option<f64> {
    let g = &f.grid;
    let band = 2.0 * g.dy();
    let width = g.xmax - g.xmin;
    f.contour((1, 2))?
        .polylines
        .iter()
        .filter(|l| l.iter().all(|p| (p.im - y0).abs() < band))
        .filter(|l| {
            let (lo, hi) = l.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.re), b.max(p.re)));
            hi - lo > 0.9 * width
        })
        .map(|l| l.iter().map(|p| (p.im - y0).abs()).fold(0.0, f64::max))
        .reduce(f64::min)
}

#[test]
fn sheet_field_at_half() {
    let f = field(0.5, 400);
    for y0 in [0.0, 1.5] {
        let dev = horizontal_line_deviation(&f, y0).expect("line present");
        assert!(dev < 2.0 * f.grid.dy(), "y0 = {y0}: {dev}");
    }
    assert_eq!(speckle_count(&f), 0);
    for s in 0..3u8 {
        assert!(f.labels.contains(&s));
    }
}

#[test]
fn no_speckles_across_alpha() {
    for alpha in [0.3, 0.6, 0.7] {
        assert_eq!(speckle_count(&field(alpha, 400)), 0, "alpha {alpha}");
    }
}

#[test]
fn rotation_equivariance() {
    let f = field(0.6, 400);
    let x = ctx(0.6);
    let mut r = rng(35);
    let (nx, ny) = (f.grid.nx, f.grid.ny);
    let mut bad = 0;
    for _ in 0..1000 {
        let (i, j) = (r.gen_range(1..nx - 1), r.gen_range(1..ny - 1));
        let z = f.grid.node(i, j);
        let l0 = f.label(i, j);
        let l1 = sheet_label(z * rot(), &x).unwrap();
        let l2 = sheet_label(z * rot().conj(), &x).unwrap();
        let mut seen = [false; 3];
        for l in [l0, l1, l2] {
            seen[l as usize] = true;
        }
        if !seen.iter().all(|&s| s) {
            bad += 1;
            let near_contour = (j - 1..=j + 1).any(|jj| (i - 1..=i + 1).any(|ii| f.label(ii, jj) != l0));
            assert!(near_contour || f.ties[j * nx + i] != 0, "node ({i}, {j})");
        }
    }
    assert!(bad <= 1, "{bad} failures");
}

#[test]
fn partition_is_exhaustive_and_disjoint() {
    let x = ctx(0.55);
    let grid = GridSpec {
        nx: 40,
        ny: 40,
        ..GridSpec::standard(40)
    };
    let f = classify_sheets(&x, &grid).unwrap();
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let z = grid.node(i, j);
            let u = [u_value(z, &x).unwrap(), u_value(z * rot(), &x).unwrap(), u_value(z * rot().conj(), &x).unwrap()];
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let classes = [u[a] > u[b], u[a] < u[b], (u[a] - u[b]).abs() < 1e-12];
                assert!(classes.iter().filter(|&&c| c).count() >= 1);
                assert!(!(classes[0] && classes[1]));
            }
            let above = u[1..].iter().filter(|&&v| v > u[0]).count() as u8;
            assert_eq!(f.label(i, j), above);
        }
    }
}

#[test]
fn sheet_two_connectivity() {
    assert_eq!(sheet_components(&ctx(0.5), 2, 240, COMPONENT_MARGIN).unwrap(), 1);
    assert_eq!(sheet_components(&ctx(0.6), 2, 240, COMPONENT_MARGIN).unwrap(), 3);
}

#[test]
fn bad_alpha_rejected() {
    let x = ctx(0.5);
    assert_eq!(critical_points(0.9, &x).unwrap_err().name(), "InvalidArgument");
    assert_eq!(u_value(c(0.5, 0.0), &x).unwrap_err().name(), "SingularPoint");
}

#[test]
fn sheet_one_component_range() {
    // soft check: counts between four and six at 400² nodes
    for alpha in [0.5, 0.55, 0.6] {
        let n = sheet_components(&ctx(alpha), 1, 400, COMPONENT_MARGIN).unwrap();
        assert!((4..=6).contains(&n), "alpha {alpha}: {n}");
    }
}
