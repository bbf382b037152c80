mod common;

use common::c;
use proptest::prelude::*;
use uniformize_core::dynamics::{
    integrate, integrate_fixed, jet_deriv, jet_div, jet_from_linear, jet_mul, jet_pow_int, IntegratorConfig, Jet,
    TargetPath,
};
use uniformize_core::{Result, C64};

const K: usize = 6;

fn jet_strategy() -> impl Strategy<Value = Jet> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), K + 1).prop_map(|v| Jet {
        center: c(0.3, -0.1),
        coeffs: v.into_iter().map(|(a, b)| c(a, b)).collect(),
    })
}

fn max_diff(a: &Jet, b: &Jet) -> f64 {
    let scale = a.coeffs.iter().chain(&b.coeffs).map(|z| z.norm()).fold(1.0, f64::max);
    a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multiplication_is_associative(a in jet_strategy(), b in jet_strategy(), d in jet_strategy()) {
        let l = jet_mul(&jet_mul(&a, &b), &d);
        let r = jet_mul(&a, &jet_mul(&b, &d));
        prop_assert!(max_diff(&l, &r) < 1e-12);
    }

    #[test]
    fn multiplication_distributes(a in jet_strategy(), b in jet_strategy(), d in jet_strategy()) {
        let l = jet_mul(&a, &b.add(&d));
        let r = jet_mul(&a, &b).add(&jet_mul(&a, &d));
        prop_assert!(max_diff(&l, &r) < 1e-12);
    }

    #[test]
    fn division_inverts_multiplication(a in jet_strategy(), mut b in jet_strategy()) {
        b.coeffs[0] += c(5.0, 0.0);
        let q = jet_div(&jet_mul(&a, &b), &b).unwrap();
        prop_assert!(max_diff(&q, &a) < 1e-12);
    }

    #[test]
    fn negative_power_is_reciprocal(mut a in jet_strategy(), p in 1i64..5) {
        a.coeffs[0] += c(4.0, 0.0);
        let prod = jet_mul(&jet_pow_int(&a, p).unwrap(), &jet_pow_int(&a, -p).unwrap());
        let one = Jet::constant(c(1.0, 0.0), a.center, K);
        prop_assert!(max_diff(&prod, &one) < 1e-12);
    }

    #[test]
    fn path_is_affine(sr in -5.0..5.0f64, si in -5.0..5.0f64, dr in -5.0..5.0f64, di in -5.0..5.0f64, t in 0.0..1.0f64) {
        let p = TargetPath::new(c(sr, si), c(dr, di));
        prop_assert!((p.at(t) - (c(sr, si) + t * c(dr, di))).norm() < 1e-12);
        prop_assert_eq!(p.derivative(), c(dr, di));
        prop_assert!((p.reversed().at(t) - p.at(1.0 - t)).norm() < 1e-12);
    }
}

/// `d^j/dx^j [(x − b)⁴ / (x − a)²]` at `x` by repeated quotient rule, written out by hand.
fn quotient_derivs(a: C64, b: C64, x: C64) -> [C64; 4] {
    let (u, v) = (x - b, x - a);
    // f = u⁴ v⁻²
    let f0 = u.powi(4) / v.powi(2);
    let f1 = 4.0 * u.powi(3) / v.powi(2) - 2.0 * u.powi(4) / v.powi(3);
    let f2 = 12.0 * u.powi(2) / v.powi(2) - 16.0 * u.powi(3) / v.powi(3) + 6.0 * u.powi(4) / v.powi(4);
    let f3 = 24.0 * u / v.powi(2) - 72.0 * u.powi(2) / v.powi(3) + 72.0 * u.powi(3) / v.powi(4)
        - 24.0 * u.powi(4) / v.powi(5);
    [f0, f1, f2, f3]
}

#[test]
fn quotient_matches_symbolic_derivatives() {
    let (a, b, x0) = (c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
    let num = jet_pow_int(&jet_from_linear(b, x0, 3), 4).unwrap();
    let den = jet_pow_int(&jet_from_linear(a, x0, 3), 2).unwrap();
    let q = jet_div(&num, &den).unwrap();
    for (j, want) in quotient_derivs(a, b, x0).iter().enumerate() {
        let got = jet_deriv(&q, j);
        assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "order {j}: {got} vs {want}");
    }
    for (a, b, x0) in [(c(0.3, 1.0), c(-0.7, 0.2), c(1.1, -0.4)), (c(2.0, -1.0), c(0.5, 0.5), c(-1.0, 0.3))] {
        let q = jet_div(
            &jet_pow_int(&jet_from_linear(b, x0, 3), 4).unwrap(),
            &jet_pow_int(&jet_from_linear(a, x0, 3), 2).unwrap(),
        )
        .unwrap();
        for (j, want) in quotient_derivs(a, b, x0).iter().enumerate() {
            assert!((jet_deriv(&q, j) - want).norm() < 1e-12 * want.norm().max(1.0));
        }
    }
}

#[test]
fn simple_germs() {
    let sq = jet_pow_int(&jet_from_linear(c(-1.0, 0.0), c(0.0, 0.0), 4), 2).unwrap();
    assert_eq!(sq.coeffs, vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let one = Jet::constant(c(1.0, 0.0), c(0.0, 0.0), 3);
    let geo = jet_div(&one, &jet_from_linear(c(1.0, 0.0), c(0.0, 0.0), 3).scale(c(-1.0, 0.0))).unwrap();
    for k in 0..=3 {
        assert!((geo.coeffs[k] - 1.0).norm() < 1e-15);
    }
    let zero = Jet::constant(c(0.0, 0.0), c(0.0, 0.0), 3);
    assert_eq!(jet_div(&one, &zero).unwrap_err().name(), "DivisionByZeroGerm");
}

fn rotation(_t: f64, y: &[C64]) -> Result<Vec<C64>> {
    Ok(vec![c(0.0, 1.0) * y[0]])
}

/// `y′ = λ y + sin t`, with closed form solution.
fn forced(lambda: C64) -> impl FnMut(f64, &[C64]) -> Result<Vec<C64>> {
    move |t, y| Ok(vec![lambda * y[0] + t.sin()])
}

fn forced_exact(lambda: C64, y0: C64, t: f64) -> C64 {
    // particular solution A sin t + B cos t with A = −λ/(λ²+1), B = −1/(λ²+1)
    let d = lambda * lambda + 1.0;
    let (a, b) = (-lambda / d, -1.0 / d);
    (y0 - b) * (lambda * t).exp() + a * t.sin() + b * t.cos()
}

#[test]
fn fixed_step_order_is_five() {
    let lambdas = [c(0.1, 1.0), c(-0.5, 2.0), c(0.3, -1.0), c(-1.0, 0.0), c(0.2, 3.0)];
    let mut ratios = Vec::new();
    for lambda in lambdas {
        let y0 = c(1.0, 0.5);
        let exact = forced_exact(lambda, y0, 1.0);
        let e1 = (integrate_fixed(forced(lambda), &[y0], (0.0, 1.0), 10).unwrap()[0] - exact).norm();
        let e2 = (integrate_fixed(forced(lambda), &[y0], (0.0, 1.0), 20).unwrap()[0] - exact).norm();
        ratios.push(e1 / e2);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!(mean >= 8.0, "{ratios:?}");
    assert!(ratios.iter().all(|&r| r > 16.0), "{ratios:?}");
}

#[test]
fn adaptive_error_tracks_tolerance() {
    let exact = c(1f64.cos(), 1f64.sin());
    let mut last = f64::INFINITY;
    for k in 6..=12 {
        let tol = 10f64.powi(-k);
        let cfg = IntegratorConfig {
            rel_tol: tol,
            abs_tol: tol,
            ..IntegratorConfig::default()
        };
        let err = (integrate(rotation, &[c(1.0, 0.0)], (0.0, 1.0), &cfg, &[]).unwrap().end.y[0] - exact).norm();
        assert!(err < 100.0 * tol, "tol {tol}: error {err}");
        assert!(err < last * 2.0);
        last = err;
    }
}

#[test]
fn rotation_endpoint() {
    let traj = integrate(rotation, &[c(1.0, 0.0)], (0.0, 1.0), &IntegratorConfig::default(), &[]).unwrap();
    assert!((traj.end.y[0] - c(1f64.cos(), 1f64.sin())).norm() < 1e-9);
}

#[test]
fn blow_up_is_step_underflow() {
    let sq = |_t: f64, y: &[C64]| Ok(vec![y[0] * y[0]]);
    let err = integrate(sq, &[c(2.0, 0.0)], (0.0, 1.0), &IntegratorConfig::default(), &[]).unwrap_err();
    assert_eq!(err.name(), "StepUnderflow");
}
