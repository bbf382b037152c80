//! Helpers shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uniformize_core::{make_lattice, Lattice, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A lattice with `|ω₁| ∈ [0.5, 2]`, `0.2 < |τ| < 5` and `Im τ > 0.05`.
pub fn random_lattice(r: &mut impl Rng) -> Lattice {
    loop {
        let w1 = C64::from_polar(r.gen_range(0.5..2.0), r.gen_range(-3.1..3.1));
        let tau = C64::from_polar(r.gen_range(0.2..5.0), r.gen_range(0.0..std::f64::consts::PI));
        if tau.im > 0.05 {
            return make_lattice(w1, w1 * tau).unwrap();
        }
    }
}

/// A point of the centered cell at least `margin·min_length` from the lattice.
pub fn random_point(r: &mut impl Rng, lat: &Lattice, margin: f64) -> C64 {
    loop {
        let z = lat.omega1() * r.gen_range(-0.5..0.5) + lat.omega2() * r.gen_range(-0.5..0.5);
        if lat.distance_to_lattice(z) > margin * lat.min_length() {
            return z;
        }
    }
}

pub fn random_complex(r: &mut impl Rng, radius: f64) -> C64 {
    c(r.gen_range(-radius..radius), r.gen_range(-radius..radius))
}

/// `|a − b| / max(1, |b|)`.
pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
