//! Truncated Taylor series ("jets") of analytic germs.

use crate::error::{Error, Result};
use crate::C64;

/// Smallest constant term accepted as a divisor.
const MIN_DIVISOR: f64 = 1e-300;

/// `coeffs[j] = f^{(j)}(center) / j!` for `j = 0..=K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub center: C64,
    pub coeffs: Vec<C64>,
}

impl Jet {
    /// The constant germ `value` truncated at order `order`.
    pub fn constant(value: C64, center: C64, order: usize) -> Jet {
        let mut coeffs = vec![C64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Jet { center, coeffs }
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        jet_mul(self, other)
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        jet_div(self, other)
    }

    pub fn pow(&self, p: i64) -> Result<Jet> {
        jet_pow_int(self, p)
    }

    /// `j!·coeffs[j]`, the `j`-th derivative at the center.
    pub fn deriv(&self, j: usize) -> C64 {
        jet_deriv(self, j)
    }

    pub fn scale(&self, s: C64) -> Jet {
        Jet {
            center: self.center,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let k = self.order().min(other.order());
        Jet {
            center: self.center,
            coeffs: (0..=k).map(|i| self.coeffs[i] + other.coeffs[i]).collect(),
        }
    }
}

/// The germ of `x − a` at `center`, truncated at order `order`.
pub fn jet_from_linear(a: C64, center: C64, order: usize) -> Jet {
    let mut j = Jet::constant(center - a, center, order);
    if order >= 1 {
        j.coeffs[1] = C64::new(1.0, 0.0);
    }
    j
}

/// Cauchy product truncated at the smaller of the two orders.
pub fn jet_mul(a: &Jet, b: &Jet) -> Jet {
    let k = a.order().min(b.order());
    let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
    for (i, ai) in a.coeffs.iter().take(k + 1).enumerate() {
        for (j, bj) in b.coeffs.iter().take(k + 1 - i).enumerate() {
            coeffs[i + j] += ai * bj;
        }
    }
    Jet {
        center: a.center,
        coeffs,
    }
}

/// Quotient `a / b`; needs a nonzero constant term in `b`.
pub fn jet_div(a: &Jet, b: &Jet) -> Result<Jet> {
    let b0 = b.coeffs[0];
    if b0.norm() <= MIN_DIVISOR {
        return Err(Error::DivisionByZeroGerm);
    }
    let k = a.order().min(b.order());
    let mut q = vec![C64::new(0.0, 0.0); k + 1];
    for n in 0..=k {
        let mut acc = a.coeffs[n];
        for j in 1..=n {
            acc -= b.coeffs[j] * q[n - j];
        }
        q[n] = acc / b0;
    }
    Ok(Jet {
        center: a.center,
        coeffs: q,
    })
}

/// Integer power by repeated squaring; negative exponents divide.
pub fn jet_pow_int(a: &Jet, p: i64) -> Result<Jet> {
    let one = Jet::constant(C64::new(1.0, 0.0), a.center, a.order());
    let mut result = one.clone();
    let mut base = a.clone();
    let mut e = p.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result = jet_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = jet_mul(&base, &base);
        }
    }
    if p < 0 {
        jet_div(&one, &result)
    } else {
        Ok(result)
    }
}

/// `f^{(j)}(center) = j!·coeffs[j]`; zero beyond the stored order.
pub fn jet_deriv(a: &Jet, j: usize) -> C64 {
    if j > a.order() {
        return C64::new(0.0, 0.0);
    }
    let fact: f64 = (1..=j).map(|i| i as f64).product();
    a.coeffs[j] * fact
}
