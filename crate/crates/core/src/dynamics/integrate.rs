//! Dormand–Prince 5(4) integration of complex ODE systems `y′ = f(t, y)`.

use crate::error::{Error, Result};
use crate::C64;

/// Step-size and work limits for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            initial_step: 1e-3,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.initial_step > 0.0
            && self.max_steps > 0
            && self.rel_tol.is_finite()
            && self.abs_tol.is_finite()
            && self.initial_step.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "integrator settings must be positive and finite: {self:?}"
            )))
        }
    }
}

/// One recorded state.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub y: Vec<C64>,
}

/// Result of an integration: the requested samples plus the final state.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// States at the requested checkpoints, or at every accepted step
    /// (starting with `t0`) when no checkpoints were requested.
    pub samples: Vec<Sample>,
    pub end: Sample,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

// Dormand–Prince tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Continuous extension.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - BETA * 0.75;

fn axpy(y: &[C64], h: f64, terms: &[(f64, &[C64])]) -> Vec<C64> {
    let mut out = y.to_vec();
    for &(c, k) in terms {
        let s = h * c;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += ki * s;
        }
    }
    out
}

struct Step {
    y1: Vec<C64>,
    k1: Vec<C64>,
    k7: Vec<C64>,
    err: Vec<C64>,
    dense: Vec<C64>,
}

fn dopri_step<F>(rhs: &mut F, t: f64, y: &[C64], k1: &[C64], h: f64) -> Result<Step>
where
    F: FnMut(f64, &[C64]) -> Result<Vec<C64>>,
{
    let call = |rhs: &mut F, t: f64, y: &[C64]| -> Result<Vec<C64>> {
        rhs(t, y).map_err(|e| match e {
            Error::RhsFailure { .. } => e,
            other => Error::RhsFailure {
                t,
                source: Box::new(other),
            },
        })
    };
    let k2 = call(rhs, t + C2 * h, &axpy(y, h, &[(A21, k1)]))?;
    let k3 = call(rhs, t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = call(rhs, t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = call(
        rhs,
        t + C5 * h,
        &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = call(
        rhs,
        t + h,
        &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    )?;
    let y1 = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = call(rhs, t + h, &y1)?;
    let zero = vec![C64::new(0.0, 0.0); y.len()];
    let err = axpy(
        &zero,
        h,
        &[(E1, k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
    );
    let dense = axpy(
        &zero,
        h,
        &[(D1, k1), (D3, &k3), (D4, &k4), (D5, &k5), (D6, &k6), (D7, &k7)],
    );
    Ok(Step {
        y1,
        k1: k1.to_vec(),
        k7,
        err,
        dense,
    })
}

/// Fourth-order interpolant on `[t, t + h]` at fraction `theta`.
fn interpolate(y0: &[C64], s: &Step, h: f64, theta: f64) -> Vec<C64> {
    let th1 = 1.0 - theta;
    (0..y0.len())
        .map(|i| {
            let r2 = s.y1[i] - y0[i];
            let r3 = s.k1[i] * h - r2;
            let r4 = r2 - s.k7[i] * h - r3;
            y0[i] + (r2 + (r3 + (r4 + s.dense[i] * th1) * theta) * th1) * theta
        })
        .collect()
}

fn error_norm(y0: &[C64], y1: &[C64], err: &[C64], cfg: &IntegratorConfig) -> f64 {
    if y0.is_empty() {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..y0.len() {
        let sc = cfg.abs_tol + cfg.rel_tol * y0[i].norm().max(y1[i].norm());
        let r = err[i].norm() / sc;
        acc += r * r;
    }
    let e = (acc / y0.len() as f64).sqrt();
    if e.is_finite() {
        e
    } else {
        f64::INFINITY
    }
}

fn all_finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Adaptive Dormand–Prince integration from `t0` to `t1`.
///
/// `checkpoints` are sampled by dense output; when empty, every accepted
/// step is recorded. See [`integrate_with_hook`] for post-step projections.
pub fn integrate<F>(
    rhs: F,
    y0: &[C64],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
    checkpoints: &[f64],
) -> Result<Trajectory>
where
    F: FnMut(f64, &[C64]) -> Result<Vec<C64>>,
{
    integrate_with_hook(rhs, y0, t_span, cfg, checkpoints, |_, _| {})
}

/// As [`integrate`], calling `on_accept(t, y)` after every accepted step;
/// the hook may modify the state in place.
pub fn integrate_with_hook<F, H>(
    mut rhs: F,
    y0: &[C64],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
    checkpoints: &[f64],
    mut on_accept: H,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[C64]) -> Result<Vec<C64>>,
    H: FnMut(f64, &mut Vec<C64>),
{
    cfg.validate()?;
    let (t0, t1) = t_span;
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "integration interval [{t0}, {t1}] must have t1 > t0"
        )));
    }
    if let Some(bad) = checkpoints.iter().find(|&&c| !(c >= t0 && c <= t1)) {
        return Err(Error::InvalidArgument(format!(
            "checkpoint {bad} outside [{t0}, {t1}]"
        )));
    }
    // Checkpoints are filled in time order, then reported in request order.
    let mut order: Vec<usize> = (0..checkpoints.len()).collect();
    order.sort_by(|&a, &b| checkpoints[a].total_cmp(&checkpoints[b]));
    let mut filled: Vec<Option<Vec<C64>>> = vec![None; checkpoints.len()];
    let mut next_cp = 0;

    let record_all = checkpoints.is_empty();
    let mut samples = Vec::new();
    if record_all {
        samples.push(Sample {
            t: t0,
            y: y0.to_vec(),
        });
    }
    while next_cp < order.len() && checkpoints[order[next_cp]] <= t0 {
        filled[order[next_cp]] = Some(y0.to_vec());
        next_cp += 1;
    }

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = rhs(t, &y).map_err(|e| Error::RhsFailure {
        t,
        source: Box::new(e),
    })?;
    let mut h = cfg.initial_step.min(t1 - t0);
    let mut err_old: f64 = 1e-4;
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut last_rejected = false;

    while t < t1 {
        if accepted + rejected >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded(accepted + rejected));
        }
        let h_min = 1e-14 * t.abs().max(1.0);
        if h < h_min {
            return Err(Error::StepUnderflow { t, h });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let step = dopri_step(&mut rhs, t, &y, &k1, h)?;
        let err = if all_finite(&step.y1) && all_finite(&step.k7) {
            error_norm(&y, &step.y1, &step.err, cfg)
        } else {
            f64::INFINITY
        };

        if err <= 1.0 {
            let t_new = if last { t1 } else { t + h };
            while next_cp < order.len() && checkpoints[order[next_cp]] <= t_new {
                let tc = checkpoints[order[next_cp]];
                let theta = ((tc - t) / h).clamp(0.0, 1.0);
                filled[order[next_cp]] = Some(interpolate(&y, &step, h, theta));
                next_cp += 1;
            }
            let mut y_new = step.y1.clone();
            on_accept(t_new, &mut y_new);
            t = t_new;
            k1 = if y_new == step.y1 {
                step.k7
            } else {
                // The hook may have moved the state; refresh the derivative.
                rhs(t, &y_new).map_err(|e| Error::RhsFailure {
                    t,
                    source: Box::new(e),
                })?
            };
            y = y_new;
            accepted += 1;
            if record_all {
                samples.push(Sample { t, y: y.clone() });
            }
            let fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-EXPO) * err_old.powf(BETA)).clamp(FAC_MIN, FAC_MAX)
            };
            let fac = if last_rejected { fac.min(1.0) } else { fac };
            err_old = err.max(1e-4);
            h *= fac;
            last_rejected = false;
        } else {
            rejected += 1;
            let fac = if err.is_finite() {
                (SAFETY * err.powf(-0.2)).max(FAC_MIN)
            } else {
                0.1
            };
            h *= fac.min(1.0);
            last_rejected = true;
        }
    }

    if !record_all {
        samples = order_samples(checkpoints, filled);
    }
    Ok(Trajectory {
        samples,
        end: Sample { t: t1, y },
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}

fn order_samples(checkpoints: &[f64], filled: Vec<Option<Vec<C64>>>) -> Vec<Sample> {
    checkpoints
        .iter()
        .zip(filled)
        .map(|(&t, y)| Sample {
            t,
            y: y.expect("every checkpoint lies in the integration interval"),
        })
        .collect()
}

/// Fixed-step fifth-order Dormand–Prince integration with `n_steps` equal
/// steps; used for convergence-order checks.
pub fn integrate_fixed<F>(mut rhs: F, y0: &[C64], t_span: (f64, f64), n_steps: usize) -> Result<Vec<C64>>
where
    F: FnMut(f64, &[C64]) -> Result<Vec<C64>>,
{
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be positive".into()));
    }
    let (t0, t1) = t_span;
    let h = (t1 - t0) / n_steps as f64;
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k1 = rhs(t, &y)?;
    for i in 0..n_steps {
        let step = dopri_step(&mut rhs, t, &y, &k1, h)?;
        y = step.y1;
        k1 = step.k7;
        t = t0 + (i + 1) as f64 * h;
    }
    Ok(y)
}
