//! Subcommand implementations.

use std::path::Path;

use serde_json::{json, Map, Value};
use uniformize_core::dynamics::IntegratorConfig;
use uniformize_core::io::{
    emit, load_family_config, load_versioned, parse_family_config, render, FamilyConfig, Format, LatticeConfig,
    Output, Table, TriangleInput, RATIONAL_EXAMPLE, TORUS_EXAMPLE,
};
use uniformize_core::nuttall::{
    classify_sheets, critical_points, is_real_mod_lattice, normalize_triangle, psi, psi_root, GridSpec,
    NuttallContext,
};
use uniformize_core::rational::{critical_values_quadrature, solve_rational_family, RationalFamilySpec};
use uniformize_core::torus::{solve_torus_family, torus_critical_values, TorusFamilySpec};
use uniformize_core::{invariants, make_lattice, EvalOptions, Error, Result, C64};

use crate::Common;

const DEFAULT_TOL: f64 = 1e-10;
/// Largest endpoint deviation from the targets accepted by `verify`.
const VERIFY_LIMIT: f64 = 1e-6;

fn cx(z: C64) -> Value {
    json!([z.re, z.im])
}

fn write(output: &Output, format: Format, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => emit(output, format, path),
        None => {
            print!("{}", render(output, format)?);
            Ok(())
        }
    }
}

fn require_config(c: &Common) -> Result<&Path> {
    c.config
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--config <path> is required for this command".into()))
}

fn integrator(c: &Common) -> Result<IntegratorConfig> {
    let tol = c.tol_or(DEFAULT_TOL)?;
    Ok(IntegratorConfig {
        rel_tol: tol,
        abs_tol: tol * 1e-2,
        ..IntegratorConfig::default()
    })
}

pub fn lattice_info(c: &Common) -> Result<()> {
    let cfg: LatticeConfig = load_versioned(require_config(c)?)?;
    let lat = make_lattice(cfg.omega1, cfg.omega2)?;
    let inv = invariants(&lat, c.tol_or(1e-13)?)?;
    let legendre = inv.eta1 * lat.omega2() - inv.eta2 * lat.omega1();
    let mut v = Map::new();
    v.insert("omega1".into(), cx(lat.omega1()));
    v.insert("omega2".into(), cx(lat.omega2()));
    v.insert("tau".into(), cx(lat.tau()));
    v.insert("g2".into(), cx(inv.g2));
    v.insert("g3".into(), cx(inv.g3));
    v.insert("e1".into(), cx(inv.e1));
    v.insert("e2".into(), cx(inv.e2));
    v.insert("e3".into(), cx(inv.e3));
    v.insert("eta1".into(), cx(inv.eta1));
    v.insert("eta2".into(), cx(inv.eta2));
    v.insert("legendre".into(), cx(legendre));
    write(
        &Output::Scalars {
            kind: "lattice-info",
            values: &v,
        },
        c.format_or(Format::Json)?,
        c.out.as_deref(),
    )
}

pub fn eval(c: &Common) -> Result<()> {
    let cfg: LatticeConfig = load_versioned(require_config(c)?)?;
    let lat = make_lattice(cfg.omega1, cfg.omega2)?;
    let tol = c.tol_or(1e-12)?;
    let inv = invariants(&lat, tol)?;
    let opt = EvalOptions::with_tol(tol);
    let mut rows = Vec::with_capacity(cfg.points.len());
    for (k, &z) in cfg.points.iter().enumerate() {
        let (p, dp) = inv.wp_and_prime(z, &opt)?;
        rows.push((k as f64, vec![z, p, dp, inv.zeta(z, &opt)?, inv.sigma(z, &opt)?]));
    }
    let table = Table {
        kind: "eval".into(),
        index: "k".into(),
        columns: ["z", "wp", "wp_prime", "zeta", "sigma"].map(String::from).to_vec(),
        rows,
    };
    write(&Output::Table(&table), c.format_or(Format::Csv)?, c.out.as_deref())
}

fn rational_spec(c: &Common) -> Result<RationalFamilySpec> {
    match load_family_config(require_config(c)?)? {
        FamilyConfig::Rational(s) => Ok(s),
        FamilyConfig::Torus(_) => Err(Error::InvalidArgument("config describes a torus family".into())),
    }
}

fn torus_spec(c: &Common) -> Result<TorusFamilySpec> {
    match load_family_config(require_config(c)?)? {
        FamilyConfig::Torus(s) => Ok(s),
        FamilyConfig::Rational(_) => Err(Error::InvalidArgument("config describes a rational family".into())),
    }
}

fn checkpoints(c: &Common) -> Vec<f64> {
    c.checkpoints.clone().unwrap_or_else(|| vec![0.0, 1.0])
}

pub fn rational_solve(c: &Common) -> Result<()> {
    let spec = rational_spec(c)?;
    let sol = solve_rational_family(&spec, &integrator(c)?, &checkpoints(c))?;
    let table = Table::from_rational(&spec, &sol.checkpoints);
    write(&Output::Table(&table), c.format_or(Format::Csv)?, c.out.as_deref())
}

pub fn torus_solve(c: &Common) -> Result<()> {
    let spec = torus_spec(c)?;
    let sol = solve_torus_family(&spec, &integrator(c)?, &checkpoints(c))?;
    let table = Table::from_torus(spec.n, &sol.checkpoints);
    write(&Output::Table(&table), c.format_or(Format::Csv)?, c.out.as_deref())
}

/// Solves `cfg` and returns `(name, computed, targets)` at `t = 1`.
fn endpoint_values(cfg: &FamilyConfig, ic: &IntegratorConfig, tol: f64) -> Result<(&'static str, Vec<C64>, Vec<C64>)> {
    match cfg {
        FamilyConfig::Rational(spec) => {
            let sol = solve_rational_family(spec, ic, &[])?;
            let got = critical_values_quadrature(&sol.end, spec, tol)?;
            Ok(("rational", got, spec.paths.iter().map(|p| p.end()).collect()))
        }
        FamilyConfig::Torus(spec) => {
            let sol = solve_torus_family(spec, ic, &[])?;
            let got = torus_critical_values(&sol.end, tol)?;
            Ok(("torus", got[1..].to_vec(), spec.paths.iter().map(|p| p.end()).collect()))
        }
    }
}

pub fn verify(c: &Common) -> Result<()> {
    let configs = match &c.config {
        Some(path) => vec![load_family_config(path)?],
        None => vec![parse_family_config(RATIONAL_EXAMPLE)?, parse_family_config(TORUS_EXAMPLE)?],
    };
    let ic = integrator(c)?;
    let quad_tol = c.tol_or(DEFAULT_TOL)?.min(1e-10);
    let mut v = Map::new();
    let mut worst: f64 = 0.0;
    for (k, cfg) in configs.iter().enumerate() {
        let (name, got, want) = endpoint_values(cfg, &ic, quad_tol)?;
        let dev = got.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst = worst.max(dev);
        v.insert(
            format!("{k}_{name}"),
            json!({
                "critical_values": got.iter().map(|&z| cx(z)).collect::<Vec<_>>(),
                "targets": want.iter().map(|&z| cx(z)).collect::<Vec<_>>(),
                "max_deviation": dev,
            }),
        );
    }
    v.insert("max_deviation".into(), json!(worst));
    v.insert("limit".into(), json!(VERIFY_LIMIT));
    v.insert("pass".into(), json!(worst < VERIFY_LIMIT));
    write(
        &Output::Scalars {
            kind: "verify",
            values: &v,
        },
        c.format_or(Format::Json)?,
        c.out.as_deref(),
    )?;
    if worst < VERIFY_LIMIT {
        Ok(())
    } else {
        Err(Error::ValidationError(format!(
            "endpoint critical values deviate from targets by {worst:e}"
        )))
    }
}

fn nuttall_context(c: &Common, default_alpha: f64) -> Result<NuttallContext> {
    if let Some(path) = &c.config {
        let tri: TriangleInput = load_versioned(path)?;
        let t = normalize_triangle(tri.a1, tri.a2, tri.a3)?;
        return NuttallContext::from_triangle(&t);
    }
    NuttallContext::real(c.alpha.unwrap_or(default_alpha))
}

pub fn nuttall_partition(c: &Common) -> Result<()> {
    let ctx = nuttall_context(c, 0.5)?;
    let grid = GridSpec::standard(c.grid.unwrap_or(800));
    let field = classify_sheets(&ctx, &grid)?;
    write(&Output::Field(&field), c.format_or(Format::Svg)?, c.out.as_deref())
}

pub fn nuttall_critical(c: &Common) -> Result<()> {
    let ctx = nuttall_context(c, 0.6)?;
    if ctx.alpha.im.abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "critical points need real alpha, got {}",
            ctx.alpha
        )));
    }
    let alpha = ctx.alpha.re;
    let roots = critical_points(alpha, &ctx)?;
    let real = roots.iter().filter(|z| is_real_mod_lattice(**z, &ctx, 1e-8)).count();
    let double = roots.len() == 2 && (roots[0] - roots[1]).norm() < 1e-4;
    let mut v = Map::new();
    v.insert("alpha".into(), json!(alpha));
    v.insert("roots".into(), json!(roots.iter().map(|&z| cx(z)).collect::<Vec<_>>()));
    v.insert("real_roots".into(), json!(real));
    v.insert("double_root".into(), json!(double));
    write(
        &Output::Scalars {
            kind: "nuttall-critical",
            values: &v,
        },
        c.format_or(Format::Json)?,
        c.out.as_deref(),
    )
}

pub fn nuttall_threshold(c: &Common) -> Result<()> {
    let ctx = NuttallContext::real(0.5)?;
    let root = psi_root(&ctx)?;
    let h = 1e-5;
    let slope0 = (psi(h, &ctx)? - psi(0.0, &ctx)?) / h;
    let mut v = Map::new();
    v.insert("psi_root".into(), json!(root));
    v.insert("sqrt3_over_3".into(), json!(3f64.sqrt() / 3.0));
    v.insert("psi_slope_at_0".into(), json!(slope0));
    v.insert("eta1".into(), json!(ctx.eta1()));
    write(
        &Output::Scalars {
            kind: "nuttall-threshold",
            values: &v,
        },
        c.format_or(Format::Json)?,
        c.out.as_deref(),
    )
}
