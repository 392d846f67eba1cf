//! Data-producing demos behind `minklab demo`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use nalgebra::Vector3;
use serde::Serialize;

use minklab_core::projective::{deformation_phi, parallelism_breaking_demo, slab_image_contains, slab_of, TimeSlab};
use minklab_lattice::export::{region_to_json, region_to_pbm};
use minklab_lattice::laws::fig2_counterexample;
use minklab_lattice::IntegerGrid;
use minklab_rigid::comoving::{projected_curvature_check, rotation_killing_checks, RotatingChart};
use minklab_rigid::field::{boost_killing_field, rotation_killing_field};
use minklab_rigid::rindler::{boost_killing_flow, eigentime_to_speed};
use minklab_rigid::{kinematic_decomposition, Vec4};

use crate::config::parse_grid;
use crate::error::{CliError, Result};

pub const DEMOS: [&str; 5] = ["rindler", "rotating-disk", "fig2", "fl-slab", "image-lines"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// `key=value` parameters with per-demo defaults.
#[derive(Debug, Clone)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    fn new(defaults: &[(&str, &str)], given: &[(String, String)]) -> Result<Self> {
        let mut values: BTreeMap<String, String> =
            defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        for (k, v) in given {
            if !values.contains_key(k) {
                let known: Vec<&str> = defaults.iter().map(|d| d.0).collect();
                return Err(CliError::Demo(format!("unknown parameter {k}; expected one of {}", known.join(", "))));
            }
            values.insert(k.clone(), v.clone());
        }
        Ok(Self { values })
    }

    fn f64(&self, key: &str) -> Result<f64> {
        let v = &self.values[key];
        v.parse().ok().filter(|x: &f64| x.is_finite()).ok_or_else(|| bad(key, v))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let v = &self.values[key];
        v.parse().ok().filter(|&n| n > 0).ok_or_else(|| bad(key, v))
    }

    /// `a..b`, or a single number for a one-point range.
    fn range(&self, key: &str) -> Result<(f64, f64)> {
        let v = &self.values[key];
        let parse = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite());
        let r = match v.split_once("..") {
            Some((a, b)) => parse(a).zip(parse(b)),
            None => parse(v).map(|x| (x, x)),
        };
        r.filter(|(a, b)| a <= b).ok_or_else(|| bad(key, v))
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        let v = &self.values[key];
        v.split(',').map(|s| s.trim().parse::<f64>().ok().filter(|x| x.is_finite())).collect::<Option<_>>().ok_or_else(|| bad(key, v))
    }
}

fn bad(key: &str, value: &str) -> CliError {
    CliError::Demo(format!("bad value {value:?} for {key}"))
}

fn demo_err(e: impl std::fmt::Display) -> CliError {
    CliError::Demo(e.to_string())
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Write { path: path.display().to_string(), source })?;
    Ok(path)
}

fn write_table<T: Serialize>(dir: &Path, stem: &str, rows: &[T], format: TableFormat) -> Result<PathBuf> {
    match format {
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("plain rows serialise");
            s.push('\n');
            write(dir, &format!("{stem}.json"), &s)
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(demo_err)?;
            }
            let bytes = w.into_inner().map_err(demo_err)?;
            write(dir, &format!("{stem}.csv"), &String::from_utf8(bytes).expect("utf-8 fields"))
        }
    }
}

/// Runs a demo, writing into `dir` (created if missing); returns the files written.
pub fn run_demo(name: &str, given: &[(String, String)], dir: &Path, format: TableFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.display().to_string(), source })?;
    match name {
        "rindler" => rindler(given, dir, format),
        "rotating-disk" => rotating_disk(given, dir, format),
        "fig2" => fig2(given, dir),
        "fl-slab" => fl_slab(given, dir, format),
        "image-lines" => image_lines(given, dir, format),
        other => Err(CliError::Usage(format!("unknown demo {other:?}; expected one of {}", DEMOS.join(", ")))),
    }
}

#[derive(Serialize)]
struct RindlerRow {
    x0: f64,
    tau: f64,
    ct: f64,
    x: f64,
    y: f64,
    z: f64,
    theta_norm: f64,
    omega_norm: f64,
    accel_norm: f64,
}

/// Orbits of the boost flow for rods x0 in a range, each followed from rest
/// until its speed reaches `v_final`.
fn rindler(given: &[(String, String)], dir: &Path, format: TableFormat) -> Result<Vec<PathBuf>> {
    let p = Params::new(&[("x0", "1..2"), ("rods", "5"), ("v_final", "0.5"), ("c", "1"), ("steps", "50")], given)?;
    let (lo, hi) = p.range("x0")?;
    let (rods, steps, c, v_final) = (p.usize("rods")?, p.usize("steps")?, p.f64("c")?, p.f64("v_final")?);
    if !(lo > 0.0) {
        return Err(bad("x0", &format!("{lo}..{hi}")));
    }
    let field = boost_killing_field(c).map_err(demo_err)?;
    let mut rows = Vec::new();
    for i in 0..rods {
        let x0 = if rods == 1 { lo } else { lo + (hi - lo) * i as f64 / (rods - 1) as f64 };
        let tau_end = eigentime_to_speed(x0, v_final, c).map_err(demo_err)?;
        for k in 0..=steps {
            let tau = tau_end * k as f64 / steps as f64;
            let e = boost_killing_flow(x0, tau, c).map_err(demo_err)?;
            let d = kinematic_decomposition(&field, &e, 1e-4).map_err(demo_err)?;
            rows.push(RindlerRow {
                x0,
                tau,
                ct: e[0],
                x: e[1],
                y: e[2],
                z: e[3],
                theta_norm: d.theta_norm(),
                omega_norm: d.omega_norm(),
                accel_norm: d.accel_norm(),
            });
        }
    }
    Ok(vec![write_table(dir, "rindler", &rows, format)?])
}

#[derive(Serialize)]
struct DiskRow {
    beta: f64,
    rho: f64,
    theta_norm: f64,
    omega_norm: f64,
    lie_omega_norm: f64,
    h_psi_psi: f64,
    h_psi_psi_exact: f64,
    curvature_norm: f64,
    curvature_exact: f64,
    identity_residual: f64,
}

/// Kinematics and comoving curvature along a radius of the rotating disk.
fn rotating_disk(given: &[(String, String)], dir: &Path, format: TableFormat) -> Result<Vec<PathBuf>> {
    let p = Params::new(&[("kappa", "1"), ("c", "1"), ("beta", "0.1..0.7"), ("probes", "13"), ("step", "1e-3")], given)?;
    let (kappa, c, step, n) = (p.f64("kappa")?, p.f64("c")?, p.f64("step")?, p.usize("probes")?);
    let (lo, hi) = p.range("beta")?;
    if !(lo > 0.0 && hi < 1.0) {
        return Err(bad("beta", &format!("{lo}..{hi}")));
    }
    let probes: Vec<Vec4> = (0..n)
        .map(|i| {
            let beta = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
            Vec4::new(0.0, beta * c / kappa, 0.0, 0.0)
        })
        .collect();
    let kin = rotation_killing_checks(kappa, c, &probes, step).map_err(demo_err)?;
    let field = rotation_killing_field(kappa, c).map_err(demo_err)?;
    let curv = projected_curvature_check(&field, &RotatingChart { kappa, c }, &probes, step).map_err(demo_err)?;
    let rows: Vec<DiskRow> = kin
        .probes
        .iter()
        .zip(&curv.probes)
        .map(|(k, r)| {
            let beta = kappa * k.rho / c;
            let b2 = beta * beta;
            DiskRow {
                beta,
                rho: k.rho,
                theta_norm: k.theta_norm,
                omega_norm: k.omega_norm,
                lie_omega_norm: k.lie_omega_norm,
                h_psi_psi: k.h_psi_psi,
                h_psi_psi_exact: k.h_psi_psi_exact,
                curvature_norm: r.curvature_norm,
                curvature_exact: 3.0 * b2 / (1.0 - b2).powi(3),
                identity_residual: r.residual,
            }
        })
        .collect();
    Ok(vec![write_table(dir, "rotating_disk", &rows, format)?])
}

/// Regions a, b', b and the orthomodularity witness, as JSON and PBM.
fn fig2(given: &[(String, String)], dir: &Path) -> Result<Vec<PathBuf>> {
    let p = Params::new(&[("grid", "61x61")], given)?;
    let sizes = parse_grid(&p.values["grid"]).map_err(demo_err)?;
    let grid = Arc::new(IntegerGrid::centered(&sizes).map_err(demo_err)?);
    let r = fig2_counterexample(&grid).map_err(demo_err)?;
    let mut out = Vec::new();
    for (stem, region) in [("fig2_a", &r.a), ("fig2_b_prime", &r.b_prime), ("fig2_b", &r.b), ("fig2_witness", &r.witness)] {
        out.push(write(dir, &format!("{stem}.json"), &region_to_json(region))?);
        out.push(write(dir, &format!("{stem}.pbm"), &region_to_pbm(region).map_err(demo_err)?)?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct SlabRow {
    t: f64,
    slab: &'static str,
    t_image: Option<f64>,
    in_target: Option<bool>,
}

/// Where the deformation sends each time slab.
fn fl_slab(given: &[(String, String)], dir: &Path, format: TableFormat) -> Result<Vec<PathBuf>> {
    let p = Params::new(&[("r", "5"), ("c", "1"), ("t", "-15..15"), ("points", "61"), ("x", "0.5")], given)?;
    let (r, c, n, x) = (p.f64("r")?, p.f64("c")?, p.usize("points")?, p.f64("x")?);
    let (lo, hi) = p.range("t")?;
    if !(r > 0.0 && c > 0.0) {
        return Err(CliError::Demo("r and c must be positive".into()));
    }
    let rows: Vec<SlabRow> = (0..n)
        .map(|i| {
            let t = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
            let slab = slab_of(t, r, c);
            let image = deformation_phi(r, c, t, &Vector3::new(x, 0.0, 0.0)).ok().map(|(ti, _)| ti);
            SlabRow {
                t,
                slab: match slab {
                    Some(TimeSlab::Inner) => "inner",
                    Some(TimeSlab::Beyond) => "beyond",
                    Some(TimeSlab::NonPositive) => "non_positive",
                    None => "edge",
                },
                t_image: image,
                in_target: slab.zip(image).map(|(s, ti)| slab_image_contains(s, ti, r, c)),
            }
        })
        .collect();
    Ok(vec![write_table(dir, "fl_slab", &rows, format)?])
}

#[derive(Serialize)]
struct LineRow {
    sigma: f64,
    dir_t: f64,
    dir_x: f64,
    s_spread: f64,
    angle_to_first: f64,
}

/// Directions of the images of the parallel lines s e0 + sigma e1.
fn image_lines(given: &[(String, String)], dir: &Path, format: TableFormat) -> Result<Vec<PathBuf>> {
    let p = Params::new(&[("sigmas", "0,1,2")], given)?;
    let rep = parallelism_breaking_demo(&p.list("sigmas")?).map_err(demo_err)?;
    let first = rep.lines.first().map(|l| l.direction);
    let rows: Vec<LineRow> = rep
        .lines
        .iter()
        .map(|l| {
            let f = first.expect("nonempty when iterating");
            let cross = f[0] * l.direction[1] - f[1] * l.direction[0];
            let dot = f[0] * l.direction[0] + f[1] * l.direction[1];
            LineRow {
                sigma: l.sigma,
                dir_t: l.direction[0],
                dir_x: l.direction[1],
                s_spread: l.s_spread,
                angle_to_first: cross.abs().atan2(dot.abs()),
            }
        })
        .collect();
    Ok(vec![write_table(dir, "image_lines", &rows, format)?])
}
