//! The verification suites behind `minklab run`.
//!
//! Every check draws from its own seeded stream, so adding or reordering
//! checks does not change the numbers of the others.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Matrix4, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use minklab_core::affine::AffineFrame;
use minklab_core::isometry::{
    cartan_dieudonne, compose_reflections, conformal_factor, is_lorentz, max_abs as dmax_abs,
    relation_preservation_harness, unit_distance_harness, Dilation, Relation,
};
use minklab_core::kinematics::{
    boost_3d, boost_matrix_1d, classify_branch, compose_velocities, lorentz_boost_event, rapidity, rapidity_inverse,
    spatial_rotation, to_ct_coordinates, Branch, Composed,
};
use minklab_core::projective::{
    collinearity_residual, conjugation_check, deformation_phi, parallelism_breaking_demo, slab_image_contains,
    slab_of, FLBoost, ProjectiveMap,
};
use minklab_core::sampling::{random_event, random_future_timelike, random_lorentz, random_rotation};
use minklab_core::simultaneity::{
    is_between, mutual_simultaneity, radar_product_residual, radar_simultaneous_event, simultaneity_asymmetry,
    WorldLine,
};
use minklab_core::space::{interval_distance, reversed_triangle_check, strict_inverted_cs_holds};
use minklab_core::{classify, Causality, Event, Metric, MinkVector, TimeOrientation};
use minklab_lattice::galilei::{galilei_completion, galilei_slice_distributivity};
use minklab_lattice::laws::{fig2_counterexample, lattice_property_suite, PropertySuiteReport};
use minklab_lattice::{complement, complement_brute, completion, diamond, IntegerGrid, Region, SeparationMode};
use minklab_rigid::comoving::{projected_curvature_check, rotation_killing_checks, RotatingChart};
use minklab_rigid::field::{boost_killing_field, rotation_killing_field};
use minklab_rigid::herglotz::{herglotz_field, herglotz_lie_accel, HyperbolicWorldline, RampWorldline, WorldLineCurve};
use minklab_rigid::kinematics::{accel_curl, convergence_ratio, killing_test, lie_derivative_accel};
use minklab_rigid::metric::{max_abs, square};
use minklab_rigid::rindler::boost_killing_flow;
use minklab_rigid::{kinematic_decomposition, Vec4};

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::report::{Bound, Check, SuiteReport};

/// Suite names in canonical order; `all` runs them in this order.
pub const SUITES: [&str; 7] = ["core", "isometry", "kinematics", "projective", "simultaneity", "lattice", "rigid"];

pub fn run_suite(name: &str, seed: u64, cfg: &Config) -> Result<SuiteReport> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        other => return Err(CliError::Usage(format!("unknown suite {other:?}"))),
    };
    let parts: Vec<Vec<Check>> = names.par_iter().map(|n| suite_checks(n, seed, cfg)).collect();
    let prefix = names.len() > 1;
    let checks = names
        .iter()
        .zip(parts)
        .flat_map(|(n, cs)| {
            cs.into_iter().map(move |mut c| {
                if prefix {
                    c.name = format!("{n}.{}", c.name);
                }
                c
            })
        })
        .collect();
    Ok(SuiteReport::new(name, seed, cfg.echo().clone(), checks))
}

fn suite_checks(name: &str, seed: u64, cfg: &Config) -> Vec<Check> {
    match name {
        "core" => core(seed, cfg),
        "isometry" => isometry(seed, cfg),
        "kinematics" => kinematics(seed, cfg),
        "projective" => projective(seed, cfg),
        "simultaneity" => simultaneity(seed, cfg),
        "lattice" => lattice(seed, cfg),
        "rigid" => rigid(seed, cfg),
        _ => unreachable!("validated by run_suite"),
    }
}

/// Independent stream per (seed, tag).
pub fn stream(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, half: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-half..half)).collect()
}

fn v3(rng: &mut ChaCha8Rng, half: f64) -> Vector3<f64> {
    Vector3::new(rng.random_range(-half..half), rng.random_range(-half..half), rng.random_range(-half..half))
}

fn rot3(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    Matrix3::from_iterator(random_rotation(3, rng).iter().copied())
}

fn metric(n: usize) -> Metric {
    Metric::new(n).expect("dimension >= 2")
}

pub fn core(seed: u64, cfg: &Config) -> Vec<Check> {
    let n = cfg.usize("samples");
    let m = metric(4);
    let mut checks = Vec::new();

    let mut rng = stream(seed, 1);
    let mut mismatches = 0;
    for _ in 0..n {
        let v = MinkVector::new(uniform_vec(&mut rng, 4, 1.0));
        let sq = v.square();
        if sq.abs() <= 1e-9 * v.euclid_norm_sq() {
            continue;
        }
        let orient = if v[0] > 0.0 { TimeOrientation::Future } else { TimeOrientation::Past };
        let ok = match classify(&v, &m) {
            Ok(Causality::Timelike(o)) => sq > 0.0 && o == orient,
            Ok(Causality::Spacelike) => sq < 0.0,
            _ => false,
        };
        mismatches += usize::from(!ok);
    }
    checks.push(Check::none_failed("classify_matches_sign", mismatches, "labels against the sign of g(v,v)"));

    let mut rng = stream(seed, 2);
    let failures = (0..(n / 10).max(1))
        .filter(|&i| {
            let v = random_future_timelike(4, 0.95, &mut rng);
            !strict_inverted_cs_holds(&v, 100, seed.wrapping_add(i as u64)).holds
        })
        .count();
    checks.push(Check::none_failed("reversed_cauchy_schwarz_timelike", failures, "strict inequality for timelike v"));
    let found = [MinkVector::new(vec![0.2, 1.0, 0.0, 0.0]), MinkVector::new(vec![1.0, 1.0, 0.0, 0.0])]
        .iter()
        .filter(|v| !strict_inverted_cs_holds(v, 100, seed).holds)
        .count();
    checks.push(Check::at_least(
        "reversed_cauchy_schwarz_needs_timelike",
        found as f64,
        2.0,
        "witness found for a spacelike and a lightlike v",
    ));

    let mut rng = stream(seed, 3);
    let mut failures = 0;
    for _ in 0..n {
        let v = random_future_timelike(4, 0.95, &mut rng);
        let w = random_future_timelike(4, 0.95, &mut rng);
        failures += usize::from(!reversed_triangle_check(&v, &w, &m).map(|t| t.holds).unwrap_or(false));
    }
    let parallel = MinkVector::new(vec![1.0, 0.3, 0.0, 0.1]);
    let equality = reversed_triangle_check(&parallel, &(&parallel * 2.5), &m).map(|t| t.parallel).unwrap_or(false);
    failures += usize::from(!equality);
    checks.push(Check::none_failed("reversed_triangle", failures, "co-oriented timelike pairs; equality when parallel"));

    // A timelike zig-zag beats the straight segment under d(p, q) = ||p - q||_g.
    let (p, q, r) = (Event::new(vec![0.0, 0.0]), Event::new(vec![1.0, 0.9]), Event::new(vec![2.0, 0.0]));
    checks.push(Check::guarded(
        "interval_distance_breaks_triangle",
        1e-3,
        Bound::AtLeast,
        "d(p,r) - d(p,q) - d(q,r) on a timelike zig-zag",
        || Ok::<_, minklab_core::GeometryError>(interval_distance(&p, &r)? - interval_distance(&p, &q)? - interval_distance(&q, &r)?),
    ));

    let mut rng = stream(seed, 4);
    let mut worst = 0.0f64;
    let mut built = 0;
    while built < 100 {
        let basis: Vec<MinkVector> = (0..4).map(|_| MinkVector::new(uniform_vec(&mut rng, 4, 1.0))).collect();
        let Ok(frame) = AffineFrame::new(Event::new(uniform_vec(&mut rng, 4, 3.0)), basis) else { continue };
        built += 1;
        let p = Event::new(uniform_vec(&mut rng, 4, 3.0));
        let back = frame.coords(&p).and_then(|x| frame.point(&x));
        worst = worst.max(back.map(|b| b.max_abs_diff(&p)).unwrap_or(f64::INFINITY));
    }
    checks.push(Check::at_most("affine_frame_round_trip", worst, 1e-9, "point(coords(p)) = p for 100 random frames"));
    checks
}

pub fn isometry(seed: u64, cfg: &Config) -> Vec<Check> {
    let n = cfg.usize("samples");
    let mut checks = Vec::new();
    for dim in 2..=4usize {
        let mut rng = stream(seed, 10 + dim as u64);
        let mut worst = 0.0f64;
        let mut failures = 0;
        for _ in 0..n {
            let l = random_lorentz(dim, &mut rng);
            match cartan_dieudonne(&l) {
                Ok(rs) if rs.len() < 2 * dim => {
                    worst = worst.max(dmax_abs(&(compose_reflections(&rs, dim) - &l)));
                }
                _ => failures += 1,
            }
        }
        checks.push(Check::none_failed(
            format!("cartan_dieudonne_n{dim}_failures"),
            failures,
            "errors or more than 2n-1 reflections",
        ));
        checks.push(Check::at_most(format!("cartan_dieudonne_n{dim}_residual"), worst, 1e-9, "max |r_1...r_m - L|"));
    }

    let mut rng = stream(seed, 20);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = rng.random_range(2..=4);
        let lambda = rng.random_range(0.5..=2.0);
        let f = random_lorentz(dim, &mut rng) * lambda;
        worst = worst.max(match conformal_factor(&f) {
            Ok(cf) => (cf.alpha - lambda * lambda).abs().max(cf.residual),
            Err(_) => f64::INFINITY,
        });
    }
    checks.push(Check::at_most("conformal_factor", worst, 1e-9, "alpha = lambda^2 for lambda L"));

    let m = metric(4);
    let mut rng = stream(seed, 21);
    let events: Vec<Event> = (0..30).map(|_| random_event(4, 2.0, &mut rng)).collect();
    let l = random_lorentz(4, &mut rng);
    let shift = DVector::from_vec(uniform_vec(&mut rng, 4, 1.0));
    let poincare: Vec<(Event, Event)> = events
        .iter()
        .map(|p| (p.clone(), Event::from_dvector(&(&l * p.to_dvector() + &shift))))
        .collect();
    let dil = Dilation::new(2.0, Event::new(vec![0.3, -0.2, 0.1, 0.0])).expect("positive factor");
    let dilated: Vec<(Event, Event)> = events.iter().map(|p| (p.clone(), dil.apply(p))).collect();
    let mut relations: Vec<Relation> = Relation::CONE_FAMILIES.to_vec();
    relations.push(Relation::IntervalSign);
    for (label, pairs) in [("poincare", &poincare), ("dilation", &dilated)] {
        let violations: std::result::Result<usize, _> = relations
            .iter()
            .map(|&r| relation_preservation_harness(pairs, r, &m).map(|rep| rep.forward.len() + rep.inverse.len()))
            .sum();
        checks.push(match violations {
            Ok(v) => Check::none_failed(format!("{label}_preserves_relations"), v, "all cone relations, both directions"),
            Err(e) => Check::errored(format!("{label}_preserves_relations"), 0.0, Bound::AtMost, e),
        });
    }
    let flip = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 1.0, 1.0, 1.0]));
    let reversed: Vec<(Event, Event)> =
        events.iter().map(|p| (p.clone(), Event::from_dvector(&(&flip * p.to_dvector())))).collect();
    checks.push(Check::guarded(
        "time_reversal_breaks_future_cone",
        1.0,
        Bound::AtLeast,
        "violations of the causal-future relation under t -> -t",
        || relation_preservation_harness(&reversed, Relation::CausalFuture, &m).map(|r| r.forward.len() as f64),
    ));

    let mut rng = stream(seed, 22);
    let d = random_rotation(3, &mut rng);
    let a = uniform_vec(&mut rng, 3, 1.0);
    let motion = move |x: &[f64]| -> Vec<f64> {
        let y = &d * DVector::from_column_slice(x);
        y.iter().zip(&a).map(|(yi, ai)| yi + ai).collect()
    };
    checks.push(Check::guarded("unit_distance_motion", 0.0, Bound::AtMost, "Euclidean motion keeps distance 1", || {
        unit_distance_harness(&motion, 3, 1.0, n, seed).map(|r| r.violations.len() as f64)
    }));
    checks.push(Check::guarded("unit_distance_detects_scaling", 1.0, Bound::AtLeast, "x -> 2x is flagged", || {
        unit_distance_harness(|x: &[f64]| x.iter().map(|v| 2.0 * v).collect(), 3, 1.0, 20, seed)
            .map(|r| r.violations.len() as f64)
    }));
    checks
}

/// A(v) with k = -1/c^2 written through the rapidity.
pub fn hyperbolic_boost(v: f64, c: f64) -> Matrix2<f64> {
    let rho = (v / c).atanh();
    Matrix2::new(rho.cosh(), -rho.sinh() / c, -c * rho.sinh(), rho.cosh())
}

fn mat4_to_d(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

pub fn kinematics(seed: u64, cfg: &Config) -> Vec<Check> {
    let n = cfg.usize("samples");
    let mut checks = Vec::new();
    let oracle = rapidity_inverse(2.0 * 0.5f64.atanh(), 1.0);
    checks.push(Check::guarded("compose_half_half", 1e-12, Bound::AtMost, "0.5 + 0.5 at c = 1 against tanh(2 artanh 0.5)", || {
        compose_velocities(-1.0, 0.5, 0.5).map(|v| v.finite().map_or(f64::INFINITY, |v| (v - oracle).abs().max((v - 0.8).abs())))
    }));

    let mut rng = stream(seed, 30);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (a, b, c) = (rng.random_range(-0.99..0.99), rng.random_range(-0.99..0.99), rng.random_range(-0.99..0.99));
        let comp = |x: f64, y: f64| compose_velocities(-1.0, x, y).ok().and_then(Composed::finite).unwrap_or(f64::NAN);
        let left = comp(comp(a, b), c);
        let right = comp(a, comp(b, c));
        let rho = rapidity(a, 1.0).and_then(|x| Ok(x + rapidity(b, 1.0)? + rapidity(c, 1.0)?));
        let sum = rho.map(|r| rapidity_inverse(r, 1.0)).unwrap_or(f64::NAN);
        let err = (left - right).abs().max((left - sum).abs());
        worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
    }
    checks.push(Check::at_most("associativity", worst, 1e-12, "random triples, also against summed rapidities"));

    let two_three = compose_velocities(1.0, 2.0, 3.0).ok().and_then(Composed::finite).map_or(f64::INFINITY, |v| (v + 1.0).abs());
    checks.push(Check::at_most("positive_k_two_three", two_three, 0.0, "2 + 3 = -1 exactly at k = 1"));
    let poles = [(1.0, 2.0, 0.5), (0.25, 4.0, 1.0), (1.0, -0.5, -2.0)]
        .iter()
        .filter(|&&(k, v, w)| compose_velocities(k, v, w).ok() != Some(Composed::Infinite))
        .count();
    checks.push(Check::none_failed("positive_k_pole", poles, "v w = 1/k composes to infinity"));
    let branches = [
        matches!(classify_branch(1.0), Branch::Euclidean),
        matches!(classify_branch(0.0), Branch::Galilei),
        matches!(classify_branch(-0.25), Branch::Lorentz { c } if c == 2.0),
    ];
    checks.push(Check::none_failed("branch_classification", branches.iter().filter(|b| !**b).count(), "k > 0, k = 0, k < 0"));

    let mut rng = stream(seed, 31);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let c = rng.random_range(0.5..3.0);
        let v = rng.random_range(-0.99..0.99) * c;
        let diff = boost_matrix_1d(-1.0 / (c * c), v).map(|a| (a - hyperbolic_boost(v, c)).amax());
        worst = worst.max(diff.unwrap_or(f64::INFINITY));
    }
    checks.push(Check::at_most("boost_matrix_hyperbolic_form", worst, 1e-12, "entrywise against cosh / sinh of the rapidity"));

    let mut rng = stream(seed, 32);
    let (mut lorentz, mut equiv) = (0.0f64, 0.0f64);
    let c = 2.0;
    for _ in 0..100 {
        let v = v3(&mut rng, 1.0).normalize() * rng.random_range(0.0..0.95 * c);
        let Ok(b) = boost_3d(&v, c) else {
            lorentz = f64::INFINITY;
            continue;
        };
        lorentz = lorentz.max(is_lorentz(&mat4_to_d(&to_ct_coordinates(&b, c)), 1e-10).map_or(f64::INFINITY, |r| r.residual));
        let d = rot3(&mut rng);
        let lhs = boost_3d(&(d * v), c).map_or(f64::INFINITY, |m| (m - spatial_rotation(&d) * b * spatial_rotation(&d.transpose())).amax());
        equiv = equiv.max(lhs);
    }
    checks.push(Check::at_most("boost_3d_is_lorentz", lorentz, 1e-10, "residual of L^T G L = G in (ct, x)"));
    checks.push(Check::at_most("boost_3d_equivariance", equiv, 1e-10, "B(Dv) = D B(v) D^-1 for 100 rotations"));
    checks
}

fn box_samples(rng: &mut ChaCha8Rng, count: usize, t: std::ops::Range<f64>) -> Vec<(f64, Vector3<f64>)> {
    (0..count).map(|_| (rng.random_range(t.clone()), v3(rng, 1.0))).collect()
}

pub fn projective(seed: u64, cfg: &Config) -> Vec<Check> {
    let n = cfg.usize("samples");
    let r = cfg.f64("fl_radius");
    let mut checks = Vec::new();

    let mut rng = stream(seed, 40);
    match FLBoost::new(Vector3::new(0.5, 0.0, 0.0), 1.0, r) {
        Ok(b) => {
            // Draw until n samples were evaluable.
            let (mut worst, mut evaluated, mut skipped) = (0.0f64, 0, 0);
            while evaluated < n {
                let rep = conjugation_check(&b, &box_samples(&mut rng, n - evaluated, 0.0..r));
                worst = worst.max(rep.max_residual);
                evaluated += rep.evaluated;
                skipped += rep.skipped;
                if rep.evaluated == 0 {
                    worst = f64::INFINITY;
                    break;
                }
            }
            checks.push(Check::at_most(
                "fock_lorentz_conjugation",
                worst,
                1e-10,
                format!("{evaluated} samples, {skipped} skipped at poles"),
            ));
        }
        Err(e) => checks.push(Check::errored("fock_lorentz_conjugation", 1e-10, Bound::AtMost, e)),
    }

    let mut rng = stream(seed, 41);
    let big = 1e6;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let v = v3(&mut rng, 0.5);
        let (t, x) = box_samples(&mut rng, 1, -1.0..1.0)[0];
        let ratio = FLBoost::new(v, 1.0, big).and_then(|b| {
            let (t1, x1) = b.apply(t, &x)?;
            let (t2, x2) = lorentz_boost_event(&v, 1.0, t, &x)?;
            Ok((t1 - t2).abs().max((x1 - x2).norm()) / (10.0 * (x.norm() + t.abs()) / big))
        });
        worst = worst.max(ratio.unwrap_or(f64::INFINITY));
    }
    checks.push(Check::at_most("fock_lorentz_large_radius", worst, 1.0, "deviation / (10 (|x| + c|t|) / R) at R = 1e6"));

    let mut rng = stream(seed, 42);
    let (rs, c) = (5.0, 2.0);
    let (mut failures, mut tested) = (0, 0);
    while tested < n {
        let t = rng.random_range(-20.0..20.0);
        let x = Vector3::new(rng.random_range(-1.0..1.0), 0.0, 0.0);
        let (Some(slab), Ok((ti, _))) = (slab_of(t, rs, c), deformation_phi(rs, c, t, &x)) else { continue };
        tested += 1;
        failures += usize::from(!slab_image_contains(slab, ti, rs, c));
    }
    checks.push(Check::none_failed("time_slab_table", failures, "image time lands in the slab's target range"));

    match parallelism_breaking_demo(&[0.0, 1.0, 2.0]) {
        Ok(rep) => {
            let min_angle = rep.angles.iter().map(|a| a.2).fold(f64::INFINITY, f64::min);
            let spread = rep.lines.iter().map(|l| l.s_spread).fold(0.0, f64::max);
            checks.push(Check::at_least("image_lines_not_parallel", min_angle, 1e-3, "smallest angle between image lines"));
            checks.push(Check::at_most("image_lines_straight", spread, 1e-12, "direction spread along each image"));
        }
        Err(e) => checks.push(Check::errored("image_lines_not_parallel", 1e-3, Bound::AtLeast, e)),
    }

    let mut rng = stream(seed, 43);
    let (mut worst, mut maps) = (0.0f64, 0);
    while maps < 50 {
        let a = DMatrix::from_fn(3, 3, |i, j| f64::from(u8::from(i == j)) + rng.random_range(-0.3..0.3));
        let av = DVector::from_vec(uniform_vec(&mut rng, 3, 0.5));
        let p = DVector::from_vec(uniform_vec(&mut rng, 3, 0.1));
        let Ok(f) = ProjectiveMap::new(a, av, p, 1.0) else { continue };
        if !f.is_proper() {
            continue;
        }
        maps += 1;
        let x0 = uniform_vec(&mut rng, 3, 1.0);
        let d = uniform_vec(&mut rng, 3, 1.0);
        let pts: std::result::Result<Vec<Event>, _> = (0..6)
            .map(|i| f.apply(&Event::new(x0.iter().zip(&d).map(|(a, b)| a + i as f64 / 5.0 * b).collect())))
            .collect();
        if let Ok(pts) = pts {
            worst = worst.max(collinearity_residual(&pts).unwrap_or(f64::INFINITY));
        }
    }
    checks.push(Check::at_most("projective_maps_keep_lines", worst, 1e-10, "collinearity of mapped segment points"));
    checks
}

fn random_line(rng: &mut ChaCha8Rng, n: usize) -> Option<WorldLine> {
    let base = Event::new(uniform_vec(rng, n, 1.0));
    WorldLine::new(base, random_future_timelike(n, 0.8, rng)).ok()
}

pub fn simultaneity(seed: u64, _cfg: &Config) -> Vec<Check> {
    let mut checks = Vec::new();
    let m = metric(3);
    let mut rng = stream(seed, 50);
    let (mut product, mut ortho, mut configs, mut outside) = (0.0f64, 0.0f64, 0, 0);
    while configs < 50 {
        let Some(l) = random_line(&mut rng, 3) else { continue };
        let p = Event::new(vec![rng.random_range(-1.0..1.0), rng.random_range(2.0..4.0), rng.random_range(-1.0..1.0)]);
        let Ok(radar) = radar_simultaneous_event(&l, &p, &m) else { continue };
        configs += 1;
        ortho = ortho.max((&radar.q - &p).dot(l.direction()).abs());
        for i in 1..=10 {
            let q = &radar.q_minus + &((&radar.q_plus - &radar.q_minus) * (i as f64 / 11.0));
            outside += usize::from(!is_between(&radar, &q));
            product = product.max(radar_product_residual(&radar, &p, &q));
        }
    }
    checks.push(Check::at_most("radar_product", product, 1e-10, "10 interior points x 50 configurations"));
    checks.push(Check::at_most("radar_orthogonality", ortho, 1e-10, "(q - p) . v = 0"));
    checks.push(Check::none_failed("radar_betweenness", outside, "interior points test as between q- and q+"));

    let l = WorldLine::new(Event::new(vec![0.0, 0.0]), MinkVector::new(vec![1.0, 0.0]));
    let l2 = WorldLine::new(Event::new(vec![0.0, 1.0]), MinkVector::new(vec![1.0, 0.5]));
    let exact = l
        .and_then(|l| Ok((l, l2?)))
        .and_then(|(l, l2)| mutual_simultaneity(&l, &l2, &metric(2)))
        .map(|(q, q2)| {
            let target = Event::new(vec![-2.0, 0.0]);
            q.max_abs_diff(&target).max(q2.max_abs_diff(&target))
        });
    checks.push(Check::at_most("mutual_simultaneity_intersection", exact.unwrap_or(f64::INFINITY), 0.0, "crossing lines meet at (-2, 0)"));

    let mut rng = stream(seed, 51);
    let (mut worst, mut solved) = (0.0f64, 0);
    while solved < 50 {
        let (Some(a), Some(b)) = (random_line(&mut rng, 3), random_line(&mut rng, 3)) else { continue };
        let Ok((q, q2)) = mutual_simultaneity(&a, &b, &m) else { continue };
        solved += 1;
        let d = &q - &q2;
        worst = worst.max(d.dot(a.direction()).abs()).max(d.dot(b.direction()).abs());
    }
    checks.push(Check::at_most("mutual_simultaneity_orthogonality", worst, 1e-10, "q - q' orthogonal to both lines"));

    let tilted = WorldLine::new(Event::new(vec![0.0, 0.0]), MinkVector::new(vec![1.0, 0.0]))
        .and_then(|a| Ok((a, WorldLine::new(Event::new(vec![0.0, 1.0]), MinkVector::new(vec![1.0, 0.5]))?)))
        .and_then(|(a, b)| simultaneity_asymmetry(&a, &b, &Event::new(vec![1.0, 0.0])))
        .map(|(_, mismatch)| mismatch.abs());
    checks.push(Check::at_least("simultaneity_not_symmetric", tilted.unwrap_or(f64::NAN), 0.1, "round trip between tilted lines"));
    checks
}

fn mode_checks(label: &str, r: &PropertySuiteReport) -> Vec<Check> {
    let note = format!("{} sampled regions, {} near the boundary", r.samples, r.guard_flagged);
    vec![
        Check::none_failed(format!("{label}.triple_complement"), r.triple_prime_failures, note.clone()),
        Check::none_failed(format!("{label}.completion_idempotent"), r.idempotence_failures, ""),
        Check::none_failed(format!("{label}.double_complement"), r.involution_failures, "a'' = a on complete a"),
        Check::none_failed(format!("{label}.order_reversal"), r.order_reversal_failures, ""),
        Check::none_failed(format!("{label}.orthocomplement"), r.orthocomplement_failures, "a ^ a' = 0, a v a' = 1"),
        Check::none_failed(format!("{label}.de_morgan"), r.de_morgan_violations, ""),
        Check::none_failed(format!("{label}.atoms_complete"), r.atom_failures, format!("{} interior atoms", r.atoms_checked)),
        Check::at_least(format!("{label}.covering_counterexample"), f64::from(u8::from(r.covering.is_some())), 1.0, "found"),
        Check::at_least(format!("{label}.modularity_counterexample"), f64::from(u8::from(r.modularity.is_some())), 1.0, "found"),
        Check::at_least(
            format!("{label}.distributivity_counterexample"),
            f64::from(u8::from(r.distributivity.is_some())),
            1.0,
            "found",
        ),
    ]
}

pub fn lattice(seed: u64, cfg: &Config) -> Vec<Check> {
    let grid = match IntegerGrid::centered(&cfg.grid()) {
        Ok(g) => Arc::new(g),
        Err(e) => return vec![Check::errored("grid", 0.0, Bound::AtMost, e)],
    };
    let samples = cfg.usize("lattice_samples");
    let mut checks = Vec::new();
    let (causal, chron) = rayon::join(
        || lattice_property_suite(&grid, SeparationMode::Causal, seed, samples),
        || lattice_property_suite(&grid, SeparationMode::Chronological, seed, samples),
    );
    for (label, rep) in [("causal", causal), ("chronological", chron)] {
        match rep {
            Ok(r) => checks.extend(mode_checks(label, &r)),
            Err(e) => checks.push(Check::errored(format!("{label}.laws"), 0.0, Bound::AtMost, e)),
        }
    }

    checks.push(Check::guarded("fig2_witness_size", 1.0, Bound::AtLeast, "|b ^ (a v b') \\ a| for causal sets", || {
        fig2_counterexample(&grid).map(|r| r.witness_size() as f64)
    }));

    let dim = grid.dim();
    let at = |t: i64, x: i64| -> Vec<i64> {
        let mut p = vec![0; dim];
        p[0] = t;
        p[1] = x;
        p
    };
    let pairs = [(at(0, 0), at(4, 0)), (at(-5, 2), at(3, -1))];
    checks.push(Check::guarded("timelike_pair_completes_to_diamond", 0.0, Bound::AtMost, "{p} v {q} = closed diamond", || {
        let mut mismatches = 0.0;
        for (p, q) in &pairs {
            let pq = Region::from_points(&grid, &[p.clone(), q.clone()])?;
            if completion(&pq, SeparationMode::Causal) != diamond(&grid, p, q, false)? {
                mismatches += 1.0;
            }
        }
        Ok::<_, minklab_lattice::LatticeError>(mismatches)
    }));

    let mut rng = stream(seed, 60);
    let mut mismatches = 0;
    for _ in 0..20 {
        let s = Region::random(&grid, rng.random_range(0.0..0.1), &mut rng);
        for mode in SeparationMode::ALL {
            mismatches += usize::from(complement(&s, mode) != complement_brute(&s, mode));
        }
    }
    checks.push(Check::none_failed("masked_complement_matches_brute_force", mismatches, "bit-identical"));

    checks.push(Check::guarded("galilei_two_slices_complete_to_all", 0.0, Bound::AtMost, "", || {
        let two = Region::from_points(&grid, &[at(0, 0), at(1, 0)])?;
        Ok::<_, minklab_lattice::LatticeError>(f64::from(u8::from(!galilei_completion(&two).is_full())))
    }));
    checks.push(Check::guarded("galilei_slice_distributive", 0.0, Bound::AtMost, "random triples in one time slice", || {
        galilei_slice_distributivity(&grid, 0, 200, seed).map(|f| f as f64)
    }));
    checks
}

/// Events x0 (sinh l, cosh l) in the wedge plus random transverse offsets.
pub fn wedge_probes(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec4> {
    (0..n)
        .map(|_| {
            let x0 = rng.random_range(0.5..2.0);
            let l: f64 = rng.random_range(-1.0..1.0);
            Vec4::new(x0 * l.sinh(), x0 * l.cosh(), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .collect()
}

/// Events with kappa rho / c spread evenly over [0.1, beta_max].
pub fn disk_probes(rng: &mut ChaCha8Rng, n: usize, kappa: f64, c: f64, beta_max: f64) -> Vec<Vec4> {
    (0..n)
        .map(|i| {
            let beta = 0.1 + (beta_max - 0.1) * i as f64 / (n - 1).max(1) as f64;
            let rho = beta * c / kappa;
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            Vec4::new(rng.random_range(-1.0..1.0), rho * phi.cos(), rho * phi.sin(), rng.random_range(-1.0..1.0))
        })
        .collect()
}

/// Events within 30% of c^2/|a| of a ramp worldline, measured along its acceleration.
pub fn ramp_probes(rng: &mut ChaCha8Rng, z: &RampWorldline, n: usize) -> Vec<Vec4> {
    (0..n)
        .map(|_| {
            let tau = rng.random_range(0.0..2.0);
            let a = z.acceleration(tau);
            let norm = (-square(&a)).sqrt();
            let s = rng.random_range(-0.3..0.3) * z.c * z.c / norm;
            z.position(tau) + a / norm * s + Vec4::new(0.0, 0.0, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .collect()
}

type RigidResult<T> = std::result::Result<T, minklab_rigid::RigidError>;

fn fold_max(values: impl IntoIterator<Item = RigidResult<f64>>) -> RigidResult<f64> {
    values.into_iter().try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
}

pub fn rigid(seed: u64, cfg: &Config) -> Vec<Check> {
    let step = cfg.f64("fd_step");
    let tol = cfg.f64("fd_tol");
    let accel_step = cfg.f64("accel_step");
    let mut checks = Vec::new();
    let c = 1.0;
    let boost = boost_killing_field(c).expect("c > 0");
    let rods = [0.5, 1.0, 2.0];
    let at_rod = |x0: f64| Vec4::new(0.0, x0, 0.0, 0.0);
    // At ct = 0 the field is symmetric enough to zero both norms exactly, so
    // each rod is also probed further along its orbit.
    let mut orbit = Vec::new();
    for x0 in rods {
        orbit.push(at_rod(x0));
        orbit.push(boost_killing_flow(x0, 0.4 * x0 / c, c).expect("x0 > 0"));
    }
    checks.push(Check::guarded("boost_theta", tol, Bound::AtMost, "x0 in {0.5, 1, 2}, lambda in {0, 0.4}", || {
        fold_max(orbit.iter().map(|p| kinematic_decomposition(&boost, p, step).map(|d| d.theta_norm())))
    }));
    checks.push(Check::guarded("boost_omega", tol, Bound::AtMost, "x0 in {0.5, 1, 2}, lambda in {0, 0.4}", || {
        fold_max(orbit.iter().map(|p| kinematic_decomposition(&boost, p, step).map(|d| d.omega_norm())))
    }));
    checks.push(Check::guarded("boost_accel_norm", 1e-6, Bound::AtMost, "| |a| - c^2/x0 |, step accel_step", || {
        fold_max(orbit.iter().map(|p| {
            let x0 = (p[1] * p[1] - p[0] * p[0]).sqrt();
            kinematic_decomposition(&boost, p, accel_step).map(|d| (d.accel_norm() - c * c / x0).abs())
        }))
    }));

    let (kappa, rc) = (1.0, 1.0);
    let mut rng = stream(seed, 70);
    let probes = disk_probes(&mut rng, 20, kappa, rc, 0.5);
    match rotation_killing_checks(kappa, rc, &probes, step) {
        Ok(r) => {
            checks.push(Check::at_most("rotation_theta", r.max_theta, tol, "20 probes, kappa rho / c in [0.1, 0.5]"));
            checks.push(Check::at_least("rotation_omega_nonzero", r.min_omega, 0.1, "smallest |omega| over the probes"));
            checks.push(Check::at_most("rotation_lie_omega", r.max_lie_omega, tol, "L_u omega"));
        }
        Err(e) => checks.push(Check::errored("rotation_theta", tol, Bound::AtMost, e)),
    }
    let rot = rotation_killing_field(kappa, rc).expect("valid parameters");
    checks.push(Check::guarded("convergence_ratio", 1.0, Bound::AtMost, "|ratio - 4| under step halving, boost and rotation", || {
        let mut worst = 0.0f64;
        for x0 in rods {
            worst = worst.max((convergence_ratio(&boost, &Vec4::new(0.3 * x0, x0, 0.2, 0.0), step, None)? - 4.0).abs());
        }
        for p in disk_probes(&mut stream(seed, 71), 5, kappa, rc, 0.5) {
            worst = worst.max((convergence_ratio(&rot, &p, 1e-2, None)? - 4.0).abs());
        }
        Ok::<_, minklab_rigid::RigidError>(worst)
    }));

    let hyper = HyperbolicWorldline { x0: 1.0, c };
    let wedge = wedge_probes(&mut stream(seed, 72), 20);
    match herglotz_field(Arc::new(hyper)) {
        Ok(f) => {
            checks.push(Check::guarded("herglotz_hyperbola_is_boost", 1e-12, Bound::AtMost, "max |u_H - u_K|", || {
                fold_max(wedge.iter().map(|p| Ok((f.velocity(p)? - boost.velocity(p)?).amax())))
            }));
            checks.push(Check::guarded("herglotz_hyperbola_da", tol, Bound::AtMost, "fd curl of the acceleration one-form", || {
                fold_max(wedge.iter().map(|p| accel_curl(&f, p, step).map(|m| max_abs(&m))))
            }));
        }
        Err(e) => checks.push(Check::errored("herglotz_hyperbola_is_boost", 1e-12, Bound::AtMost, e)),
    }

    let ramp = RampWorldline { a: 0.5, c };
    let probes = ramp_probes(&mut stream(seed, 73), &ramp, 15);
    match herglotz_field(Arc::new(ramp)) {
        Ok(f) => {
            checks.push(Check::guarded("ramp_lie_accel", 1e-4, Bound::AtMost, "fd L_u a against the closed form", || {
                fold_max(probes.iter().map(|p| Ok((lie_derivative_accel(&f, p, step)? - herglotz_lie_accel(&ramp, p)?).amax())))
            }));
            checks.push(Check::guarded("ramp_not_killing", 1.0, Bound::AtLeast, "rigid with a non-closed acceleration", || {
                killing_test(&f, &probes, step, tol).map(|v| f64::from(u8::from(v.rigid && !v.is_killing)))
            }));
        }
        Err(e) => checks.push(Check::errored("ramp_lie_accel", 1e-4, Bound::AtMost, e)),
    }

    let curvature_tol = cfg.f64("curvature_tol");
    let probes = disk_probes(&mut stream(seed, 74), 10, kappa, rc, 0.7);
    checks.push(Check::guarded(
        "projected_curvature_identity",
        curvature_tol,
        Bound::AtMost,
        "10 probes, kappa rho / c in [0.1, 0.7]",
        || projected_curvature_check(&rot, &RotatingChart { kappa, c: rc }, &probes, step).map(|r| r.max_residual),
    ));
    checks
}
