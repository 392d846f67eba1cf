use minklab_core::isometry::is_lorentz;
use minklab_core::kinematics::{
    boost_3d, boost_matrix_1d, compose_velocities, lorentz_boost_event, rapidity, rapidity_inverse, spatial_rotation,
    Composed,
};
use minklab_core::projective::{
    collinearity_residual, deformation_phi, deformation_phi_inverse, slab_image_contains, slab_of, FLBoost,
    ProjectiveMap, TimeSlab,
};
use minklab_core::sampling::{random_future_timelike, random_rotation};
use minklab_core::simultaneity::{
    is_between, mutual_simultaneity, radar_product_residual, radar_simultaneous_event, simultaneity_asymmetry,
    simultaneity_hyperplane, WorldLine,
};
use minklab_core::{Event, Metric, MinkVector};
use nalgebra::{DMatrix, DVector, Matrix3, Matrix4, Vector3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dmat4(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

fn rot3(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    let r = random_rotation(3, rng);
    Matrix3::from_iterator(r.iter().copied())
}

proptest! {
    #[test]
    fn velocity_addition_is_associative(a in -0.99f64..0.99, b in -0.99f64..0.99, c in -0.99f64..0.99) {
        let k = -1.0;
        let ab = compose_velocities(k, a, b).unwrap().finite().unwrap();
        let bc = compose_velocities(k, b, c).unwrap().finite().unwrap();
        let left = compose_velocities(k, ab, c).unwrap().finite().unwrap();
        let right = compose_velocities(k, a, bc).unwrap().finite().unwrap();
        prop_assert!((left - right).abs() < 1e-12);
        // Rapidities add.
        let oracle = rapidity_inverse(rapidity(a, 1.0).unwrap() + rapidity(b, 1.0).unwrap() + rapidity(c, 1.0).unwrap(), 1.0);
        prop_assert!((left - oracle).abs() < 1e-12);
    }

    #[test]
    fn boost_matrices_form_a_group(k in -2.0f64..0.0, v in -0.6f64..0.6, w in -0.6f64..0.6) {
        prop_assume!(k < -0.01);
        let vmax = 0.95 / (-k).sqrt();
        let (v, w) = (v * vmax / 0.6, w * vmax / 0.6);
        let prod = boost_matrix_1d(k, v).unwrap() * boost_matrix_1d(k, w).unwrap();
        let u = compose_velocities(k, v, w).unwrap().finite().unwrap();
        prop_assert!((prod - boost_matrix_1d(k, u).unwrap()).amax() < 1e-12);
        // Reciprocity: A(v)^-1 = A(-v).
        let inv = boost_matrix_1d(k, v).unwrap() * boost_matrix_1d(k, -v).unwrap();
        prop_assert!((inv - nalgebra::Matrix2::identity()).amax() < 1e-12);
    }
}

#[test]
fn positive_k_pathologies() {
    assert_eq!(compose_velocities(1.0, 2.0, 3.0).unwrap(), Composed::Finite(-1.0));
    assert_eq!(compose_velocities(1.0, 2.0, 0.5).unwrap(), Composed::Infinite);
    assert_eq!(compose_velocities(-1.0, 0.5, 0.5).unwrap(), Composed::Finite(0.8));
}

#[test]
fn boost_3d_is_rotation_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = 2.0;
    for _ in 0..100 {
        let dir = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let v = dir.normalize() * rng.random_range(0.0..0.95 * c);
        let b = boost_3d(&v, c).unwrap();
        assert!(is_lorentz(&dmat4(&minklab_core::kinematics::to_ct_coordinates(&b, c)), 1e-10).unwrap().is_lorentz);
        let d = rot3(&mut rng);
        let lhs = boost_3d(&(d * v), c).unwrap();
        let rhs = spatial_rotation(&d) * b * spatial_rotation(&d.transpose());
        assert!((lhs - rhs).amax() < 1e-10);
        let t = rng.random_range(-1.0..1.0);
        let x = Vector3::new(0.3, -0.2, 0.7);
        let (t2, x2) = lorentz_boost_event(&v, c, t, &x).unwrap();
        let img = b * nalgebra::Vector4::new(t, x.x, x.y, x.z);
        assert!((img[0] - t2).abs() < 1e-10 && (img.fixed_rows::<3>(1) - x2).amax() < 1e-10);
    }
}

#[test]
fn proper_projective_maps_keep_lines_straight() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut maps = 0;
    while maps < 50 {
        let a = DMatrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { 0.0 } + rng.random_range(-0.3..0.3));
        let av = DVector::from_fn(3, |_, _| rng.random_range(-0.5..0.5));
        let p = DVector::from_fn(3, |_, _| rng.random_range(-0.1..0.1));
        let Ok(f) = ProjectiveMap::new(a, av, p, 1.0) else { continue };
        if !f.is_proper() {
            continue;
        }
        maps += 1;
        for _ in 0..20 {
            let x0: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let d: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let pts: Result<Vec<Event>, _> = (0..6)
                .map(|i| {
                    let s = i as f64 / 5.0;
                    f.apply(&Event::new(x0.iter().zip(&d).map(|(a, b)| a + s * b).collect()))
                })
                .collect();
            let Ok(pts) = pts else { continue };
            assert!(collinearity_residual(&pts).unwrap() < 1e-10);
        }
    }
}

fn box_samples(rng: &mut ChaCha8Rng, count: usize, t_range: std::ops::Range<f64>) -> Vec<(f64, Vector3<f64>)> {
    (0..count)
        .map(|_| {
            let t = rng.random_range(t_range.clone());
            let x = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (t, x)
        })
        .collect()
}

#[test]
fn fock_lorentz_is_a_conjugated_boost() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let b = FLBoost::new(Vector3::new(0.5, 0.0, 0.0), 1.0, 10.0).unwrap();
    let samples = box_samples(&mut rng, 1000, 0.0..10.0);
    let report = minklab_core::projective::conjugation_check(&b, &samples);
    assert!(report.evaluated >= 990);
    assert!(report.max_residual < 1e-10);
}

#[test]
fn fock_lorentz_reciprocity_and_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let (c, r) = (1.0, 8.0);
    let u = Vector3::new(0.4, 0.0, 0.0);
    let w = Vector3::new(0.3, 0.0, 0.0);
    let bu = FLBoost::new(u, c, r).unwrap();
    let back = FLBoost::new(-u, c, r).unwrap();
    let bw = FLBoost::new(w, c, r).unwrap();
    let uw = compose_velocities(-1.0, 0.4, 0.3).unwrap().finite().unwrap();
    let buw = FLBoost::new(Vector3::new(uw, 0.0, 0.0), c, r).unwrap();
    // Non-collinear pair: compared with the conjugated product of linear boosts.
    let wy = Vector3::new(0.0, 0.35, 0.0);
    let by = FLBoost::new(wy, c, r).unwrap();
    let lin = boost_3d(&u, c).unwrap() * boost_3d(&wy, c).unwrap();
    for (t, x) in box_samples(&mut rng, 200, 0.0..2.0) {
        let (t1, x1) = back.apply(t, &x).unwrap();
        let (t2, x2) = bu.apply(t1, &x1).unwrap();
        assert!((t2 - t).abs() < 1e-12 && (x2 - x).amax() < 1e-12);
        let (t3, x3) = bu.apply(t, &x).and_then(|(a, b)| bw.apply(a, &b)).unwrap();
        let (t4, x4) = buw.apply(t, &x).unwrap();
        assert!((t3 - t4).abs() < 1e-11 && (x3 - x4).amax() < 1e-11);
        let (t5, x5) = by.apply(t, &x).and_then(|(a, b)| bu.apply(a, &b)).unwrap();
        let (ti, xi) = deformation_phi_inverse(r, c, t, &x).unwrap();
        let y = lin * nalgebra::Vector4::new(ti, xi.x, xi.y, xi.z);
        let (t6, x6) = deformation_phi(r, c, y[0], &y.fixed_rows::<3>(1).into_owned()).unwrap();
        assert!((t5 - t6).abs() < 1e-11 && (x5 - x6).amax() < 1e-11);
    }
}

#[test]
fn large_radius_approaches_the_lorentz_boost() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (c, r) = (1.0, 1e6);
    for _ in 0..1000 {
        let v = Vector3::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
        let b = FLBoost::new(v, c, r).unwrap();
        let (t, x) = box_samples(&mut rng, 1, -1.0..1.0)[0];
        let (t1, x1) = b.apply(t, &x).unwrap();
        let (t2, x2) = lorentz_boost_event(&v, c, t, &x).unwrap();
        let bound = 10.0 * (x.norm() + c * t.abs()) / r;
        assert!((t1 - t2).abs().max((x1 - x2).norm()) <= bound);
    }
}

#[test]
fn slab_table_on_random_times() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let (r, c) = (5.0, 2.0);
    for _ in 0..1000 {
        let t = rng.random_range(-20.0..20.0);
        let x = Vector3::new(rng.random_range(-1.0..1.0), 0.0, 0.0);
        let Some(slab) = slab_of(t, r, c) else { continue };
        let Ok((ti, _)) = deformation_phi(r, c, t, &x) else { continue };
        assert!(slab_image_contains(slab, ti, r, c), "t={t} image={ti}");
    }
}

#[test]
fn inner_slab_is_invariant_under_the_inverse_conjugate() {
    // phi^-1 o L o phi keeps 0 <= t < R/c for events whose phi-image is in the future cone.
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (c, r) = (1.0, 4.0);
    let v = Vector3::new(0.6, 0.0, 0.0);
    let mut checked = 0;
    while checked < 500 {
        let t = rng.random_range(0.0..r / c);
        let x = Vector3::new(rng.random_range(-3.0..3.0), 0.0, 0.0);
        let Ok((tp, xp)) = deformation_phi(r, c, t, &x) else { continue };
        if c * tp < xp.norm() {
            continue;
        }
        let (tl, xl) = lorentz_boost_event(&v, c, tp, &xp).unwrap();
        let (tb, _) = deformation_phi_inverse(r, c, tl, &xl).unwrap();
        assert_eq!(slab_of(tb, r, c), Some(TimeSlab::Inner));
        checked += 1;
    }
    // The plain Fock-Lorentz map can leave the slab: an event near the edge
    // with large x is thrown past R/c.
    let b = FLBoost::new(v, c, r).unwrap();
    let (t_out, _) = b.apply(0.5, &Vector3::new(-3.0, 0.0, 0.0)).unwrap();
    assert!(slab_of(0.5, r, c) == Some(TimeSlab::Inner) && slab_of(t_out, r, c) != Some(TimeSlab::Inner));
}

fn random_line(rng: &mut ChaCha8Rng, n: usize) -> WorldLine {
    let base = Event::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
    WorldLine::new(base, random_future_timelike(n, 0.8, rng)).unwrap()
}

#[test]
fn radar_product_holds_along_the_segment() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let m = Metric::new(3).unwrap();
    let mut configs = 0;
    while configs < 50 {
        let l = random_line(&mut rng, 3);
        let p = Event::new(vec![rng.random_range(-1.0..1.0), rng.random_range(2.0..4.0), rng.random_range(-1.0..1.0)]);
        let Ok(radar) = radar_simultaneous_event(&l, &p, &m) else { continue };
        configs += 1;
        assert!((&radar.q - &p).dot(l.direction()).abs() < 1e-10);
        for i in 1..=10 {
            let s = i as f64 / 11.0;
            let q = &radar.q_minus + &((&radar.q_plus - &radar.q_minus) * s);
            assert!(is_between(&radar, &q));
            assert!(radar_product_residual(&radar, &p, &q) < 1e-10);
        }
    }
}

#[test]
fn parallel_lines_share_simultaneity() {
    let m = Metric::new(2).unwrap();
    let v = MinkVector::new(vec![1.0, 0.3]);
    let l = WorldLine::new(Event::new(vec![0.0, 0.0]), v.clone()).unwrap();
    let l2 = WorldLine::new(Event::new(vec![0.5, 2.0]), &v * 2.5).unwrap();
    let p = Event::new(vec![0.2, 5.0]);
    let q = radar_simultaneous_event(&l, &p, &m).unwrap().q;
    let q2 = radar_simultaneous_event(&l2, &p, &m).unwrap().q;
    // Both radar events lie on the same hyperplane through p orthogonal to v.
    assert!((&q - &p).dot(&v).abs() < 1e-12 && (&q2 - &p).dot(&v).abs() < 1e-12);
    let (_, mismatch) = simultaneity_asymmetry(&l, &l2, &q).unwrap();
    assert!(mismatch.abs() < 1e-12);
}

#[test]
fn simultaneity_is_not_symmetric_for_tilted_lines() {
    let l = WorldLine::new(Event::new(vec![0.0, 0.0]), MinkVector::new(vec![1.0, 0.0])).unwrap();
    let l2 = WorldLine::new(Event::new(vec![0.0, 1.0]), MinkVector::new(vec![1.0, 0.5])).unwrap();
    let (_, mismatch) = simultaneity_asymmetry(&l, &l2, &Event::new(vec![1.0, 0.0])).unwrap();
    assert!(mismatch.abs() > 0.1);
}

#[test]
fn mutual_simultaneity_on_rational_and_skew_lines() {
    let m2 = Metric::new(2).unwrap();
    let l = WorldLine::new(Event::new(vec![0.0, 0.0]), MinkVector::new(vec![1.0, 0.0])).unwrap();
    let l2 = WorldLine::new(Event::new(vec![0.0, 1.0]), MinkVector::new(vec![1.0, 0.5])).unwrap();
    let (q, q2) = mutual_simultaneity(&l, &l2, &m2).unwrap();
    assert_eq!(q, Event::new(vec![-2.0, 0.0]));
    assert_eq!(q2, Event::new(vec![-2.0, 0.0]));

    let m = Metric::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..50 {
        let a = random_line(&mut rng, 3);
        let b = random_line(&mut rng, 3);
        let Ok((q, q2)) = mutual_simultaneity(&a, &b, &m) else { continue };
        let d = &q - &q2;
        assert!(d.dot(a.direction()).abs() < 1e-10 && d.dot(b.direction()).abs() < 1e-10);
    }
}

#[test]
fn simultaneity_classes_partition_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let l = random_line(&mut rng, 3);
    let planes: Vec<_> = (-10..=10)
        .map(|i| simultaneity_hyperplane(&l, &l.point(i as f64 * 0.25)).unwrap())
        .collect();
    for _ in 0..200 {
        // Events on one of the sampled planes, found by shifting a random event.
        let x = Event::new((0..3).map(|_| rng.random_range(-2.0..2.0)).collect());
        let target = rng.random_range(0..21);
        let h = &planes[target];
        let shift = h.offset(&x) / l.direction().square();
        let on = &x - &(l.direction() * shift);
        let hits: Vec<usize> = planes.iter().enumerate().filter(|(_, p)| p.contains(&on, 1e-10)).map(|(i, _)| i).collect();
        assert_eq!(hits, vec![target]);
    }
}
