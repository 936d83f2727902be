mod common;

use common::{normal, rotation, unit_vector};
use frictionlab::geometry::{ellipsoid_support, normal_curvature, Shape};
use frictionlab::kinematics::{continue_frame, init_frame, spin_angle, ContactFrame};
use nalgebra::{Isometry3, Point3, Rotation3, Translation3, Unit, UnitQuaternion, Vector3};
use proptest::prelude::*;

const CASES: u32 = 512;

#[test]
fn frames_are_orthonormal_and_optimal() {
    common::frame_orthonormality_and_optimality(CASES).unwrap();
}

#[test]
fn histories_respect_their_caps() {
    common::capping_invariants(CASES).unwrap();
}

#[test]
fn contact_loads_balance() {
    common::newtons_third_law(128).unwrap();
}

#[test]
fn hertzian_spin_matches_empirical_form() {
    common::hertz_empirical_equivalence(CASES).unwrap();
}

fn pose() -> impl Strategy<Value = Isometry3<f64>> {
    (
        rotation(std::f64::consts::PI),
        (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0),
    )
        .prop_map(|(r, (x, y, z))| {
            Isometry3::from_parts(Translation3::new(x, y, z), UnitQuaternion::from_rotation_matrix(&r))
        })
}

fn semi_axes() -> impl Strategy<Value = Vector3<f64>> {
    (0.05f64..1.0, 0.05f64..1.0, 0.05f64..1.0).prop_map(|(a, b, c)| Vector3::new(a, b, c))
}

fn frame_at(n: &Vector3<f64>, turn: f64) -> ContactFrame<f64> {
    let f = init_frame(n).unwrap();
    f.rotated(&Rotation3::from_axis_angle(&Unit::new_normalize(*n), turn))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn frame_continuation_commutes_with_rotation(n_old in normal(), tilt in rotation(1.2), n_new in normal(), r in rotation(3.1)) {
        let c = init_frame(&n_old).unwrap().rotated(&tilt);
        let f = continue_frame(&c.u, &c.w, &n_new).unwrap();
        let g = continue_frame(&(r * c.u), &(r * c.w), &(r * n_new)).unwrap();
        prop_assert!((g.u - r * f.u).norm() < 1e-9);
        prop_assert!((g.w - r * f.w).norm() < 1e-9);
    }

    #[test]
    fn spin_angle_is_antisymmetric(n in normal(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let (fi, fj) = (frame_at(&n, a), frame_at(&n, b));
        let forward = spin_angle(&fi, &fj).unwrap();
        let back = spin_angle(&fj, &fi).unwrap();
        prop_assume!(forward.abs() < std::f64::consts::PI - 1e-9);
        prop_assert!((forward + back).abs() < 1e-12);
        let expected = (a - b + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
        prop_assert!((forward - expected).abs() < 1e-9);
    }

    #[test]
    fn ellipsoid_support_is_extreme(pose in pose(), s in semi_axes(), dir in unit_vector(),
                                    samples in prop::collection::vec(unit_vector(), 64)) {
        let p = ellipsoid_support(&pose, &s, &dir);
        let local = pose.inverse_transform_point(&p).coords.component_div(&s);
        prop_assert!((local.norm() - 1.0).abs() < 1e-12);
        let reach = dir.dot(&p.coords);
        for u in samples {
            let q = pose * Point3::from(u.component_mul(&s));
            prop_assert!(dir.dot(&q.coords) <= reach + 1e-12);
        }
    }

    #[test]
    fn curvature_is_invariant_under_rigid_motion(pose in pose(), s in semi_axes(), dir in unit_vector(),
                                                  tangent in unit_vector(), motion in pose()) {
        let shape = Shape::ellipsoid(s.x, s.y, s.z).unwrap();
        let p = ellipsoid_support(&pose, &s, &dir);
        prop_assume!(tangent.cross(&dir).norm() > 1e-3);
        let k = normal_curvature(&shape, &pose, &p, &tangent).unwrap();
        let moved = normal_curvature(&shape, &(motion * pose), &(motion * p), &(motion * tangent)).unwrap();
        prop_assert!((k - moved).abs() <= 1e-9 * k.abs().max(1.0));
        let (lo, hi) = (1.0 / s.max().powi(2) * s.min(), s.max() / s.min().powi(2));
        prop_assert!(k >= lo * (1.0 - 1e-9) && k <= hi * (1.0 + 1e-9), "curvature {k} outside [{lo}, {hi}]");
    }

    #[test]
    fn single_precision_frames_stay_orthonormal(n_old in normal(), tilt in rotation(1.2), n_new in normal()) {
        let c = init_frame(&n_old.cast::<f32>()).unwrap().rotated(&tilt.cast::<f32>());
        let f = continue_frame(&c.u, &c.w, &n_new.cast::<f32>().normalize()).unwrap();
        prop_assert!(f.orthonormality_error() < 1e-5);
    }
}
