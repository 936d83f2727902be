//! Property checks shared by the property tests and the acceptance runner.
//! Each check runs `cases` randomized cases and reports the first failure.

#![allow(dead_code)]

use frictionlab::dynamics::{Body, BodyState, Interaction, World};
use frictionlab::friction::{
    derive_spin_stiffness, roll_update, slide_thresholds, slide_update, spin_thresholds, spin_update, Curvature,
    Damping, FrictionParams, Mode, RollState, SlideState, SpinLaw, SpinModel, SpinState, SpinStiffnessSource,
};
use frictionlab::geometry::Shape;
use frictionlab::kinematics::{continue_frame, init_frame, ContactFrame};
use frictionlab::normal::{ContactMaterials, Material, NormalModel};
use nalgebra::{Rotation3, Unit, Vector2, Vector3};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn unit_vector() -> impl Strategy<Value = Vector3<f64>> {
    (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        Vector3::new(r * phi.cos(), r * phi.sin(), z)
    })
}

/// Includes the poles and the equator, where the alignment rotation
/// switches branch.
pub fn normal() -> impl Strategy<Value = Vector3<f64>> {
    prop_oneof![
        8 => unit_vector(),
        1 => Just(Vector3::z()),
        1 => Just(-Vector3::z()),
        1 => (0.0f64..std::f64::consts::TAU).prop_map(|p| Vector3::new(p.cos(), p.sin(), 0.0)),
    ]
}

pub fn rotation(max_angle: f64) -> impl Strategy<Value = Rotation3<f64>> {
    (unit_vector(), -max_angle..max_angle)
        .prop_map(|(axis, a)| Rotation3::from_axis_angle(&Unit::new_normalize(axis), a))
}

/// Carried axes: a frame at `n_old`, turned about it, then tilted.
fn carried() -> impl Strategy<Value = (ContactFrame<f64>, Vector3<f64>)> {
    (normal(), 0.0f64..std::f64::consts::TAU, rotation(1.4), normal()).prop_map(|(n_old, spin, tilt, n_new)| {
        let f = init_frame(&n_old).unwrap();
        let turn = Rotation3::from_axis_angle(&Unit::new_normalize(n_old), spin);
        (f.rotated(&turn).rotated(&tilt), n_new)
    })
}

/// Alignment cost of the tangent axes `u`, `w` against the carried axes.
fn cost(c: &ContactFrame<f64>, u: &Vector3<f64>, w: &Vector3<f64>) -> f64 {
    c.u.dot(u) + c.w.dot(w)
}

/// Frames are orthonormal, right-handed and carry the requested normal;
/// the chosen axes maximise the alignment cost against an independent
/// tangent basis, checked in closed form and on a grid.
pub fn frame_orthonormality_and_optimality(cases: u32) -> Result<(), String> {
    run(cases, (carried(), unit_vector()), |((c, n_new), seed)| {
        let f = continue_frame(&c.u, &c.w, &n_new).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(
            f.orthonormality_error() < 1e-12,
            "orthonormality {}",
            f.orthonormality_error()
        );
        prop_assert!((f.n - n_new).norm() < 1e-12, "normal drift {}", (f.n - n_new).norm());

        // independent basis from a random seed direction
        let mut e1 = n_new.cross(&seed);
        if e1.norm() < 1e-3 {
            e1 = n_new.cross(&Vector3::new(seed.y, seed.z, seed.x));
        }
        let e1 = e1.normalize();
        let e2 = n_new.cross(&e1);
        let at = |phi: f64| {
            let u = e1 * phi.cos() + e2 * phi.sin();
            (u, n_new.cross(&u))
        };
        // cost(φ) = A cos φ + B sin φ
        let (ua, wa) = at(0.0);
        let (ub, wb) = at(std::f64::consts::FRAC_PI_2);
        let best = cost(&c, &ua, &wa).hypot(cost(&c, &ub, &wb));
        let got = cost(&c, &f.u, &f.w);
        prop_assert!(got >= best - 1e-10, "cost {got} below optimum {best}");
        let grid = (0..720)
            .map(|k| {
                let (u, w) = at(k as f64 * std::f64::consts::TAU / 720.0);
                cost(&c, &u, &w)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(got >= grid - 1e-10, "cost {got} below grid maximum {grid}");
        Ok(())
    })
}

fn params() -> impl Strategy<Value = FrictionParams<f64>> {
    (
        0.05f64..0.8,
        0.1f64..1.0,
        1e3f64..1e7,
        0.0f64..0.6,
        0.0f64..0.05,
        0.5f64..50.0,
        0.0f64..2e3,
        prop_oneof![Just(Damping::Off), Just(Damping::Always), Just(Damping::StickOnly)],
    )
        .prop_map(
            |(mu_k, ratio, k_e, eta_r, eta_psi, spin_curvature, k_d, damping)| FrictionParams {
                mu_s: mu_k * (1.0 + ratio),
                mu_k,
                k_e,
                k_d,
                eta_r,
                eta_psi,
                spin_curvature,
                damping,
                ..FrictionParams::default()
            },
        )
}

fn pick(mode: Mode, s: f64, k: f64) -> f64 {
    if mode.is_static() {
        s
    } else {
        k
    }
}

/// A capped history never exceeds the threshold of the mode it entered the
/// step in, and sits exactly on it whenever it leaves the step kinetic.
fn check_cap(channel: &str, h: f64, limit: f64, mode: Mode) -> Result<(), TestCaseError> {
    let tol = 1e-12 * limit + 1e-300;
    prop_assert!(h <= limit + tol, "{channel} history {h} above {limit}");
    if mode == Mode::Kinetic {
        prop_assert!((h - limit).abs() <= tol, "kinetic {channel} history {h} off {limit}");
    }
    Ok(())
}

/// Slide, roll and spin histories obey their caps after every update, and
/// capping keeps the direction of the uncapped slide history.
pub fn capping_invariants(cases: u32) -> Result<(), String> {
    let steps = prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.0f64..1.0), 1..40);
    run(
        cases,
        (params(), 0.0f64..100.0, 1e-6f64..1e-3, steps, 1.0f64..20.0),
        |(p, n, scale, steps, kappa)| {
            let (s_s, s_k) = slide_thresholds(p.mu_s, p.mu_k, n, p.k_e);
            let mut slide = SlideState::default();
            let frame = init_frame(&Vector3::z()).unwrap();
            let mut roll = RollState::default();
            let mut spin = SpinState::default();
            let law = SpinLaw::from_params(&p, None).unwrap();
            let (p_s, p_k) = spin_thresholds(p.spin_curvature, p.mu_s, p.mu_k, n, p.k_e);
            for (x, y, z) in steps {
                let ds = Vector2::new(x, y) * scale;
                let before = slide.s + ds;
                let limit = pick(slide.mode, s_s, s_k);
                slide_update(&mut slide, &ds, n, &p, 1e-4).unwrap();
                check_cap("slide", slide.s.norm(), limit, slide.mode)?;
                let s = slide.s.norm();
                if s > 0.0 {
                    prop_assert!(
                        slide.s.perp(&before).abs() <= 1e-9 * s * before.norm(),
                        "slide direction changed"
                    );
                    prop_assert!(slide.s.dot(&before) > 0.0);
                }

                let r_s = p.mu_s * n * kappa / (2.0 * p.k_e);
                let r_k = p.mu_k * n * kappa / (2.0 * p.k_e);
                let limit = pick(roll.mode, r_s, r_k);
                let out = roll_update(
                    &mut roll,
                    kappa,
                    Curvature::Finite(0.0),
                    &ds,
                    n,
                    &frame,
                    &-Vector3::z(),
                    |_| 0.1,
                    &p,
                    1e-4,
                )
                .unwrap();
                check_cap("roll", roll.theta.norm(), limit, roll.mode)?;
                let th = roll.theta.norm();
                prop_assert!((out.elastic.norm() - out.stiffness * th).abs() <= 1e-9 * (1.0 + out.elastic.norm()));

                let psi = (z - 0.5) * scale * 10.0;
                let limit = pick(spin.mode, p_s, p_k);
                spin_update(&mut spin, psi, n, &law, 0.05, &p, 1e-4).unwrap();
                check_cap("spin", spin.psi.abs(), limit, spin.mode)?;
            }
            Ok(())
        },
    )
}

fn ball(m: f64, r: f64, pos: Vector3<f64>, v: Vector3<f64>, w: Vector3<f64>) -> Body<f64> {
    let shape = Shape::sphere(r).unwrap();
    let mut state = BodyState::dynamic(m, shape.principal_inertia(m).unwrap()).unwrap();
    state.position = pos;
    state.velocity = v;
    state.angular_velocity = w;
    Body {
        name: "ball".into(),
        shape,
        state,
    }
}

fn vec3(range: f64) -> impl Strategy<Value = Vector3<f64>> {
    (-range..range, -range..range, -range..range).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

/// Contact forces on the two bodies cancel. Their moments cancel too, once
/// each body's own rolling resistance is set aside, up to the couple from
/// applying the forces at the two surface points a depth apart.
pub fn newtons_third_law(cases: u32) -> Result<(), String> {
    let strategy = (
        params(),
        (0.5f64..3.0, 0.5f64..3.0),
        unit_vector(),
        0.0f64..0.01,
        (vec3(1.0), vec3(1.0), vec3(5.0), vec3(5.0)),
        1usize..30,
    );
    run(
        cases,
        strategy,
        |(p, (ma, mb), dir, overlap, (va, vb, wa, wb), steps)| {
            let r = 0.15;
            let a = ball(ma, r, Vector3::zeros(), va, wa);
            let b = ball(mb, r, dir * (2.0 * r - overlap), vb, wb);
            let mat = Material::new(2e6, 0.3).unwrap();
            let it = Interaction {
                i: 0,
                j: 1,
                friction: p,
                normal: NormalModel::Hertzian {
                    materials: ContactMaterials {
                        i: Some(mat),
                        j: Some(mat),
                    },
                    restitution: 0.5,
                },
            };
            let mut world = World::new(vec![a, b], vec![it], Vector3::zeros()).unwrap();
            for _ in 0..steps {
                world.contact_pipeline_step(1e-5).unwrap();
                let loads = world.loads();
                let f = loads.force[0] + loads.force[1];
                let scale = 1.0 + loads.force[0].norm();
                prop_assert!(f.norm() <= 1e-12 * scale, "net force {f:?}");
                if let Some(rep) = world.report(0) {
                    let x0 = world.bodies[0].state.position;
                    let x1 = world.bodies[1].state.position;
                    let roll = rep.roll_elastic_i + rep.roll_damping_i + rep.roll_elastic_j + rep.roll_damping_j;
                    let moment =
                        loads.torque[0] + loads.torque[1] + x0.cross(&loads.force[0]) + x1.cross(&loads.force[1])
                            - roll;
                    let lever = rep.depth.abs() * loads.force[0].norm();
                    prop_assert!(
                        moment.norm() <= lever * (1.0 + 1e-9) + 1e-10 * scale,
                        "net moment {moment:?}"
                    );
                }
                world.step(1e-5).unwrap();
            }
            Ok(())
        },
    )
}

/// The Hertzian spin law equals the empirical one with `η_ψ = 1/2` and
/// curvature `1/a`, in stiffness, thresholds and full update sequences.
pub fn hertz_empirical_equivalence(cases: u32) -> Result<(), String> {
    let steps = prop::collection::vec(-1e-3f64..1e-3, 1..30);
    run(
        cases,
        (params(), 1e-6f64..1e-2, 0.1f64..100.0, steps),
        |(p, a, n, steps)| {
            let h = derive_spin_stiffness(SpinStiffnessSource::Hertzian { patch_radius: a }, p.k_e).unwrap();
            let e = derive_spin_stiffness(
                SpinStiffnessSource::Empirical {
                    eta_psi: 0.5,
                    curvature: 1.0 / a,
                },
                p.k_e,
            )
            .unwrap();
            prop_assert!((h - e).abs() <= 1e-12 * h.abs());

            let hp = FrictionParams {
                spin_model: SpinModel::Hertzian,
                ..p
            };
            let ep = FrictionParams {
                spin_model: SpinModel::Empirical,
                eta_psi: 0.5,
                spin_curvature: 1.0 / a,
                ..p
            };
            let hl = SpinLaw::from_params(&hp, Some(a)).unwrap();
            let el = SpinLaw::from_params(&ep, None).unwrap();
            let (hs, hk) = hl.thresholds(&hp, n);
            let (es, ek) = el.thresholds(&ep, n);
            prop_assert!((hs - es).abs() <= 1e-12 * hs && (hk - ek).abs() <= 1e-12 * hk);
            let (mut sh, mut se) = (SpinState::default(), SpinState::default());
            for psi in steps {
                let oh = spin_update(&mut sh, psi, n, &hl, 0.01, &hp, 1e-4).unwrap();
                let oe = spin_update(&mut se, psi, n, &el, 0.01, &ep, 1e-4).unwrap();
                prop_assert_eq!(sh.mode, se.mode);
                prop_assert!((sh.psi - se.psi).abs() <= 1e-12 * (sh.psi.abs() + 1e-300));
                prop_assert!((oh.total() - oe.total()).abs() <= 1e-10 * (oh.total().abs() + 1e-300));
            }
            Ok(())
        },
    )
}
