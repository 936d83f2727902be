use nalgebra::{UnitQuaternion, Vector3};

use super::config::{BodySection, NormalKind, Pose, ScenarioConfig, ScenarioKind};
use crate::dynamics::{fictitious, Body, BodyState, DofMask, Interaction, World};
use crate::error::{Error, Result};
use crate::friction::{critical_damping, FrictionParams};
use crate::geometry::{Plane, Shape};
use crate::normal::{ContactMaterials, Material, NormalModel};
use crate::scalar::Real;

/// Gravity vector for an incline of angle `alpha` (rad), `+x` down-slope.
pub fn incline_gravity<T: Real>(g: f64, alpha: f64) -> Vector3<T> {
    Vector3::new(T::lit(g * alpha.sin()), T::zero(), T::lit(-g * alpha.cos()))
}

fn v3<T: Real>(a: [f64; 3]) -> Vector3<T> {
    Vector3::new(T::lit(a[0]), T::lit(a[1]), T::lit(a[2]))
}

fn opt<T: Real>(v: Option<f64>) -> Option<T> {
    v.map(T::lit)
}

/// Friction parameters for a pair whose fictitious mass is `mass`.
pub fn friction_params<T: Real>(cfg: &ScenarioConfig, mass: f64) -> Result<FrictionParams<T>> {
    let f = &cfg.friction;
    let k_d = match f.k_d {
        Some(k) => k,
        None => f.slide_damping_scale * critical_damping(f.k_e, mass)?,
    };
    let params = FrictionParams {
        mu_s: T::lit(f.mu_s),
        mu_k: T::lit(f.mu_k),
        k_e: T::lit(f.k_e),
        k_d: T::lit(k_d),
        eta_r: T::lit(f.eta_r),
        eta_psi: T::lit(f.eta_psi),
        spin_curvature: T::lit(f.spin_curvature),
        damping: f.damping,
        spin_model: f.spin_model,
        roll_model: f.roll_model,
        mu_r: T::lit(f.mu_r),
        legacy_guard: f.legacy_guard,
        roll_stiffness: opt(f.roll_stiffness),
        roll_damping: opt(f.roll_damping),
        roll_damping_scale: T::lit(f.roll_damping_scale),
    };
    params.validate()?;
    Ok(params)
}

fn material<T: Real>(e: Option<f64>, nu: Option<f64>, what: &str) -> Result<Material<T>> {
    match (e, nu) {
        (Some(e), Some(nu)) => Material::new(T::lit(e), T::lit(nu)),
        _ => Err(Error::Config(format!("{what} needs youngs_modulus and poisson_ratio"))),
    }
}

fn ground_material<T: Real>(cfg: &ScenarioConfig) -> Result<Option<Material<T>>> {
    if cfg.normal.rigid_ground {
        Ok(None)
    } else {
        material(cfg.normal.youngs_modulus, cfg.normal.poisson_ratio, "[normal]").map(Some)
    }
}

/// Material of the moving body: its own entry, else the `[normal]` one.
fn body_material<T: Real>(cfg: &ScenarioConfig) -> Result<Option<Material<T>>> {
    let b = &cfg.body;
    if b.youngs_modulus.is_some() || b.poisson_ratio.is_some() {
        return material(b.youngs_modulus, b.poisson_ratio, "[body]").map(Some);
    }
    if cfg.normal.youngs_modulus.is_some() || cfg.normal.poisson_ratio.is_some() {
        return material(cfg.normal.youngs_modulus, cfg.normal.poisson_ratio, "[normal]").map(Some);
    }
    Ok(None)
}

fn ground<T: Real>() -> Body<T> {
    Body {
        name: "ground".into(),
        shape: Shape::HalfSpace(Plane::ground()),
        state: BodyState::ground(),
    }
}

fn body_mass(b: &BodySection, shape: &Shape<f64>) -> Result<f64> {
    match (b.mass, b.density) {
        (Some(_), Some(_)) => Err(Error::Config("give either body.mass or body.density, not both".into())),
        (Some(m), None) => Ok(m),
        (None, Some(rho)) => Ok(rho * shape.volume().unwrap_or(0.0)),
        (None, None) => Err(Error::Config("body needs a mass or a density".into())),
    }
}

/// Dynamic body from a shape and the `[body]` section; returns it with its
/// mass.
fn make_body<T: Real>(name: &str, shape: Shape<f64>, b: &BodySection) -> Result<(Body<T>, f64)> {
    let mass = body_mass(b, &shape)?;
    let principal = match b.inertia {
        Some(i) => Vector3::repeat(i),
        None => shape
            .principal_inertia(mass)
            .ok_or_else(|| Error::Config("body shape has no inertia".into()))?,
    };
    let mut state = BodyState::dynamic(T::lit(mass), v3(principal.into()))?;
    state.velocity = v3(b.velocity);
    state.angular_velocity = v3(b.angular_velocity);
    let shape = match shape {
        Shape::Sphere { radius } => Shape::sphere(T::lit(radius))?,
        Shape::Disk2D { radius } => Shape::disk(T::lit(radius))?,
        Shape::Ellipsoid { semi_axes: s } => Shape::ellipsoid(T::lit(s.x), T::lit(s.y), T::lit(s.z))?,
        Shape::HalfSpace(_) => return Err(Error::Config("a moving body cannot be a half-space".into())),
    };
    Ok((
        Body {
            name: name.into(),
            shape,
            state,
        },
        mass,
    ))
}

/// Normal law between the ground and the single moving body.
fn ground_normal<T: Real>(cfg: &ScenarioConfig, weight: f64) -> Result<NormalModel<T>> {
    let n = &cfg.normal;
    match n.model {
        NormalKind::Analytic => {
            let materials = match body_material::<T>(cfg)? {
                Some(m) => Some(ContactMaterials {
                    i: ground_material(cfg)?,
                    j: Some(m),
                }),
                None => None,
            };
            Ok(NormalModel::Analytic {
                force: T::lit(weight),
                materials,
            })
        }
        NormalKind::Hookean => Ok(NormalModel::Hookean {
            stiffness: T::lit(n.stiffness),
            restitution: T::lit(n.restitution),
        }),
        NormalKind::Hertzian => Ok(NormalModel::Hertzian {
            materials: ContactMaterials {
                i: ground_material(cfg)?,
                j: Some(
                    body_material(cfg)?
                        .ok_or_else(|| Error::Config("hertzian contact needs a body material".into()))?,
                ),
            },
            restitution: T::lit(n.restitution),
        }),
    }
}

/// Builds the world described by `cfg`. Body 0 is always the ground.
pub fn build_world<T: Real>(cfg: &ScenarioConfig) -> Result<World<T>> {
    cfg.validate()?;
    let g = cfg.gravity;
    let b = &cfg.body;
    let (moving, dof, alpha) = match cfg.scenario {
        ScenarioKind::Stacking => return build_stack(cfg),
        ScenarioKind::BrickIncline => (
            Shape::Sphere { radius: b.radius },
            DofMask::translation_only(),
            cfg.incline.radians()?,
        ),
        ScenarioKind::DiskRolling => (Shape::Disk2D { radius: b.radius }, DofMask::planar_xz(), 0.0),
        ScenarioKind::SphereIncline => (
            Shape::Sphere { radius: b.radius },
            DofMask::free(),
            cfg.incline.radians()?,
        ),
        ScenarioKind::SpinningSphere => (Shape::Sphere { radius: b.radius }, DofMask::free(), 0.0),
        ScenarioKind::SpinningEllipsoid | ScenarioKind::EllipsoidFalling => (
            Shape::Ellipsoid {
                semi_axes: nalgebra::Vector3::from(b.semi_axes),
            },
            DofMask::free(),
            0.0,
        ),
    };
    let (mut body, mass) = make_body::<T>("body", moving, b)?;
    body.state.dof = dof;
    let height = match moving {
        Shape::Ellipsoid { semi_axes: s } => match b.pose {
            Pose::Upright => s.z,
            Pose::Flat => {
                body.state.orientation = UnitQuaternion::from_axis_angle(&Vector3::x_axis(), T::frac_pi_2());
                s.y
            }
        },
        _ => b.radius,
    };
    let weight = mass * g * alpha.cos();
    // a compliant contact starts at its static penetration
    let sink = match cfg.normal.model {
        NormalKind::Hookean => weight / cfg.normal.stiffness,
        _ => 0.0,
    };
    body.state.position = Vector3::new(T::zero(), T::zero(), T::lit(height - sink));

    let it = Interaction {
        i: 0,
        j: 1,
        friction: friction_params(cfg, mass)?,
        normal: ground_normal(cfg, weight)?,
    };
    let mut world = World::new(vec![ground(), body], vec![it], incline_gravity(g, alpha))?;
    world.contact_margin = T::lit(cfg.normal.margin);
    Ok(world)
}

/// Two spheres on the ground with a third laid across the gap between them.
fn build_stack<T: Real>(cfg: &ScenarioConfig) -> Result<World<T>> {
    let s = &cfg.stacking;
    let r = s.radius;
    if !(s.gap >= 0.0 && s.gap < 2.0) {
        return Err(Error::Config("stacking.gap must lie in [0, 2) radii".into()));
    }
    let half = 0.5 * (2.0 + s.gap) * r;
    let top_z = r + ((2.0 * r + s.clearance).powi(2) - half * half).sqrt();
    let sphere = Shape::Sphere { radius: r };
    let at = |name: &str, m: f64, x: f64, z: f64| -> Result<(Body<T>, f64)> {
        let section = BodySection {
            mass: Some(m),
            density: None,
            inertia: None,
            velocity: [0.0; 3],
            angular_velocity: [0.0; 3],
            ..cfg.body.clone()
        };
        let (mut b, m) = make_body::<T>(name, sphere, &section)?;
        b.state.position = Vector3::new(T::lit(x), T::zero(), T::lit(z));
        Ok((b, m))
    };
    let parts = [
        at("left", s.bottom_mass, -half, r)?,
        at("right", s.bottom_mass, half, r)?,
        at("top", s.top_mass, 0.0, top_z)?,
    ];
    let sphere_mat = material::<T>(cfg.normal.youngs_modulus, cfg.normal.poisson_ratio, "[normal]")?;
    let ground_mat = ground_material::<T>(cfg)?;
    let normal = |i: usize| match cfg.normal.model {
        NormalKind::Hertzian => Ok(NormalModel::Hertzian {
            materials: ContactMaterials {
                i: if i == 0 { ground_mat } else { Some(sphere_mat) },
                j: Some(sphere_mat),
            },
            restitution: T::lit(cfg.normal.restitution),
        }),
        NormalKind::Hookean => Ok(NormalModel::Hookean {
            stiffness: T::lit(cfg.normal.stiffness),
            restitution: T::lit(cfg.normal.restitution),
        }),
        NormalKind::Analytic => Err(Error::Config("stacking needs a compliant normal model".into())),
    };
    let masses: Vec<Option<f64>> = std::iter::once(None).chain(parts.iter().map(|p| Some(p.1))).collect();
    let mut interactions = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let m = fictitious(masses[i], masses[j])?;
            interactions.push(Interaction {
                i,
                j,
                friction: friction_params(cfg, m)?,
                normal: normal(i)?,
            });
        }
    }
    let bodies = std::iter::once(ground())
        .chain(parts.into_iter().map(|p| p.0))
        .collect();
    let mut world = World::new(
        bodies,
        interactions,
        Vector3::new(T::zero(), T::zero(), T::lit(-cfg.gravity)),
    )?;
    world.contact_margin = T::lit(cfg.normal.margin);
    Ok(world)
}
