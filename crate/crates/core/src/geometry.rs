//! Shapes, contact queries and surface curvature.
//!
//! Every query reports a single contact per body pair. The normal of a
//! [`ContactGeom`] points into body `i` (the lower-index body of the pair),
//! and the two contact points are the deepest surface points of each body
//! along that normal.

use nalgebra::{Isometry3, Matrix2, Point3, Unit, Vector3};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerance used when checking that a query point sits on a surface.
pub const ON_SURFACE_TOLERANCE: f64 = 1e-6;

/// Half-space bounded by a plane, in whatever frame the caller uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane<T: Real> {
    pub point: Point3<T>,
    /// Outward normal (points out of the solid half-space).
    pub normal: Unit<Vector3<T>>,
}

impl<T: Real> Plane<T> {
    pub fn new(point: Point3<T>, normal: Vector3<T>) -> Result<Self> {
        let len = normal.norm();
        if !(len > T::zero()) || !len.is_finite_real() {
            return Err(Error::InvalidShape("plane normal has zero length".into()));
        }
        Ok(Self {
            point,
            normal: Unit::new_normalize(normal),
        })
    }

    /// Horizontal ground through the origin with `+z` outward.
    pub fn ground() -> Self {
        Self {
            point: Point3::origin(),
            normal: Vector3::z_axis(),
        }
    }

    pub fn signed_distance(&self, p: &Point3<T>) -> T {
        (p - self.point).dot(&self.normal)
    }

    pub fn transformed(&self, pose: &Isometry3<T>) -> Self {
        Self {
            point: pose * self.point,
            normal: pose.rotation * self.normal,
        }
    }
}

/// Geometric shape of a body, expressed in the body frame (centroid at origin).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape<T: Real> {
    HalfSpace(Plane<T>),
    Sphere {
        radius: T,
    },
    /// Disk that moves in the `x`-`z` plane; its rim behaves like a sphere
    /// for contact purposes.
    Disk2D {
        radius: T,
    },
    Ellipsoid {
        semi_axes: Vector3<T>,
    },
}

impl<T: Real> Shape<T> {
    pub fn sphere(radius: T) -> Result<Self> {
        positive("radius", radius)?;
        Ok(Shape::Sphere { radius })
    }

    pub fn disk(radius: T) -> Result<Self> {
        positive("radius", radius)?;
        Ok(Shape::Disk2D { radius })
    }

    pub fn ellipsoid(a: T, b: T, c: T) -> Result<Self> {
        positive("semi-axis a", a)?;
        positive("semi-axis b", b)?;
        positive("semi-axis c", c)?;
        Ok(Shape::Ellipsoid {
            semi_axes: Vector3::new(a, b, c),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Shape::HalfSpace(p) => {
                let err = (p.normal.norm() - T::one()).abs();
                if err > T::tol(1e-9) {
                    return Err(Error::InvalidShape("plane normal is not unit length".into()));
                }
                Ok(())
            }
            Shape::Sphere { radius } | Shape::Disk2D { radius } => positive("radius", radius),
            Shape::Ellipsoid { semi_axes } => {
                positive("semi-axis a", semi_axes.x)?;
                positive("semi-axis b", semi_axes.y)?;
                positive("semi-axis c", semi_axes.z)
            }
        }
    }

    /// Enclosed volume; `None` for unbounded shapes. The disk is treated as a
    /// sphere of the same radius.
    pub fn volume(&self) -> Option<T> {
        let four_thirds_pi = T::lit(4.0 / 3.0) * T::pi();
        match *self {
            Shape::HalfSpace(_) => None,
            Shape::Sphere { radius } | Shape::Disk2D { radius } => Some(four_thirds_pi * radius * radius * radius),
            Shape::Ellipsoid { semi_axes: s } => Some(four_thirds_pi * s.x * s.y * s.z),
        }
    }

    /// Principal moments of inertia of a uniform solid of mass `mass`.
    pub fn principal_inertia(&self, mass: T) -> Option<Vector3<T>> {
        let fifth = T::lit(0.2);
        match *self {
            Shape::HalfSpace(_) => None,
            Shape::Sphere { radius } => {
                let i = T::lit(0.4) * mass * radius * radius;
                Some(Vector3::new(i, i, i))
            }
            Shape::Disk2D { radius } => {
                let i = T::lit(0.5) * mass * radius * radius;
                Some(Vector3::new(i, i, i))
            }
            Shape::Ellipsoid { semi_axes: s } => Some(Vector3::new(
                fifth * mass * (s.y * s.y + s.z * s.z),
                fifth * mass * (s.x * s.x + s.z * s.z),
                fifth * mass * (s.x * s.x + s.y * s.y),
            )),
        }
    }

    /// Radius used by rolling-resistance models that need a single length.
    pub fn rolling_radius(&self) -> Option<T> {
        match *self {
            Shape::HalfSpace(_) => None,
            Shape::Sphere { radius } | Shape::Disk2D { radius } => Some(radius),
            Shape::Ellipsoid { semi_axes: s } => Some(s.x.min(s.y).min(s.z)),
        }
    }
}

fn positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite_real() {
        Ok(())
    } else {
        Err(Error::InvalidShape(format!(
            "{name} must be strictly positive, got {v}"
        )))
    }
}

/// Output of a contact query between bodies `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactGeom<T: Real> {
    /// Contact point on the surface of body `i` (world).
    pub point_i: Point3<T>,
    /// Contact point on the surface of body `j` (world).
    pub point_j: Point3<T>,
    /// Unit normal pointing into body `i`.
    pub normal: Unit<Vector3<T>>,
    /// Penetration depth; negative values mean separation.
    pub depth: T,
}

impl<T: Real> ContactGeom<T> {
    /// Same contact seen with the roles of the two bodies exchanged.
    pub fn swapped(self) -> Self {
        Self {
            point_i: self.point_j,
            point_j: self.point_i,
            normal: -self.normal,
            depth: self.depth,
        }
    }

    pub fn is_touching(&self) -> bool {
        self.depth >= T::zero()
    }
}

/// Sphere against a plane regardless of separation. Body `i` is the plane.
pub fn sphere_plane_geom<T: Real>(plane: &Plane<T>, center: &Point3<T>, radius: T) -> ContactGeom<T> {
    let dist = plane.signed_distance(center);
    let into_plane = -plane.normal;
    ContactGeom {
        point_i: center - plane.normal.into_inner() * dist,
        point_j: center + into_plane.into_inner() * radius,
        normal: into_plane,
        depth: radius - dist,
    }
}

/// Sphere against a plane; `None` when separated. Body `i` is the plane.
pub fn sphere_plane_contact<T: Real>(plane: &Plane<T>, center: &Point3<T>, radius: T) -> Option<ContactGeom<T>> {
    Some(sphere_plane_geom(plane, center, radius)).filter(ContactGeom::is_touching)
}

/// Two spheres regardless of separation; fails for coincident centers.
pub fn sphere_sphere_geom<T: Real>(
    center_i: &Point3<T>,
    radius_i: T,
    center_j: &Point3<T>,
    radius_j: T,
) -> Result<ContactGeom<T>> {
    let delta = center_i - center_j;
    let dist = delta.norm();
    if !(dist > T::default_epsilon() * (radius_i + radius_j)) {
        return Err(Error::DegenerateNormal("coincident sphere centers"));
    }
    let n = Unit::new_unchecked(delta / dist);
    Ok(ContactGeom {
        point_i: center_i - n.into_inner() * radius_i,
        point_j: center_j + n.into_inner() * radius_j,
        normal: n,
        depth: radius_i + radius_j - dist,
    })
}

pub fn sphere_sphere_contact<T: Real>(
    center_i: &Point3<T>,
    radius_i: T,
    center_j: &Point3<T>,
    radius_j: T,
) -> Result<Option<ContactGeom<T>>> {
    Ok(Some(sphere_sphere_geom(center_i, radius_i, center_j, radius_j)?).filter(ContactGeom::is_touching))
}

/// Support point of an ellipsoid (body frame semi-axes, world pose) in the
/// world direction `dir`.
pub fn ellipsoid_support<T: Real>(pose: &Isometry3<T>, semi_axes: &Vector3<T>, dir: &Vector3<T>) -> Point3<T> {
    let local_dir = pose.rotation.inverse_transform_vector(dir);
    let scaled = local_dir.component_mul(semi_axes);
    let local = scaled.component_mul(semi_axes) / scaled.norm();
    pose * Point3::from(local)
}

/// Ellipsoid against a plane regardless of separation. Body `i` is the plane.
pub fn ellipsoid_plane_geom<T: Real>(plane: &Plane<T>, pose: &Isometry3<T>, semi_axes: &Vector3<T>) -> ContactGeom<T> {
    let into_plane = -plane.normal;
    let support = ellipsoid_support(pose, semi_axes, &into_plane);
    let depth = -plane.signed_distance(&support);
    ContactGeom {
        point_i: support + plane.normal.into_inner() * depth,
        point_j: support,
        normal: into_plane,
        depth,
    }
}

pub fn ellipsoid_plane_contact<T: Real>(
    plane: &Plane<T>,
    pose: &Isometry3<T>,
    semi_axes: &Vector3<T>,
) -> Option<ContactGeom<T>> {
    Some(ellipsoid_plane_geom(plane, pose, semi_axes)).filter(ContactGeom::is_touching)
}

/// Dispatches a contact query for a body pair, keeping contacts whose depth
/// is at least `-margin`.
pub fn collide<T: Real>(
    shape_i: &Shape<T>,
    pose_i: &Isometry3<T>,
    shape_j: &Shape<T>,
    pose_j: &Isometry3<T>,
    margin: T,
) -> Result<Option<ContactGeom<T>>> {
    let geom = match (shape_i, shape_j) {
        (Shape::HalfSpace(p), other) => plane_vs(&p.transformed(pose_i), other, pose_j)?,
        (other, Shape::HalfSpace(p)) => plane_vs(&p.transformed(pose_j), other, pose_i)?.map(ContactGeom::swapped),
        (
            Shape::Sphere { radius: ri } | Shape::Disk2D { radius: ri },
            Shape::Sphere { radius: rj } | Shape::Disk2D { radius: rj },
        ) => Some(sphere_sphere_geom(
            &Point3::from(pose_i.translation.vector),
            *ri,
            &Point3::from(pose_j.translation.vector),
            *rj,
        )?),
        _ => {
            return Err(Error::InvalidShape(format!(
                "no contact query for {shape_i:?} against {shape_j:?}"
            )))
        }
    };
    Ok(geom.filter(|g| g.depth >= -margin))
}

fn plane_vs<T: Real>(plane: &Plane<T>, other: &Shape<T>, pose: &Isometry3<T>) -> Result<Option<ContactGeom<T>>> {
    Ok(match other {
        Shape::Sphere { radius } | Shape::Disk2D { radius } => Some(sphere_plane_geom(
            plane,
            &Point3::from(pose.translation.vector),
            *radius,
        )),
        Shape::Ellipsoid { semi_axes } => Some(ellipsoid_plane_geom(plane, pose, semi_axes)),
        Shape::HalfSpace(_) => None,
    })
}

/// Local quantities of an ellipsoid at a surface point: `D x` with
/// `D = diag(1/a², 1/b², 1/c²)` and the implicit-surface distance estimate.
fn ellipsoid_local<T: Real>(semi_axes: &Vector3<T>, local: &Vector3<T>) -> (Vector3<T>, T) {
    let d = Vector3::new(
        T::one() / (semi_axes.x * semi_axes.x),
        T::one() / (semi_axes.y * semi_axes.y),
        T::one() / (semi_axes.z * semi_axes.z),
    );
    let dx = local.component_mul(&d);
    let f = local.dot(&dx) - T::one();
    let grad = dx.norm() * T::lit(2.0);
    (d, f.abs() / grad)
}

fn check_on_surface<T: Real>(distance: T) -> Result<()> {
    if !distance.is_finite_real() {
        Err(Error::NonFinite("distance to surface".into()))
    } else if distance > T::tol(ON_SURFACE_TOLERANCE) {
        Err(Error::OffSurface {
            distance: distance.as_f64(),
        })
    } else {
        Ok(())
    }
}

fn tangent_unit<T: Real>(normal: &Vector3<T>, dir: &Vector3<T>) -> Result<Vector3<T>> {
    let t = dir - normal * normal.dot(dir);
    let len = t.norm();
    if !(len > T::lit(1e-12)) {
        return Err(Error::param("direction", "not tangent to the surface"));
    }
    Ok(t / len)
}

/// Normal curvature of `shape` (posed by `pose`) at surface point `point`
/// along the tangent direction `dir`. Convex surfaces have positive curvature.
pub fn normal_curvature<T: Real>(
    shape: &Shape<T>,
    pose: &Isometry3<T>,
    point: &Point3<T>,
    dir: &Vector3<T>,
) -> Result<T> {
    match *shape {
        Shape::HalfSpace(p) => {
            check_on_surface(p.transformed(pose).signed_distance(point).abs())?;
            Ok(T::zero())
        }
        Shape::Sphere { radius } | Shape::Disk2D { radius } => {
            let r = point - Point3::from(pose.translation.vector);
            check_on_surface((r.norm() - radius).abs())?;
            Ok(T::one() / radius)
        }
        Shape::Ellipsoid { semi_axes } => {
            let local = pose.inverse_transform_point(point).coords;
            let (d, dist) = ellipsoid_local(&semi_axes, &local);
            check_on_surface(dist)?;
            let dx = local.component_mul(&d);
            let normal = dx.normalize();
            let t = tangent_unit(&normal, &pose.rotation.inverse_transform_vector(dir))?;
            Ok(t.dot(&t.component_mul(&d)) / dx.norm())
        }
    }
}

/// Principal curvatures at a surface point, ascending.
pub fn principal_curvatures<T: Real>(shape: &Shape<T>, pose: &Isometry3<T>, point: &Point3<T>) -> Result<(T, T)> {
    match *shape {
        Shape::HalfSpace(p) => {
            check_on_surface(p.transformed(pose).signed_distance(point).abs())?;
            Ok((T::zero(), T::zero()))
        }
        Shape::Sphere { .. } | Shape::Disk2D { .. } => {
            let k = normal_curvature(shape, pose, point, &Vector3::x())
                .or_else(|_| normal_curvature(shape, pose, point, &Vector3::y()))?;
            Ok((k, k))
        }
        Shape::Ellipsoid { semi_axes } => {
            let local = pose.inverse_transform_point(point).coords;
            let (d, dist) = ellipsoid_local(&semi_axes, &local);
            check_on_surface(dist)?;
            let dx = local.component_mul(&d);
            let scale = dx.norm();
            let normal = dx / scale;
            let e1 = crate::kinematics::orthogonal_unit(&normal);
            let e2 = normal.cross(&e1);
            let m = |a: &Vector3<T>, b: &Vector3<T>| a.dot(&b.component_mul(&d)) / scale;
            let shape_op = Matrix2::new(m(&e1, &e1), m(&e1, &e2), m(&e2, &e1), m(&e2, &e2));
            let eig = shape_op.symmetric_eigenvalues();
            let (a, b) = (eig[0], eig[1]);
            Ok(if a <= b { (a, b) } else { (b, a) })
        }
    }
}

/// Mean of the two principal curvatures, used as the spin curvature.
pub fn spin_curvature<T: Real>(shape: &Shape<T>, pose: &Isometry3<T>, point: &Point3<T>) -> Result<T> {
    let (k1, k2) = principal_curvatures(shape, pose, point)?;
    Ok((k1 + k2) * T::lit(0.5))
}

/// Chord between two successive contact points, standing in for the
/// geodesic arc length travelled on the surface.
pub fn chord_arc_length<T: Real>(prev: &Point3<T>, cur: &Point3<T>) -> T {
    (cur - prev).norm()
}
