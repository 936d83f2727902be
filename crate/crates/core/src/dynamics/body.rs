use nalgebra::{Isometry3, Matrix3, Point3, Translation3, UnitQuaternion, Vector3};

use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::scalar::Real;

/// Mass properties; ground bodies are immovable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassProps<T: Real> {
    Ground,
    Dynamic {
        mass: T,
        /// Inertia tensor about the centroid, body frame.
        inertia: Matrix3<T>,
    },
}

/// Per-axis freedom of a body (1 = free, 0 = locked), world axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DofMask<T: Real> {
    pub linear: Vector3<T>,
    pub angular: Vector3<T>,
}

impl<T: Real> DofMask<T> {
    pub fn free() -> Self {
        Self {
            linear: Vector3::repeat(T::one()),
            angular: Vector3::repeat(T::one()),
        }
    }

    /// Translation only (a body that never rotates).
    pub fn translation_only() -> Self {
        Self {
            linear: Vector3::repeat(T::one()),
            angular: Vector3::zeros(),
        }
    }

    /// Motion in the `x`-`z` plane with rotation about `y`.
    pub fn planar_xz() -> Self {
        Self {
            linear: Vector3::new(T::one(), T::zero(), T::one()),
            angular: Vector3::new(T::zero(), T::one(), T::zero()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyState<T: Real> {
    pub position: Vector3<T>,
    pub orientation: UnitQuaternion<T>,
    pub velocity: Vector3<T>,
    /// Angular velocity, world frame.
    pub angular_velocity: Vector3<T>,
    pub mass: MassProps<T>,
    pub dof: DofMask<T>,
}

impl<T: Real> BodyState<T> {
    pub fn ground() -> Self {
        Self {
            position: Vector3::zeros(),
            orientation: UnitQuaternion::identity(),
            velocity: Vector3::zeros(),
            angular_velocity: Vector3::zeros(),
            mass: MassProps::Ground,
            dof: DofMask {
                linear: Vector3::zeros(),
                angular: Vector3::zeros(),
            },
        }
    }

    pub fn dynamic(mass: T, principal_inertia: Vector3<T>) -> Result<Self> {
        if !(mass > T::zero()) || !mass.is_finite_real() {
            return Err(Error::param("mass", "must be positive"));
        }
        if principal_inertia
            .iter()
            .any(|&i| !(i > T::zero()) || !i.is_finite_real())
        {
            return Err(Error::param("inertia", "principal moments must be positive"));
        }
        Ok(Self {
            mass: MassProps::Dynamic {
                mass,
                inertia: Matrix3::from_diagonal(&principal_inertia),
            },
            dof: DofMask::free(),
            ..Self::ground()
        })
    }

    pub fn is_ground(&self) -> bool {
        matches!(self.mass, MassProps::Ground)
    }

    pub fn mass(&self) -> Option<T> {
        match self.mass {
            MassProps::Ground => None,
            MassProps::Dynamic { mass, .. } => Some(mass),
        }
    }

    pub fn pose(&self) -> Isometry3<T> {
        Isometry3::from_parts(Translation3::from(self.position), self.orientation)
    }

    pub fn center(&self) -> Point3<T> {
        Point3::from(self.position)
    }

    /// Inertia tensor in world axes.
    pub fn inertia_world(&self) -> Option<Matrix3<T>> {
        match self.mass {
            MassProps::Ground => None,
            MassProps::Dynamic { inertia, .. } => {
                let r = self.orientation.to_rotation_matrix();
                Some(r.matrix() * inertia * r.matrix().transpose())
            }
        }
    }

    /// Moment of inertia about a world axis through the centroid.
    pub fn inertia_about(&self, axis: &Vector3<T>) -> Option<T> {
        self.inertia_world().map(|i| axis.dot(&(i * axis)))
    }

    /// Velocity of the material point currently at `point`.
    pub fn point_velocity(&self, point: &Point3<T>) -> Vector3<T> {
        self.velocity + self.angular_velocity.cross(&(point - self.center()))
    }

    pub fn linear_momentum(&self) -> Vector3<T> {
        self.mass().map_or_else(Vector3::zeros, |m| self.velocity * m)
    }

    pub fn kinetic_energy(&self) -> T {
        match (self.mass(), self.inertia_world()) {
            (Some(m), Some(i)) => {
                let w = self.angular_velocity;
                T::lit(0.5) * (m * self.velocity.norm_squared() + w.dot(&(i * w)))
            }
            _ => T::zero(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.position.iter().all(|v| v.is_finite_real())
            && self.velocity.iter().all(|v| v.is_finite_real())
            && self.angular_velocity.iter().all(|v| v.is_finite_real())
            && self.orientation.coords.iter().all(|v| v.is_finite_real())
    }
}

/// A body: its state and its shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Body<T: Real> {
    pub name: String,
    pub shape: Shape<T>,
    pub state: BodyState<T>,
}

/// Fictitious mass-like quantity of a pair: the average of the two, or the
/// movable body's value when the other is ground.
pub fn fictitious<T: Real>(a: Option<T>, b: Option<T>) -> Result<T> {
    match (a, b) {
        (Some(x), Some(y)) => Ok((x + y) * T::lit(0.5)),
        (Some(x), None) | (None, Some(x)) => Ok(x),
        (None, None) => Err(Error::param("bodies", "contact between two ground bodies")),
    }
}

/// Reduced mass `m_i m_j / (m_i + m_j)`, or the movable body's mass.
pub fn reduced<T: Real>(a: Option<T>, b: Option<T>) -> Result<T> {
    match (a, b) {
        (Some(x), Some(y)) => Ok(x * y / (x + y)),
        (Some(x), None) | (None, Some(x)) => Ok(x),
        (None, None) => Err(Error::param("bodies", "contact between two ground bodies")),
    }
}
