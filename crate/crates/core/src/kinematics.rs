//! Contact frames carried across time steps and the tangent-plane motion of
//! the contact point on each body.
//!
//! Each body in a contact pair owns a right-handed frame `(n, u, w)`. Between
//! steps the `u`/`w` axes ride along with the body; at the new step they are
//! re-fitted to the new normal by picking the tangent pair that best aligns
//! with the carried axes. The angle between the two bodies' re-fitted frames
//! is the spin increment, and the motion of each body's old contact point
//! relative to the new one gives the tangent displacement vectors.

use nalgebra::{Isometry3, Matrix3, Point3, Rotation3, Unit, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Right-handed orthonormal triad with `u × w = n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactFrame<T: Real> {
    pub n: Vector3<T>,
    pub u: Vector3<T>,
    pub w: Vector3<T>,
}

impl<T: Real> ContactFrame<T> {
    /// World vector to tangent-plane coordinates `(u·v, w·v)`.
    pub fn to_plane(&self, v: &Vector3<T>) -> Vector2<T> {
        Vector2::new(self.u.dot(v), self.w.dot(v))
    }

    pub fn to_world(&self, p: &Vector2<T>) -> Vector3<T> {
        self.u * p.x + self.w * p.y
    }

    /// Largest deviation from orthonormality and right-handedness.
    pub fn orthonormality_error(&self) -> T {
        let one = T::one();
        let errs = [
            (self.n.norm() - one).abs(),
            (self.u.norm() - one).abs(),
            (self.w.norm() - one).abs(),
            self.u.dot(&self.w).abs(),
            self.u.dot(&self.n).abs(),
            self.w.dot(&self.n).abs(),
            (self.u.cross(&self.w) - self.n).amax(),
        ];
        errs.into_iter().fold(T::zero(), |a, b| a.max(b))
    }

    /// Same frame expressed after a rigid rotation.
    pub fn rotated(&self, rot: &Rotation3<T>) -> Self {
        Self {
            n: rot * self.n,
            u: rot * self.u,
            w: rot * self.w,
        }
    }
}

/// Unit vector orthogonal to `n`: `e_x` with its `n` component removed, or
/// `e_y` when `n` is within ~8° of the `x` axis.
pub fn orthogonal_unit<T: Real>(n: &Vector3<T>) -> Vector3<T> {
    let ex = Vector3::x();
    let seed = if n.dot(&ex).abs() > T::lit(0.99) {
        Vector3::y()
    } else {
        ex
    };
    (seed - n * n.dot(&seed)).normalize()
}

/// Deterministic frame for a contact that has just started.
pub fn init_frame<T: Real>(n0: &Vector3<T>) -> Result<ContactFrame<T>> {
    let len = n0.norm();
    if !(len > T::zero()) || !len.is_finite_real() {
        return Err(Error::DegenerateNormal("zero-length normal"));
    }
    let n = n0 / len;
    let u = orthogonal_unit(&n);
    Ok(ContactFrame { n, u, w: n.cross(&u) })
}

/// Proper rotation taking the unit vector `n` onto `e_z`.
///
/// Normals in the lower hemisphere are first flipped by a half-turn about
/// `x`, which keeps the construction well conditioned and fixes the
/// antipodal case.
pub fn align_rotation<T: Real>(n: &Unit<Vector3<T>>) -> Rotation3<T> {
    let n = n.into_inner();
    let (flip, m) = if n.z < T::zero() {
        let flip = Rotation3::from_matrix_unchecked(Matrix3::new(
            T::one(),
            T::zero(),
            T::zero(),
            T::zero(),
            -T::one(),
            T::zero(),
            T::zero(),
            T::zero(),
            -T::one(),
        ));
        (Some(flip), flip * n)
    } else {
        (None, n)
    };
    // Rodrigues form for the rotation taking m to e_z, valid for m.z > -1.
    let v = m.cross(&Vector3::z());
    let c = m.z;
    let k = v.cross_matrix();
    let r = Matrix3::identity() + k + k * k * (T::one() / (T::one() + c));
    let r = Rotation3::from_matrix_unchecked(r);
    match flip {
        Some(f) => r * f,
        None => r,
    }
}

/// Tangent axes at `n_new` that maximise `u_carried·u + w_carried·w`.
///
/// The carried axes are rotated into a configuration where the normal is
/// `e_z`; there the candidate axes are `û = (sin θ, cos θ, 0)` and
/// `ŵ = (-cos θ, sin θ, 0)` and the cost is
/// `f(θ) = (a_x + b_y) sin θ + (a_y - b_x) cos θ`. Of the two stationary
/// angles the one with the larger cost wins; exact ties go to the smaller
/// angle in `[0, 2π)`.
pub fn continue_frame<T: Real>(
    u_carried: &Vector3<T>,
    w_carried: &Vector3<T>,
    n_new: &Vector3<T>,
) -> Result<ContactFrame<T>> {
    if (n_new.norm() - T::one()).abs() > T::tol(1e-9) {
        return Err(Error::param("n_new", "normal is not unit length"));
    }
    let n = Unit::new_normalize(*n_new);
    let rot = align_rotation(&n);
    let theta = optimal_angle(&(rot * u_carried), &(rot * w_carried));
    let (s, c) = theta.sin_cos();
    let u_hat = Vector3::new(s, c, T::zero());
    let w_hat = Vector3::new(-c, s, T::zero());
    let inv = rot.inverse();
    let u = inv * u_hat;
    let w = inv * w_hat;
    Ok(ContactFrame { n: u.cross(&w), u, w })
}

/// Closed-form maximiser of `f(θ)` given the carried axes `a`, `b` in the
/// aligned configuration.
pub fn optimal_angle<T: Real>(a: &Vector3<T>, b: &Vector3<T>) -> T {
    let p = a.x + b.y;
    let q = a.y - b.x;
    let two_pi = T::two_pi();
    let f = |t: T| p * t.sin() + q * t.cos();
    let (t1, t2) = if q == T::zero() {
        (T::frac_pi_2(), T::lit(3.0) * T::frac_pi_2())
    } else {
        let base = (p / q).atan();
        let wrap = |t: T| if t < T::zero() { t + two_pi } else { t };
        let (x, y) = (wrap(base), wrap(base + T::pi()));
        let y = if y >= two_pi { y - two_pi } else { y };
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    };
    let (f1, f2) = (f(t1), f(t2));
    if (f1 - f2).abs() <= T::lit(1e-14) || f1 > f2 {
        t1
    } else {
        t2
    }
}

/// Signed spin angle about the shared normal taking frame `j` onto frame `i`;
/// counterclockwise about `n` is positive. Result lies in `(-π, π]`.
pub fn spin_angle<T: Real>(frame_i: &ContactFrame<T>, frame_j: &ContactFrame<T>) -> Result<T> {
    if (frame_i.n - frame_j.n).norm() > T::tol(1e-9) {
        return Err(Error::param("frame_j", "frames do not share a normal"));
    }
    let n = frame_i.n;
    let psi = n.dot(&frame_j.u.cross(&frame_i.u)).atan2(frame_j.u.dot(&frame_i.u));
    Ok(if psi <= -T::pi() { T::pi() } else { psi })
}

/// Per-body tracking record for one contact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactTrack<T: Real> {
    pub frame: ContactFrame<T>,
    /// Previous contact point, world coordinates.
    pub prev_point: Point3<T>,
    /// Length of the last arc travelled by the contact point (chord).
    pub arc_len: T,
    /// Last displacement vector in frame coordinates.
    pub p: Vector2<T>,
}

impl<T: Real> ContactTrack<T> {
    pub fn start(point: Point3<T>, normal: &Vector3<T>) -> Result<Self> {
        Ok(Self {
            frame: init_frame(normal)?,
            prev_point: point,
            arc_len: T::zero(),
            p: Vector2::zeros(),
        })
    }

    /// The record as seen after its body moved rigidly by `motion`
    /// (`pose_new * pose_old⁻¹`): the point and axes ride with the body.
    pub fn carried_by(&self, motion: &Isometry3<T>) -> Self {
        Self {
            frame: ContactFrame {
                n: motion.rotation * self.frame.n,
                u: motion.rotation * self.frame.u,
                w: motion.rotation * self.frame.w,
            },
            prev_point: motion * self.prev_point,
            ..*self
        }
    }

    /// Re-anchors the record at the new contact point and frame.
    pub fn advanced(&self, point: Point3<T>, frame: ContactFrame<T>, p: Vector2<T>, arc_len: T) -> Self {
        Self {
            frame,
            prev_point: point,
            arc_len,
            p,
        }
    }
}

/// Tangent displacement of the contact point over one step, in `frame_new`
/// coordinates.
///
/// `track.prev_point` must already be carried to the current pose. The old
/// point is projected onto the tangent plane at `new_point` along the normal,
/// and the resulting vector is rescaled to the chord length between the two
/// points. Returns the vector and the chord length.
pub fn displacement_vector<T: Real>(
    track: &ContactTrack<T>,
    new_point: &Point3<T>,
    frame_new: &ContactFrame<T>,
) -> (Vector2<T>, T) {
    let d = new_point - track.prev_point;
    let arc = d.norm();
    let tangential = d - frame_new.n * frame_new.n.dot(&d);
    let t_len = tangential.norm();
    if !(t_len > T::default_epsilon() * (T::one() + arc)) {
        return (Vector2::zeros(), arc);
    }
    let p = tangential * (arc / t_len);
    (frame_new.to_plane(&p), arc)
}

/// Slip increment `p_i - p_j`, with `p_j` already counter-spun into the
/// frame of body `i`.
pub fn slip_increment<T: Real>(p_i: &Vector2<T>, p_j: &Vector2<T>) -> Vector2<T> {
    p_i - p_j
}
