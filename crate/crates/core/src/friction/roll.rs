use nalgebra::{Vector2, Vector3};

use super::{cap, check_dt, check_normal, critical_damping, FrictionParams, Mode};
use crate::error::{Error, Result};
use crate::kinematics::ContactFrame;
use crate::scalar::Real;

/// Normal curvature of a surface along a direction; `Pointed` stands for the
/// tip of a pin (unbounded curvature).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curvature<T: Real> {
    Finite(T),
    Pointed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RollStiffness<T: Real> {
    Finite(T),
    /// Mirror contact: rolling is locked.
    Locked,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold<T: Real> {
    Finite(T),
    Unbounded,
}

fn curvature_sum<T: Real>(k_i: Curvature<T>, k_j: Curvature<T>) -> Result<Option<T>> {
    match (k_i, k_j) {
        (Curvature::Finite(a), Curvature::Finite(b)) => {
            let sum = a + b;
            let scale = a.abs() + b.abs();
            if sum < -T::lit(1e-12) * scale {
                Err(Error::param("curvature", "bodies interpenetrate (κ_i + κ_j < 0)"))
            } else {
                Ok(Some(sum.max(T::zero())))
            }
        }
        _ => Ok(None),
    }
}

/// Roll stiffness `4 η_r K_E / (κ_i + κ_j)²`.
pub fn derive_roll_stiffness<T: Real>(
    k_i: Curvature<T>,
    k_j: Curvature<T>,
    eta_r: T,
    k_e: T,
) -> Result<RollStiffness<T>> {
    Ok(match curvature_sum(k_i, k_j)? {
        None => RollStiffness::Finite(T::zero()),
        Some(sum) if sum == T::zero() => RollStiffness::Locked,
        Some(sum) => RollStiffness::Finite(T::lit(4.0) * eta_r * k_e / (sum * sum)),
    })
}

/// Roll threshold `μ N (κ_i + κ_j) / (2 K_E)`.
pub fn roll_threshold<T: Real>(mu: T, n: T, k_e: T, k_i: Curvature<T>, k_j: Curvature<T>) -> Result<Threshold<T>> {
    Ok(match curvature_sum(k_i, k_j)? {
        None => Threshold::Unbounded,
        Some(sum) => Threshold::Finite(mu * n * sum / (T::lit(2.0) * k_e)),
    })
}

/// Roll history `Θ` of one body of the pair, tangent-plane coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RollState<T: Real> {
    pub theta: Vector2<T>,
    pub mode: Mode,
}

impl<T: Real> Default for RollState<T> {
    fn default() -> Self {
        Self {
            theta: Vector2::zeros(),
            mode: Mode::Static,
        }
    }
}

/// Roll torque on the body owning the state, world coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RollOutput<T: Real> {
    pub elastic: Vector3<T>,
    pub damping: Vector3<T>,
    pub stiffness: T,
}

impl<T: Real> RollOutput<T> {
    pub fn total(&self) -> Vector3<T> {
        self.elastic + self.damping
    }
}

/// Advances one body's roll history by `κ_b p_b` and returns its torque.
///
/// `outward` is the body's outward surface normal at the contact, and
/// `inertia` gives the fictitious moment of inertia about a world axis.
#[allow(clippy::too_many_arguments)]
pub fn roll_update<T: Real>(
    state: &mut RollState<T>,
    kappa_b: T,
    kappa_other: Curvature<T>,
    p_b: &Vector2<T>,
    n: T,
    frame: &ContactFrame<T>,
    outward: &Vector3<T>,
    inertia: impl Fn(&Vector3<T>) -> T,
    params: &FrictionParams<T>,
    dt: T,
) -> Result<RollOutput<T>> {
    check_normal(n)?;
    check_dt(dt)?;
    let own = Curvature::Finite(kappa_b);
    let k_r = match params.roll_stiffness {
        Some(k) => k,
        None => match derive_roll_stiffness(own, kappa_other, params.eta_r, params.k_e)? {
            RollStiffness::Finite(k) => k,
            RollStiffness::Locked => {
                return Err(Error::param("curvature", "mirror contact locks rolling"));
            }
        },
    };
    let s_s = roll_threshold(params.mu_s, n, params.k_e, own, kappa_other)?;
    let s_k = roll_threshold(params.mu_k, n, params.k_e, own, kappa_other)?;

    let mode0 = state.mode;
    let increment = p_b * kappa_b;
    let theta = state.theta + increment;
    let (factor, mode1) = cap(mode0, theta.norm(), s_s, s_k);
    state.theta = theta * factor;
    state.mode = mode1;

    let rocking = frame.to_world(&state.theta);
    let elastic = outward.cross(&rocking) * k_r;
    let damping = if params.damping.active(mode0) && increment != Vector2::zeros() {
        let d_r = match params.roll_damping {
            Some(d) => d,
            None => {
                let dir = if state.theta != Vector2::zeros() {
                    rocking
                } else {
                    frame.to_world(&increment)
                };
                let axis = outward.cross(&dir).normalize();
                params.roll_damping_scale * critical_damping(k_r, inertia(&axis))?
            }
        };
        outward.cross(&frame.to_world(&increment)) * (d_r / dt)
    } else {
        Vector3::zeros()
    };
    Ok(RollOutput {
        elastic,
        damping,
        stiffness: k_r,
    })
}
