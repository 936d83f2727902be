use nalgebra::Vector3;

use crate::scalar::Real;

/// Constant-magnitude rolling torque `-ω̂ μ_r R_eff F_n`.
///
/// With `guarded`, relative angular speeds below `1e-14` rad/s give no
/// torque. Without it only an exactly zero speed does, so a body that should
/// be at rest keeps receiving a full torque whose sign follows the residual
/// velocity.
pub fn legacy_roll_torque<T: Real>(omega_rel: &Vector3<T>, mu_r: T, r_eff: T, f_n: T, guarded: bool) -> Vector3<T> {
    let speed = omega_rel.norm();
    let floor = if guarded { T::lit(1e-14) } else { T::zero() };
    if !(speed > floor) {
        return Vector3::zeros();
    }
    -omega_rel / speed * (mu_r * r_eff * f_n.max(T::zero()))
}
