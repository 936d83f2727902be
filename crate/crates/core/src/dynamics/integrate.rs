use nalgebra::{Point3, UnitQuaternion, Vector3};

use super::body::{BodyState, MassProps};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Per-body force and torque (about the centroid), world frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadAccumulator<T: Real> {
    pub force: Vec<Vector3<T>>,
    pub torque: Vec<Vector3<T>>,
}

impl<T: Real> LoadAccumulator<T> {
    pub fn new(bodies: usize) -> Self {
        Self {
            force: vec![Vector3::zeros(); bodies],
            torque: vec![Vector3::zeros(); bodies],
        }
    }

    pub fn clear(&mut self) {
        self.force.iter_mut().for_each(|f| *f = Vector3::zeros());
        self.torque.iter_mut().for_each(|t| *t = Vector3::zeros());
    }

    pub fn add_force(&mut self, body: usize, force: &Vector3<T>) {
        self.force[body] += force;
    }

    /// Force applied at `point`, adding the induced torque about `center`.
    pub fn add_force_at(&mut self, body: usize, force: &Vector3<T>, point: &Point3<T>, center: &Point3<T>) {
        self.force[body] += force;
        self.torque[body] += (point - center).cross(force);
    }

    pub fn add_torque(&mut self, body: usize, torque: &Vector3<T>) {
        self.torque[body] += torque;
    }

    pub fn is_finite(&self) -> bool {
        self.force
            .iter()
            .chain(self.torque.iter())
            .all(|v| v.iter().all(|c| c.is_finite_real()))
    }
}

/// One half-implicit step: velocities from the accelerations at the start
/// of the step, then positions and orientation from the new velocities.
pub fn integrate_step<T: Real>(state: &mut BodyState<T>, force: &Vector3<T>, torque: &Vector3<T>, dt: T) -> Result<()> {
    if !(dt > T::zero()) {
        return Err(Error::param("dt", "time step must be positive"));
    }
    if !force.iter().chain(torque.iter()).all(|c| c.is_finite_real()) {
        return Err(Error::NonFinite("applied load".into()));
    }
    let MassProps::Dynamic { mass, .. } = state.mass else {
        return Ok(());
    };
    let inertia = state.inertia_world().expect("dynamic body has inertia");
    let omega = state.angular_velocity;
    let gyro = omega.cross(&(inertia * omega));
    let inv = inertia
        .try_inverse()
        .ok_or_else(|| Error::NonFinite("singular inertia tensor".into()))?;
    let alpha = inv * (torque - gyro);

    state.velocity = (state.velocity + force * (dt / mass)).component_mul(&state.dof.linear);
    state.angular_velocity = (omega + alpha * dt).component_mul(&state.dof.angular);
    state.position += state.velocity * dt;
    let spin = UnitQuaternion::from_scaled_axis(state.angular_velocity * dt);
    state.orientation = UnitQuaternion::new_normalize((spin * state.orientation).into_inner());

    if !state.is_finite() {
        return Err(Error::NonFinite("body state after integration".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ball() -> BodyState<f64> {
        BodyState::dynamic(2.0, Vector3::repeat(0.1)).unwrap()
    }

    #[test]
    fn free_fall_one_step() {
        let mut b = ball();
        let dt = 1e-4;
        integrate_step(&mut b, &Vector3::new(0.0, 0.0, -9.8 * 2.0), &Vector3::zeros(), dt).unwrap();
        assert_relative_eq!(b.velocity.z, -9.8 * dt, max_relative = 1e-14);
        assert_relative_eq!(b.position.z, -9.8 * dt * dt, max_relative = 1e-14);
    }

    #[test]
    fn constant_velocity_advances_exactly() {
        let mut b = ball();
        b.velocity = Vector3::new(1.0, 0.0, 0.0);
        integrate_step(&mut b, &Vector3::zeros(), &Vector3::zeros(), 1e-4).unwrap();
        assert_eq!(b.position.x, 1e-4);
    }

    #[test]
    fn pure_spin_rotates_by_omega_dt() {
        let mut b = ball();
        b.angular_velocity = Vector3::new(0.0, 0.0, 1.0);
        integrate_step(&mut b, &Vector3::zeros(), &Vector3::zeros(), 1e-4).unwrap();
        let (axis, angle) = b.orientation.axis_angle().unwrap();
        assert_relative_eq!(angle, 1e-4, max_relative = 1e-10);
        assert_relative_eq!(axis.into_inner(), Vector3::z(), epsilon = 1e-12);
        assert_relative_eq!(b.orientation.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ground_never_moves() {
        let mut g = BodyState::<f64>::ground();
        integrate_step(&mut g, &Vector3::new(1.0, 2.0, 3.0), &Vector3::repeat(1.0), 1e-3).unwrap();
        assert_eq!(g, BodyState::ground());
    }

    #[test]
    fn masks_lock_axes() {
        let mut b = ball();
        b.dof.linear = Vector3::new(1.0, 0.0, 1.0);
        b.dof.angular = Vector3::new(0.0, 1.0, 0.0);
        integrate_step(&mut b, &Vector3::repeat(1.0), &Vector3::repeat(1.0), 1e-3).unwrap();
        assert_eq!(b.velocity.y, 0.0);
        assert_eq!(b.angular_velocity.x, 0.0);
        assert_eq!(b.angular_velocity.z, 0.0);
        assert!(b.angular_velocity.y > 0.0);
    }

    #[test]
    fn non_finite_load_is_rejected() {
        let mut b = ball();
        let err = integrate_step(&mut b, &Vector3::new(f64::NAN, 0.0, 0.0), &Vector3::zeros(), 1e-3).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn symplectic_spring_energy_is_bounded() {
        let (m, k, dt) = (1.0f64, 100.0, 1e-3);
        let mut b = BodyState::dynamic(m, Vector3::repeat(1.0)).unwrap();
        b.position.x = 0.1;
        let e0 = 0.5 * k * 0.01;
        let mut worst = 0.0f64;
        for _ in 0..100_000 {
            let f = Vector3::new(-k * b.position.x, 0.0, 0.0);
            integrate_step(&mut b, &f, &Vector3::zeros(), dt).unwrap();
            let e = 0.5 * m * b.velocity.norm_squared() + 0.5 * k * b.position.x * b.position.x;
            worst = worst.max((e - e0).abs() / e0);
        }
        assert!(worst < 0.01, "energy error {worst}");
    }

    #[test]
    fn accumulator_induced_torque() {
        let mut acc = LoadAccumulator::<f64>::new(1);
        acc.add_force_at(0, &Vector3::x(), &Point3::new(0.0, 0.0, -1.0), &Point3::origin());
        assert_relative_eq!(acc.torque[0], Vector3::new(0.0, -1.0, 0.0));
        acc.clear();
        assert_eq!(acc.force[0], Vector3::zeros());
        assert!(acc.is_finite());
    }
}
