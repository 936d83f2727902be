use nalgebra::Vector2;

use super::{cap, check_dt, check_normal, FrictionParams, Mode, Threshold};
use crate::error::Result;
use crate::scalar::Real;

/// Slide history `S` (tangent-plane coordinates of body `i`'s frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlideState<T: Real> {
    pub s: Vector2<T>,
    pub mode: Mode,
}

impl<T: Real> Default for SlideState<T> {
    fn default() -> Self {
        Self {
            s: Vector2::zeros(),
            mode: Mode::Static,
        }
    }
}

/// Slide force on body `i`, tangent-plane coordinates. Body `j` receives the
/// negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlideOutput<T: Real> {
    pub elastic: Vector2<T>,
    pub damping: Vector2<T>,
}

impl<T: Real> SlideOutput<T> {
    pub fn total(&self) -> Vector2<T> {
        self.elastic + self.damping
    }
}

/// Static and kinetic slide thresholds `μ N / K_E`.
pub fn slide_thresholds<T: Real>(mu_s: T, mu_k: T, n: T, k_e: T) -> (T, T) {
    (mu_s * n / k_e, mu_k * n / k_e)
}

/// Advances the slide history by `ds` and returns the friction force on `i`.
pub fn slide_update<T: Real>(
    state: &mut SlideState<T>,
    ds: &Vector2<T>,
    n: T,
    params: &FrictionParams<T>,
    dt: T,
) -> Result<SlideOutput<T>> {
    check_normal(n)?;
    check_dt(dt)?;
    let mode0 = state.mode;
    let (s_s, s_k) = slide_thresholds(params.mu_s, params.mu_k, n, params.k_e);
    let s = state.s + ds;
    let (factor, mode1) = cap(mode0, s.norm(), Threshold::Finite(s_s), Threshold::Finite(s_k));
    state.s = s * factor;
    state.mode = mode1;
    let damping = if params.damping.active(mode0) {
        ds * (params.k_d / dt)
    } else {
        Vector2::zeros()
    };
    Ok(SlideOutput {
        elastic: state.s * params.k_e,
        damping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::friction::Damping;
    use approx::assert_relative_eq;

    fn brick() -> FrictionParams<f64> {
        FrictionParams {
            mu_s: 0.25,
            mu_k: 0.2,
            k_e: 1e5,
            k_d: 632.0,
            ..Default::default()
        }
    }

    #[test]
    fn brick_thresholds() {
        let n = 9.8 * 0.18f64.cos();
        let (s, k) = slide_thresholds(0.25, 0.2, n, 1e5);
        assert_relative_eq!(s, 2.41e-5, max_relative = 2e-3);
        assert_relative_eq!(k, 1.928e-5, max_relative = 2e-3);
        let (s2, _) = slide_thresholds(0.25, 0.2, 2.0 * n, 1e5);
        assert_relative_eq!(s2, 2.0 * s);
        let (s3, _) = slide_thresholds(0.25, 0.2, 3.0 * n, 3e5);
        assert_relative_eq!(s3, s, max_relative = 1e-15);
    }

    #[test]
    fn zero_increment_gives_zero_force() {
        let mut st = SlideState::default();
        let out = slide_update(&mut st, &Vector2::zeros(), 10.0, &brick(), 1e-4).unwrap();
        assert_eq!(out.total(), Vector2::zeros());
        assert_eq!(st.mode, Mode::Static);
    }

    #[test]
    fn overshoot_caps_to_static_limit_and_switches() {
        let p = brick();
        let n = 10.0;
        let limit = p.mu_s * n / p.k_e;
        let mut st = SlideState::default();
        let out = slide_update(&mut st, &Vector2::new(1.5 * limit, 0.0), n, &p, 1e-4).unwrap();
        assert_eq!(st.mode, Mode::Kinetic);
        assert_relative_eq!(out.elastic.norm(), p.mu_s * n, max_relative = 1e-12);
        // next step keeps pushing: kinetic cap
        let out = slide_update(&mut st, &Vector2::new(1e-6, 0.0), n, &p, 1e-4).unwrap();
        assert_eq!(st.mode, Mode::Kinetic);
        assert_relative_eq!(out.elastic.norm(), p.mu_k * n, max_relative = 1e-12);
        // reversing motion drops below the kinetic limit: back to static
        slide_update(&mut st, &Vector2::new(-1e-6, 0.0), n, &p, 1e-4).unwrap();
        assert_eq!(st.mode, Mode::Static);
    }

    #[test]
    fn damping_uses_mode_at_step_start() {
        let p = FrictionParams {
            damping: Damping::StickOnly,
            ..brick()
        };
        let mut st = SlideState::default();
        let ds = Vector2::new(1e-3, 0.0);
        let out = slide_update(&mut st, &ds, 10.0, &p, 1e-4).unwrap();
        assert_eq!(st.mode, Mode::Kinetic);
        assert_relative_eq!(out.damping.x, 632.0 * 10.0);
        let out = slide_update(&mut st, &ds, 10.0, &p, 1e-4).unwrap();
        assert_eq!(out.damping, Vector2::zeros());

        let mut st = SlideState {
            s: Vector2::zeros(),
            mode: Mode::Kinetic,
        };
        let out = slide_update(&mut st, &ds, 10.0, &brick(), 1e-4).unwrap();
        assert_relative_eq!(out.damping.x, 632.0 * 10.0);
    }

    #[test]
    fn zero_normal_force_clears_history() {
        let mut st = SlideState {
            s: Vector2::new(1e-5, 0.0),
            mode: Mode::Static,
        };
        let out = slide_update(&mut st, &Vector2::zeros(), 0.0, &brick(), 1e-4).unwrap();
        assert_eq!(st.s, Vector2::zeros());
        assert_eq!(out.elastic, Vector2::zeros());
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut st = SlideState::default();
        assert!(slide_update(&mut st, &Vector2::zeros(), -1.0, &brick(), 1e-4).is_err());
        assert!(slide_update(&mut st, &Vector2::zeros(), 1.0, &brick(), 0.0).is_err());
    }

    #[test]
    fn undamped_closed_loop_is_lossless() {
        // sub-threshold loop: the work of the elastic force over a closed S path vanishes
        let p = FrictionParams {
            damping: Damping::Off,
            ..brick()
        };
        let n = 10.0;
        let mut st = SlideState::default();
        let mut work = 0.0;
        let steps = 1000;
        let amp = 1e-5;
        for k in 0..steps {
            let th0 = std::f64::consts::TAU * k as f64 / steps as f64;
            let th1 = std::f64::consts::TAU * (k + 1) as f64 / steps as f64;
            let ds = Vector2::new(amp * (th1.cos() - th0.cos()), amp * (th1.sin() - th0.sin()));
            let before = st.s;
            let out = slide_update(&mut st, &ds, n, &p, 1e-4).unwrap();
            // trapezoid rule on a linear spring is exact
            work += 0.5 * (before * p.k_e + out.elastic).dot(&ds);
        }
        assert_eq!(st.mode, Mode::Static);
        assert!(work.abs() < 1e-10, "work {work}");
    }
}
