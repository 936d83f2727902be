//! Closed-form reference solutions: steady state of a sphere on an incline
//! and the motion of a brick on an incline.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gravitational acceleration used throughout (m/s²).
pub const GRAVITY: f64 = 9.8;

/// Steady-state class of a sphere on an incline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SteadyState {
    /// Stationary.
    S,
    /// Pure rolling.
    PR,
    /// Rolling with slipping.
    RwS,
    /// Pure slipping.
    PS,
}

impl SteadyState {
    pub fn label(self) -> &'static str {
        match self {
            SteadyState::S => "S",
            SteadyState::PR => "PR",
            SteadyState::RwS => "RwS",
            SteadyState::PS => "PS",
        }
    }

    /// Rank by mobility, stationary first.
    pub fn mobility(self) -> u8 {
        match self {
            SteadyState::S => 0,
            SteadyState::PR => 1,
            SteadyState::RwS => 2,
            SteadyState::PS => 3,
        }
    }
}

impl fmt::Display for SteadyState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SteadyState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" => Ok(SteadyState::S),
            "PR" => Ok(SteadyState::PR),
            "RwS" => Ok(SteadyState::RwS),
            "PS" => Ok(SteadyState::PS),
            other => Err(Error::Config(format!("unknown steady state `{other}`"))),
        }
    }
}

fn check_angle<T: Real>(alpha: T) -> Result<()> {
    if !(alpha >= T::zero() && alpha < T::frac_pi_2()) {
        return Err(Error::param("alpha", "incline angle must lie in [0, π/2)"));
    }
    Ok(())
}

/// Steady state of a sphere released on an incline of angle `alpha` (rad).
/// Ties fall into the less mobile class.
pub fn classify_sphere_incline<T: Real>(alpha: T, mu_s: T, mu_k: T, eta_r: T) -> Result<SteadyState> {
    check_angle(alpha)?;
    if !(alpha > T::zero()) {
        return Err(Error::param("alpha", "incline angle must be positive"));
    }
    if !(mu_s >= mu_k && mu_k > T::zero() && eta_r >= T::zero()) {
        return Err(Error::param("mu_s", "need mu_s >= mu_k > 0 and eta_r >= 0"));
    }
    let two = T::lit(2.0);
    if alpha <= (two * eta_r * mu_s).atan() {
        return Ok(SteadyState::S);
    }
    if eta_r >= T::lit(0.5) {
        return Ok(SteadyState::PS);
    }
    if alpha <= (T::lit(3.5) * mu_s - T::lit(5.0) * eta_r * mu_k).atan() {
        return Ok(SteadyState::PR);
    }
    Ok(SteadyState::RwS)
}

/// Outcome for a brick on an incline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BrickMotion<T: Real> {
    Stick,
    Slip { acceleration: T },
}

pub fn brick_incline_analytic<T: Real>(alpha: T, mu_s: T, mu_k: T, gravity: T) -> Result<BrickMotion<T>> {
    check_angle(alpha)?;
    if !(mu_s >= mu_k && mu_k > T::zero()) {
        return Err(Error::param("mu_s", "need mu_s >= mu_k > 0"));
    }
    if alpha.tan() <= mu_s {
        return Ok(BrickMotion::Stick);
    }
    Ok(BrickMotion::Slip {
        acceleration: gravity * (alpha.sin() - mu_k * alpha.cos()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn sphere_examples() {
        assert_eq!(
            classify_sphere_incline(deg(5.0), 0.25, 0.2, 0.3).unwrap(),
            SteadyState::S
        );
        assert_eq!(
            classify_sphere_incline(deg(20.0), 0.25, 0.2, 0.3).unwrap(),
            SteadyState::PR
        );
        assert_eq!(
            classify_sphere_incline(deg(35.0), 0.25, 0.2, 0.3).unwrap(),
            SteadyState::RwS
        );
        assert_eq!(
            classify_sphere_incline(deg(20.0), 0.25, 0.2, 0.5).unwrap(),
            SteadyState::PS
        );
        assert!(classify_sphere_incline(deg(95.0), 0.25, 0.2, 0.3).is_err());
        assert!(classify_sphere_incline(0.0, 0.25, 0.2, 0.3).is_err());
    }

    #[test]
    fn boundaries_match_hand_values() {
        assert_relative_eq!(0.15f64.atan().to_degrees(), 8.5308, max_relative = 1e-4);
        assert_relative_eq!(0.575f64.atan().to_degrees(), 29.899, max_relative = 1e-4);
    }

    #[test]
    fn ties_go_to_less_mobile_state() {
        let b = (2.0f64 * 0.3 * 0.25).atan();
        assert_eq!(classify_sphere_incline(b, 0.25, 0.2, 0.3).unwrap(), SteadyState::S);
        let b = (3.5f64 * 0.25 - 5.0 * 0.3 * 0.2).atan();
        assert_eq!(classify_sphere_incline(b, 0.25, 0.2, 0.3).unwrap(), SteadyState::PR);
    }

    #[test]
    fn monotone_in_angle() {
        for k in 0..=30 {
            let eta = 0.2 + 0.01 * k as f64;
            let mut last = 0;
            for a in 1..900 {
                let c = classify_sphere_incline(deg(a as f64 * 0.1), 0.25, 0.2, eta).unwrap();
                assert!(c.mobility() >= last, "eta {eta} alpha {}", a as f64 * 0.1);
                last = c.mobility();
            }
        }
    }

    #[test]
    fn brick_examples() {
        assert_eq!(
            brick_incline_analytic(0.2f64.atan(), 0.25, 0.2, GRAVITY).unwrap(),
            BrickMotion::Stick
        );
        assert_eq!(
            brick_incline_analytic(0.0, 0.25, 0.2, GRAVITY).unwrap(),
            BrickMotion::Stick
        );
        match brick_incline_analytic(0.25, 0.25, 0.2, GRAVITY).unwrap() {
            BrickMotion::Slip { acceleration } => assert_relative_eq!(acceleration, 0.525, max_relative = 2e-3),
            BrickMotion::Stick => panic!("0.25 rad exceeds atan 0.25"),
        }
    }

    #[test]
    fn labels_round_trip() {
        for s in [SteadyState::S, SteadyState::PR, SteadyState::RwS, SteadyState::PS] {
            assert_eq!(s.label().parse::<SteadyState>().unwrap(), s);
        }
        assert!("X".parse::<SteadyState>().is_err());
    }
}
