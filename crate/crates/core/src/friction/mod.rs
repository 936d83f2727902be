//! Stick/slip friction channels: slide, roll and spin.
//!
//! Every channel keeps a history (microdeflection) that grows with the
//! relative motion at the contact and is capped at the end of each step by a
//! static or kinetic threshold. The elastic load follows from the capped
//! history; an optional damping load follows from the step increment.

mod legacy;
mod roll;
mod slide;
mod spin;

pub use legacy::legacy_roll_torque;
pub use roll::{
    derive_roll_stiffness, roll_threshold, roll_update, Curvature, RollOutput, RollState, RollStiffness, Threshold,
};
pub use slide::{slide_thresholds, slide_update, SlideOutput, SlideState};
pub use spin::{
    derive_spin_stiffness, spin_thresholds, spin_update, SpinLaw, SpinOutput, SpinState, SpinStiffnessSource,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Stick (static) or slip (kinetic) state of a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Static,
    Kinetic,
}

impl Mode {
    pub fn is_static(self) -> bool {
        self == Mode::Static
    }

    /// Short label used in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            Mode::Static => "static",
            Mode::Kinetic => "kinetic",
        }
    }
}

/// When the damping part of a friction load is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Damping {
    /// Never.
    Off,
    /// In both modes.
    #[default]
    Always,
    /// Only while the channel is in static mode at the start of the step.
    StickOnly,
}

impl Damping {
    pub fn active(self, mode: Mode) -> bool {
        match self {
            Damping::Off => false,
            Damping::Always => true,
            Damping::StickOnly => mode.is_static(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinModel {
    /// Stiffness from `η_ψ` and an input spin curvature.
    #[default]
    Empirical,
    /// Stiffness from the Hertzian contact patch radius.
    Hertzian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RollModel {
    /// History-based roll friction.
    #[default]
    History,
    /// Constant-magnitude torque opposing the relative angular velocity.
    Legacy,
}

/// Friction coefficients and model switches for one body pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionParams<T: Real> {
    pub mu_s: T,
    pub mu_k: T,
    /// Slide stiffness `K_E` (N/m).
    pub k_e: T,
    /// Slide damping `K_D` (N·s/m).
    pub k_d: T,
    pub eta_r: T,
    pub eta_psi: T,
    /// Empirical spin curvature `𝒦` (1/m).
    pub spin_curvature: T,
    pub damping: Damping,
    pub spin_model: SpinModel,
    pub roll_model: RollModel,
    /// Legacy rolling coefficient `μ_r`.
    pub mu_r: T,
    /// Use a zero-velocity guard in the legacy roll model.
    pub legacy_guard: bool,
    /// Roll stiffness used instead of the curvature-derived value.
    pub roll_stiffness: Option<T>,
    /// Roll damping used instead of the critical value.
    pub roll_damping: Option<T>,
    /// Multiplier on the critical roll damping.
    pub roll_damping_scale: T,
}

impl<T: Real> Default for FrictionParams<T> {
    fn default() -> Self {
        Self {
            mu_s: T::lit(0.25),
            mu_k: T::lit(0.2),
            k_e: T::lit(1e5),
            k_d: T::zero(),
            eta_r: T::zero(),
            eta_psi: T::zero(),
            spin_curvature: T::one(),
            damping: Damping::Always,
            spin_model: SpinModel::Empirical,
            roll_model: RollModel::History,
            mu_r: T::zero(),
            legacy_guard: true,
            roll_stiffness: None,
            roll_damping: None,
            roll_damping_scale: T::one(),
        }
    }
}

impl<T: Real> FrictionParams<T> {
    pub fn validate(&self) -> Result<()> {
        let finite = |name, v: T| {
            if v.is_finite_real() {
                Ok(())
            } else {
                Err(Error::param(name, "must be finite"))
            }
        };
        for (name, v) in [
            ("mu_s", self.mu_s),
            ("mu_k", self.mu_k),
            ("k_e", self.k_e),
            ("k_d", self.k_d),
            ("eta_r", self.eta_r),
            ("eta_psi", self.eta_psi),
            ("spin_curvature", self.spin_curvature),
            ("mu_r", self.mu_r),
        ] {
            finite(name, v)?;
        }
        if !(self.mu_k > T::zero()) {
            return Err(Error::param("mu_k", "must be positive"));
        }
        if self.mu_s < self.mu_k {
            return Err(Error::param("mu_s", "must be at least mu_k"));
        }
        if !(self.k_e > T::zero()) {
            return Err(Error::param("k_e", "must be positive"));
        }
        if self.k_d < T::zero() {
            return Err(Error::param("k_d", "must be non-negative"));
        }
        if self.eta_r < T::zero() {
            return Err(Error::param("eta_r", "must be non-negative"));
        }
        if self.eta_psi < T::zero() {
            return Err(Error::param("eta_psi", "must be non-negative"));
        }
        if self.mu_r < T::zero() {
            return Err(Error::param("mu_r", "must be non-negative"));
        }
        if let Some(k) = self.roll_stiffness {
            if !(k >= T::zero()) || !k.is_finite_real() {
                return Err(Error::param("roll_stiffness", "must be finite and non-negative"));
            }
        }
        if !(self.roll_damping_scale >= T::zero()) || !self.roll_damping_scale.is_finite_real() {
            return Err(Error::param("roll_damping_scale", "must be finite and non-negative"));
        }
        if let Some(d) = self.roll_damping {
            if !(d >= T::zero()) || !d.is_finite_real() {
                return Err(Error::param("roll_damping", "must be finite and non-negative"));
            }
        }
        Ok(())
    }
}

/// Critical damping `2√(mK)` for stiffness `k` and mass-like `m`.
pub fn critical_damping<T: Real>(k: T, m: T) -> Result<T> {
    if !(m > T::zero()) {
        return Err(Error::param("m", "mass must be positive"));
    }
    if k < T::zero() {
        return Err(Error::param("k", "stiffness must be non-negative"));
    }
    Ok(T::lit(2.0) * (m * k).sqrt())
}

/// End-of-step adjustment shared by all channels.
///
/// Returns the factor the history is multiplied by and the new mode. A zero
/// threshold with a zero history leaves the mode unchanged.
pub(crate) fn cap<T: Real>(
    mode: Mode,
    magnitude: T,
    static_limit: Threshold<T>,
    kinetic_limit: Threshold<T>,
) -> (T, Mode) {
    let limit = match mode {
        Mode::Static => static_limit,
        Mode::Kinetic => kinetic_limit,
    };
    let exceeded = match limit {
        Threshold::Unbounded => None,
        Threshold::Finite(s) if magnitude > s => Some(s),
        Threshold::Finite(_) => None,
    };
    match (mode, exceeded) {
        (_, Some(s)) => (s / magnitude, Mode::Kinetic),
        (Mode::Static, None) => (T::one(), Mode::Static),
        (Mode::Kinetic, None) => (T::one(), Mode::Static),
    }
}

pub(crate) fn check_normal<T: Real>(n: T) -> Result<()> {
    if n < T::zero() {
        return Err(Error::NegativeNormalForce(n.as_f64()));
    }
    if !n.is_finite_real() {
        return Err(Error::NonFinite("normal force".into()));
    }
    Ok(())
}

pub(crate) fn check_dt<T: Real>(dt: T) -> Result<()> {
    if !(dt > T::zero()) || !dt.is_finite_real() {
        return Err(Error::param("dt", "time step must be positive"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn critical_damping_values() {
        assert_relative_eq!(
            critical_damping(1e5, 1.0).unwrap(),
            632.455_532_033_675_9,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            critical_damping(1600.0, 0.1).unwrap(),
            25.298_221_281_347_04,
            max_relative = 1e-12
        );
        assert_eq!(critical_damping(0.0, 1.0).unwrap(), 0.0);
        assert!(critical_damping(1.0, 0.0).is_err());
        assert!(critical_damping(1.0, -1.0).is_err());
    }

    #[test]
    fn cap_rules() {
        let s = Threshold::Finite(1.0);
        let k = Threshold::Finite(0.8);
        assert_eq!(cap(Mode::Static, 0.9, s, k), (1.0, Mode::Static));
        let (f, m) = cap(Mode::Static, 1.5, s, k);
        assert_relative_eq!(f * 1.5, 1.0);
        assert_eq!(m, Mode::Kinetic);
        let (f, m) = cap(Mode::Kinetic, 0.9, s, k);
        assert_relative_eq!(f * 0.9, 0.8);
        assert_eq!(m, Mode::Kinetic);
        assert_eq!(cap(Mode::Kinetic, 0.7, s, k), (1.0, Mode::Static));
        // zero threshold, zero history: 0/0 is not an excess
        let z = Threshold::Finite(0.0);
        assert_eq!(cap(Mode::Static, 0.0, z, z), (1.0, Mode::Static));
        assert_eq!(cap(Mode::Static, 1e-3, z, z), (0.0, Mode::Kinetic));
        assert_eq!(
            cap(Mode::Static, 1e9, Threshold::Unbounded, Threshold::Unbounded),
            (1.0, Mode::Static)
        );
    }

    #[test]
    fn params_validation() {
        let p = FrictionParams::<f64>::default();
        assert!(p.validate().is_ok());
        assert!(FrictionParams { mu_s: 0.1, ..p }.validate().is_err());
        assert!(FrictionParams {
            mu_k: 0.0,
            mu_s: 0.0,
            ..p
        }
        .validate()
        .is_err());
        assert!(FrictionParams { k_e: 0.0, ..p }.validate().is_err());
        assert!(FrictionParams { eta_r: -1.0, ..p }.validate().is_err());
        assert!(FrictionParams { k_d: f64::NAN, ..p }.validate().is_err());
    }

    #[test]
    fn damping_switch() {
        assert!(Damping::Always.active(Mode::Kinetic));
        assert!(!Damping::StickOnly.active(Mode::Kinetic));
        assert!(Damping::StickOnly.active(Mode::Static));
        assert!(!Damping::Off.active(Mode::Static));
    }
}
