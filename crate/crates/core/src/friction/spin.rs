use super::{cap, check_dt, check_normal, critical_damping, FrictionParams, Mode, SpinModel, Threshold};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Input from which the spin stiffness is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpinStiffnessSource<T: Real> {
    /// `K_ψ = η_ψ K_E / 𝒦²`.
    Empirical { eta_psi: T, curvature: T },
    /// `K_ψ = a² K_E / 2` for a contact patch of radius `a`.
    Hertzian { patch_radius: T },
}

pub fn derive_spin_stiffness<T: Real>(source: SpinStiffnessSource<T>, k_e: T) -> Result<T> {
    match source {
        SpinStiffnessSource::Empirical { eta_psi, curvature } => {
            if !(curvature > T::zero()) {
                return Err(Error::param("spin_curvature", "must be positive"));
            }
            Ok(eta_psi * k_e / (curvature * curvature))
        }
        SpinStiffnessSource::Hertzian { patch_radius } => {
            if patch_radius < T::zero() {
                return Err(Error::param("patch_radius", "must be non-negative"));
            }
            Ok(T::lit(0.5) * patch_radius * patch_radius * k_e)
        }
    }
}

/// Static and kinetic spin thresholds `𝒦 μ N / K_E`.
pub fn spin_thresholds<T: Real>(curvature: T, mu_s: T, mu_k: T, n: T, k_e: T) -> (T, T) {
    (curvature * mu_s * n / k_e, curvature * mu_k * n / k_e)
}

/// Stiffness and threshold curvature in effect for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinLaw<T: Real> {
    pub stiffness: T,
    pub curvature: T,
}

impl<T: Real> SpinLaw<T> {
    /// Law for the configured spin model. The Hertzian model needs the
    /// current contact patch radius; a vanishing patch gives a slack law.
    pub fn from_params(params: &FrictionParams<T>, patch_radius: Option<T>) -> Result<Self> {
        match params.spin_model {
            SpinModel::Empirical => Ok(Self {
                stiffness: derive_spin_stiffness(
                    SpinStiffnessSource::Empirical {
                        eta_psi: params.eta_psi,
                        curvature: params.spin_curvature,
                    },
                    params.k_e,
                )?,
                curvature: params.spin_curvature,
            }),
            SpinModel::Hertzian => {
                let a =
                    patch_radius.ok_or_else(|| Error::param("spin_model", "hertzian spin needs a contact patch"))?;
                let stiffness = derive_spin_stiffness(SpinStiffnessSource::Hertzian { patch_radius: a }, params.k_e)?;
                let curvature = if a > T::zero() { T::one() / a } else { T::zero() };
                Ok(Self { stiffness, curvature })
            }
        }
    }

    pub fn thresholds(&self, params: &FrictionParams<T>, n: T) -> (T, T) {
        spin_thresholds(self.curvature, params.mu_s, params.mu_k, n, params.k_e)
    }
}

/// Spin history `Ψ` (signed angle about the contact normal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState<T: Real> {
    pub psi: T,
    pub mode: Mode,
}

impl<T: Real> Default for SpinState<T> {
    fn default() -> Self {
        Self {
            psi: T::zero(),
            mode: Mode::Static,
        }
    }
}

/// Spin torque on body `i` about the contact normal. Body `j` receives the
/// negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOutput<T: Real> {
    pub elastic: T,
    pub damping: T,
}

impl<T: Real> SpinOutput<T> {
    pub fn total(&self) -> T {
        self.elastic + self.damping
    }
}

/// Advances the spin history by the step's spin angle `psi`.
pub fn spin_update<T: Real>(
    state: &mut SpinState<T>,
    psi: T,
    n: T,
    law: &SpinLaw<T>,
    inertia: T,
    params: &FrictionParams<T>,
    dt: T,
) -> Result<SpinOutput<T>> {
    check_normal(n)?;
    check_dt(dt)?;
    let (s_s, s_k) = law.thresholds(params, n);
    let mode0 = state.mode;
    let total = state.psi + psi;
    let (factor, mode1) = cap(mode0, total.abs(), Threshold::Finite(s_s), Threshold::Finite(s_k));
    state.psi = total * factor;
    state.mode = mode1;
    let damping = if params.damping.active(mode0) && psi != T::zero() {
        -critical_damping(law.stiffness, inertia)? * psi / dt
    } else {
        T::zero()
    };
    Ok(SpinOutput {
        elastic: -law.stiffness * state.psi,
        damping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::friction::Damping;
    use approx::assert_relative_eq;

    fn empirical() -> FrictionParams<f64> {
        FrictionParams {
            mu_s: 0.25,
            mu_k: 0.2,
            k_e: 1e5,
            eta_psi: 0.006,
            spin_curvature: 5.0,
            damping: Damping::StickOnly,
            ..Default::default()
        }
    }

    #[test]
    fn empirical_stiffness() {
        let k = derive_spin_stiffness(
            SpinStiffnessSource::Empirical {
                eta_psi: 0.006,
                curvature: 5.0,
            },
            1.0,
        )
        .unwrap();
        assert_relative_eq!(k, 2.4e-4, max_relative = 1e-14);
        assert!(derive_spin_stiffness(
            SpinStiffnessSource::Empirical {
                eta_psi: 0.006,
                curvature: 0.0
            },
            1.0
        )
        .is_err());
        assert_eq!(
            derive_spin_stiffness(SpinStiffnessSource::Hertzian { patch_radius: 0.0 }, 1e5).unwrap(),
            0.0
        );
    }

    #[test]
    fn hertzian_matches_empirical_with_half_eta() {
        for a in [1e-5, 8.48e-5, 3e-3, 0.1] {
            let h = derive_spin_stiffness(SpinStiffnessSource::Hertzian { patch_radius: a }, 5e6).unwrap();
            let e = derive_spin_stiffness(
                SpinStiffnessSource::Empirical {
                    eta_psi: 0.5,
                    curvature: 1.0 / a,
                },
                5e6,
            )
            .unwrap();
            assert_relative_eq!(h, e, max_relative = 1e-14);
        }
    }

    #[test]
    fn thresholds_scale_with_load() {
        let (s, k) = spin_thresholds(5.0, 0.25, 0.2, 49.0, 1e5);
        assert_relative_eq!(k, 4.9e-4, max_relative = 1e-14);
        let (s2, k2) = spin_thresholds(5.0, 0.25, 0.2, 98.0, 1e5);
        assert_relative_eq!(s2, 2.0 * s);
        assert_relative_eq!(k2, 2.0 * k);
        assert_eq!(spin_thresholds(5.0, 0.25, 0.2, 0.0, 1e5), (0.0, 0.0));
    }

    #[test]
    fn kinetic_torque_of_spinning_sphere() {
        let p = empirical();
        let law = SpinLaw::from_params(&p, None).unwrap();
        let mut st = SpinState::default();
        let mut out = None;
        for _ in 0..100 {
            out = Some(spin_update(&mut st, 1e-4, 49.0, &law, 0.08, &p, 1e-4).unwrap());
        }
        let out = out.unwrap();
        assert_eq!(st.mode, Mode::Kinetic);
        assert_relative_eq!(out.elastic, -0.2 * 49.0 * 0.006 * 0.2, max_relative = 1e-12);
        assert_relative_eq!(out.elastic.abs(), 0.01176, max_relative = 1e-3);
    }

    #[test]
    fn sign_opposes_accumulated_spin() {
        let p = empirical();
        let law = SpinLaw::from_params(&p, None).unwrap();
        let mut st = SpinState::default();
        let out = spin_update(&mut st, -1e-6, 49.0, &law, 0.08, &p, 1e-4).unwrap();
        assert!(out.elastic > 0.0);
        assert!(out.damping > 0.0);
        let mut st = SpinState::default();
        let out = spin_update(&mut st, 0.0, 49.0, &law, 0.08, &p, 1e-4).unwrap();
        assert_eq!(out.total(), 0.0);
    }

    #[test]
    fn hertzian_law_requires_patch() {
        let p = FrictionParams {
            spin_model: SpinModel::Hertzian,
            ..empirical()
        };
        assert!(SpinLaw::from_params(&p, None).is_err());
        let law = SpinLaw::from_params(&p, Some(0.0)).unwrap();
        assert_eq!(law.stiffness, 0.0);
        let law = SpinLaw::from_params(&p, Some(2e-4)).unwrap();
        assert_relative_eq!(law.curvature, 5000.0);
    }
}
