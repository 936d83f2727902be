//! Normal-force models: a prescribed constant, a linear spring and Hertzian
//! contact.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Elastic constants of a deformable body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material<T: Real> {
    pub youngs_modulus: T,
    pub poisson_ratio: T,
}

impl<T: Real> Material<T> {
    pub fn new(youngs_modulus: T, poisson_ratio: T) -> Result<Self> {
        let m = Self {
            youngs_modulus,
            poisson_ratio,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.youngs_modulus > T::zero()) || !self.youngs_modulus.is_finite_real() {
            return Err(Error::param("youngs_modulus", "must be positive"));
        }
        if !(self.poisson_ratio >= T::zero() && self.poisson_ratio < T::lit(0.5)) {
            return Err(Error::param("poisson_ratio", "must lie in [0, 0.5)"));
        }
        Ok(())
    }

    /// Plane-strain modulus `E / (1 - ν²)`.
    pub fn reduced_modulus(&self) -> T {
        self.youngs_modulus / (T::one() - self.poisson_ratio * self.poisson_ratio)
    }
}

/// Materials of the two bodies; `None` marks a rigid body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactMaterials<T: Real> {
    pub i: Option<Material<T>>,
    pub j: Option<Material<T>>,
}

impl<T: Real> ContactMaterials<T> {
    /// Combined modulus `E_i* E_j* / (E_i* + E_j*)`; a rigid partner leaves
    /// the deformable body's modulus.
    pub fn effective_modulus(&self) -> Result<T> {
        match (self.i, self.j) {
            (Some(a), Some(b)) => {
                let (ea, eb) = (a.reduced_modulus(), b.reduced_modulus());
                Ok(ea * eb / (ea + eb))
            }
            (Some(m), None) | (None, Some(m)) => Ok(m.reduced_modulus()),
            (None, None) => Err(Error::param("materials", "at least one body must be deformable")),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for m in [self.i, self.j].into_iter().flatten() {
            m.validate()?;
        }
        self.effective_modulus().map(|_| ())
    }
}

/// Hertz stiffness `(4/3) E_eff √R_eff`.
pub fn hertz_stiffness<T: Real>(materials: &ContactMaterials<T>, r_eff: T) -> Result<T> {
    if !(r_eff > T::zero()) {
        return Err(Error::param("r_eff", "effective radius must be positive"));
    }
    Ok(T::lit(4.0 / 3.0) * materials.effective_modulus()? * r_eff.sqrt())
}

/// Linear spring without adhesion.
pub fn hookean_normal<T: Real>(stiffness: T, depth: T) -> T {
    stiffness * depth.max(T::zero())
}

/// Damping ratio equivalent to a coefficient of restitution for a linear
/// oscillator, `-ln e / √(π² + ln² e)`.
pub fn restitution_damping_ratio<T: Real>(restitution: T) -> T {
    if !(restitution > T::zero()) {
        return T::one();
    }
    let l = restitution.ln();
    -l / (T::pi() * T::pi() + l * l).sqrt()
}

/// Hertz force `k_Hz δ^{3/2}` plus a viscous term calibrated by the
/// restitution coefficient; never adhesive.
///
/// `depth_rate` is positive while the bodies approach and `mass` is the
/// effective mass of the pair.
pub fn hertz_normal<T: Real>(k_hz: T, depth: T, depth_rate: T, restitution: T, mass: T) -> Result<T> {
    if !(depth >= T::zero()) {
        return Ok(T::zero());
    }
    if !(T::zero()..=T::one()).contains(&restitution) {
        return Err(Error::param("restitution", "must lie in [0, 1]"));
    }
    let elastic = k_hz * depth * depth.sqrt();
    let tangent = T::lit(1.5) * k_hz * depth.sqrt();
    let c = T::lit(2.0) * (T::lit(5.0 / 6.0)).sqrt() * restitution_damping_ratio(restitution) * (tangent * mass).sqrt();
    Ok((elastic + c * depth_rate).max(T::zero()))
}

/// Radius `√(R_eff δ)` of the circular Hertz contact patch.
pub fn contact_patch_radius<T: Real>(r_eff: T, depth: T) -> Result<T> {
    if r_eff < T::zero() || depth < T::zero() {
        return Err(Error::param("depth", "radius and depth must be non-negative"));
    }
    Ok((r_eff * depth).sqrt())
}

/// Depth at which the Hertz spring alone carries the load `n`.
pub fn quasi_static_depth<T: Real>(n: T, k_hz: T) -> T {
    (n.max(T::zero()) / k_hz).powf(T::lit(2.0 / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalModel<T: Real> {
    /// Constant force while in contact. Materials, if given, only serve to
    /// size the contact patch.
    Analytic {
        force: T,
        materials: Option<ContactMaterials<T>>,
    },
    Hookean {
        stiffness: T,
        restitution: T,
    },
    Hertzian {
        materials: ContactMaterials<T>,
        restitution: T,
    },
}

/// Result of a normal-force evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalEval<T: Real> {
    pub force: T,
    pub patch_radius: Option<T>,
}

impl<T: Real> NormalModel<T> {
    pub fn validate(&self) -> Result<()> {
        let unit_interval = |e: T| {
            if (T::zero()..=T::one()).contains(&e) {
                Ok(())
            } else {
                Err(Error::param("restitution", "must lie in [0, 1]"))
            }
        };
        match self {
            NormalModel::Analytic { force, materials } => {
                if !(*force >= T::zero()) || !force.is_finite_real() {
                    return Err(Error::NegativeNormalForce(force.as_f64()));
                }
                materials.as_ref().map_or(Ok(()), ContactMaterials::validate)
            }
            NormalModel::Hookean { stiffness, restitution } => {
                if !(*stiffness > T::zero()) || !stiffness.is_finite_real() {
                    return Err(Error::param("normal_stiffness", "must be positive"));
                }
                unit_interval(*restitution)
            }
            NormalModel::Hertzian { materials, restitution } => {
                materials.validate()?;
                unit_interval(*restitution)
            }
        }
    }

    /// Normal force for a contact of penetration `depth` approaching at
    /// `depth_rate`, effective radius `r_eff` and effective mass `mass`.
    pub fn evaluate(&self, depth: T, depth_rate: T, r_eff: T, mass: T) -> Result<NormalEval<T>> {
        match *self {
            NormalModel::Analytic { force, materials } => {
                let patch_radius = match materials {
                    Some(m) => {
                        let k = hertz_stiffness(&m, r_eff)?;
                        Some(contact_patch_radius(r_eff, quasi_static_depth(force, k))?)
                    }
                    None => None,
                };
                Ok(NormalEval { force, patch_radius })
            }
            NormalModel::Hookean { stiffness, restitution } => {
                let c = T::lit(2.0) * restitution_damping_ratio(restitution) * (stiffness * mass).sqrt();
                let force = if depth > T::zero() {
                    (hookean_normal(stiffness, depth) + c * depth_rate).max(T::zero())
                } else {
                    T::zero()
                };
                Ok(NormalEval {
                    force,
                    patch_radius: None,
                })
            }
            NormalModel::Hertzian { materials, restitution } => {
                let k = hertz_stiffness(&materials, r_eff)?;
                let d = depth.max(T::zero());
                Ok(NormalEval {
                    force: hertz_normal(k, d, depth_rate, restitution, mass)?,
                    patch_radius: Some(contact_patch_radius(r_eff, d)?),
                })
            }
        }
    }
}
