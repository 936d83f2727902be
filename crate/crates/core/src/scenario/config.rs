use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::friction::{Damping, RollModel, SpinModel};
use crate::oracles::GRAVITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    BrickIncline,
    DiskRolling,
    SphereIncline,
    SpinningSphere,
    SpinningEllipsoid,
    EllipsoidFalling,
    Stacking,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::BrickIncline,
        ScenarioKind::DiskRolling,
        ScenarioKind::SphereIncline,
        ScenarioKind::SpinningSphere,
        ScenarioKind::SpinningEllipsoid,
        ScenarioKind::EllipsoidFalling,
        ScenarioKind::Stacking,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::BrickIncline => "brick_incline",
            ScenarioKind::DiskRolling => "disk_rolling",
            ScenarioKind::SphereIncline => "sphere_incline",
            ScenarioKind::SpinningSphere => "spinning_sphere",
            ScenarioKind::SpinningEllipsoid => "spinning_ellipsoid",
            ScenarioKind::EllipsoidFalling => "ellipsoid_falling",
            ScenarioKind::Stacking => "stacking",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario `{s}`")))
    }
}

/// `[friction]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrictionSection {
    pub mu_s: f64,
    pub mu_k: f64,
    pub k_e: f64,
    /// Slide damping; when absent, `slide_damping_scale` times critical
    /// damping of the pair's fictitious mass.
    pub k_d: Option<f64>,
    pub slide_damping_scale: f64,
    pub eta_r: f64,
    pub eta_psi: f64,
    pub spin_curvature: f64,
    pub damping: Damping,
    pub spin_model: SpinModel,
    pub roll_model: RollModel,
    pub mu_r: f64,
    pub legacy_guard: bool,
    pub roll_stiffness: Option<f64>,
    /// Roll damping; when absent, `roll_damping_scale` times critical.
    pub roll_damping: Option<f64>,
    pub roll_damping_scale: f64,
}

impl Default for FrictionSection {
    fn default() -> Self {
        Self {
            mu_s: 0.25,
            mu_k: 0.2,
            k_e: 1e5,
            k_d: None,
            slide_damping_scale: 1.0,
            eta_r: 0.0,
            eta_psi: 0.0,
            spin_curvature: 1.0,
            damping: Damping::StickOnly,
            spin_model: SpinModel::Empirical,
            roll_model: RollModel::History,
            mu_r: 0.0,
            legacy_guard: true,
            roll_stiffness: None,
            roll_damping: None,
            roll_damping_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pose {
    /// Long axis vertical.
    #[default]
    Upright,
    /// Long axis horizontal.
    Flat,
}

/// `[body]` table: the moving body of single-body scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BodySection {
    /// Mass (kg); derived from `density` when absent.
    pub mass: Option<f64>,
    pub density: Option<f64>,
    pub radius: f64,
    pub semi_axes: [f64; 3],
    /// Isotropic moment of inertia overriding the solid-body value.
    pub inertia: Option<f64>,
    pub velocity: [f64; 3],
    pub angular_velocity: [f64; 3],
    pub pose: Pose,
    pub youngs_modulus: Option<f64>,
    pub poisson_ratio: Option<f64>,
}

impl Default for BodySection {
    fn default() -> Self {
        Self {
            mass: None,
            density: None,
            radius: 0.2,
            semi_axes: [0.2, 0.2, 0.5],
            inertia: None,
            velocity: [0.0; 3],
            angular_velocity: [0.0; 3],
            pose: Pose::Upright,
            youngs_modulus: None,
            poisson_ratio: None,
        }
    }
}

/// `[incline]` table. The plane stays horizontal and gravity is tilted so
/// that `+x` points down the slope.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InclineSection {
    /// Radians.
    pub angle: Option<f64>,
    pub angle_deg: Option<f64>,
}

impl InclineSection {
    pub fn radians(&self) -> Result<f64> {
        let a = match (self.angle, self.angle_deg) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give either incline.angle or incline.angle_deg, not both".into(),
                ))
            }
            (Some(a), None) => a,
            (None, Some(d)) => d.to_radians(),
            (None, None) => 0.0,
        };
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&a) {
            return Err(Error::Config(format!("incline angle {a} rad outside [0, π/2)")));
        }
        Ok(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalKind {
    /// Weight component normal to the plane.
    #[default]
    Analytic,
    Hookean,
    Hertzian,
}

/// `[normal]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormalSection {
    pub model: NormalKind,
    pub stiffness: f64,
    pub restitution: f64,
    pub youngs_modulus: Option<f64>,
    pub poisson_ratio: Option<f64>,
    pub rigid_ground: bool,
    /// Contacts are kept up to this separation (m).
    pub margin: f64,
}

impl Default for NormalSection {
    fn default() -> Self {
        Self {
            model: NormalKind::Analytic,
            stiffness: 1e7,
            restitution: 1.0,
            youngs_modulus: None,
            poisson_ratio: None,
            rigid_ground: true,
            margin: 1e-9,
        }
    }
}

/// `[stacking]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StackingSection {
    pub radius: f64,
    /// Gap between the bottom spheres, in radii.
    pub gap: f64,
    pub bottom_mass: f64,
    pub top_mass: f64,
    /// Drop of the top sphere, in radii, that counts as a collapse.
    pub collapse_drop: f64,
    /// Initial clearance between the top and bottom spheres (m).
    pub clearance: f64,
}

impl Default for StackingSection {
    fn default() -> Self {
        Self {
            radius: 0.15,
            gap: 0.3,
            bottom_mass: 1.0,
            top_mass: 1.0,
            collapse_drop: 0.2,
            clearance: 0.0,
        }
    }
}

/// `[sweep]` table: grid bounds (inclusive) and point counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub alpha_deg: [f64; 2],
    pub alpha_points: usize,
    pub eta_r: [f64; 2],
    pub eta_points: usize,
    /// Averaging window at the end of each run (s).
    pub window: f64,
    pub slide_damping_scale: f64,
    pub roll_damping_scale: f64,
    /// Bracket and resolution of the critical top mass search (kg).
    pub mass_range: [f64; 2],
    pub mass_tolerance: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            alpha_deg: [2.0, 30.0],
            alpha_points: 10,
            eta_r: [0.2, 0.5],
            eta_points: 7,
            window: 0.1,
            slide_damping_scale: 0.5,
            roll_damping_scale: 0.5,
            mass_range: [0.1, 10.0],
            mass_tolerance: 0.01,
        }
    }
}

impl SweepSection {
    pub fn alphas_deg(&self) -> Vec<f64> {
        linspace(self.alpha_deg, self.alpha_points)
    }

    pub fn etas(&self) -> Vec<f64> {
        linspace(self.eta_r, self.eta_points)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_points == 0 || self.eta_points == 0 {
            return Err(Error::Config("sweep grids need at least one point".into()));
        }
        if !(self.window > 0.0) {
            return Err(Error::Config("sweep.window must be positive".into()));
        }
        if !(self.mass_range[0] > 0.0 && self.mass_range[1] > self.mass_range[0]) {
            return Err(Error::Config("sweep.mass_range must be increasing and positive".into()));
        }
        if !(self.mass_tolerance > 0.0) {
            return Err(Error::Config("sweep.mass_tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Evenly spaced points including both ends; one point gives the start.
pub fn linspace(range: [f64; 2], points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![range[0]],
        n => (0..n)
            .map(|k| range[0] + (range[1] - range[0]) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Complete description of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub dt: f64,
    pub duration: f64,
    /// Record every n-th step.
    pub output_every: usize,
    pub gravity: f64,
    #[serde(default)]
    pub friction: FrictionSection,
    #[serde(default)]
    pub body: BodySection,
    #[serde(default)]
    pub incline: InclineSection,
    #[serde(default)]
    pub normal: NormalSection,
    #[serde(default)]
    pub stacking: StackingSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

impl ScenarioConfig {
    /// Parameters of the reference experiment for `kind`.
    pub fn preset(kind: ScenarioKind) -> Self {
        let base = Self {
            scenario: kind,
            dt: 1e-4,
            duration: 1.0,
            output_every: 1,
            gravity: GRAVITY,
            friction: FrictionSection::default(),
            body: BodySection::default(),
            incline: InclineSection::default(),
            normal: NormalSection::default(),
            stacking: StackingSection::default(),
            sweep: SweepSection::default(),
        };
        match kind {
            ScenarioKind::BrickIncline => Self {
                duration: 5.0,
                friction: FrictionSection {
                    k_d: Some(632.0),
                    ..FrictionSection::default()
                },
                body: BodySection {
                    mass: Some(1.0),
                    radius: 0.1,
                    ..BodySection::default()
                },
                incline: InclineSection {
                    angle: Some(0.18),
                    angle_deg: None,
                },
                ..base
            },
            ScenarioKind::DiskRolling => Self {
                duration: 15.0,
                friction: FrictionSection {
                    k_d: Some(1414.21),
                    eta_r: 0.4,
                    roll_stiffness: Some(1600.0),
                    roll_damping: Some(25.30),
                    mu_r: 0.1,
                    ..FrictionSection::default()
                },
                body: BodySection {
                    mass: Some(5.0),
                    radius: 0.2,
                    inertia: Some(0.1),
                    velocity: [5.0, 0.0, 0.0],
                    ..BodySection::default()
                },
                ..base
            },
            ScenarioKind::SphereIncline => Self {
                duration: 1.0,
                friction: FrictionSection {
                    eta_r: 0.3,
                    ..FrictionSection::default()
                },
                body: BodySection {
                    mass: Some(5.0),
                    radius: 0.2,
                    velocity: [-0.5, 0.0, 0.0],
                    ..BodySection::default()
                },
                incline: InclineSection {
                    angle: None,
                    angle_deg: Some(35.0),
                },
                ..base
            },
            ScenarioKind::SpinningSphere => Self {
                duration: 8.0,
                friction: FrictionSection {
                    eta_r: 0.3,
                    eta_psi: 0.006,
                    spin_curvature: 5.0,
                    ..FrictionSection::default()
                },
                body: BodySection {
                    mass: Some(5.0),
                    radius: 0.2,
                    angular_velocity: [0.0, 0.0, 1.0],
                    ..BodySection::default()
                },
                ..base
            },
            ScenarioKind::SpinningEllipsoid => Self {
                duration: 8.0,
                friction: FrictionSection {
                    k_e: 5e6,
                    spin_model: SpinModel::Hertzian,
                    ..FrictionSection::default()
                },
                body: BodySection {
                    mass: None,
                    density: Some(8000.0),
                    semi_axes: [0.02, 0.02, 0.05],
                    angular_velocity: [0.0, 0.0, 1.0],
                    youngs_modulus: Some(2e11),
                    poisson_ratio: Some(0.3),
                    ..BodySection::default()
                },
                ..base
            },
            ScenarioKind::EllipsoidFalling => Self {
                duration: 3.0,
                friction: FrictionSection {
                    k_d: Some(1414.21),
                    eta_r: 0.2,
                    ..FrictionSection::default()
                },
                body: BodySection {
                    mass: Some(5.0),
                    semi_axes: [0.2, 0.2, 0.5],
                    velocity: [0.0, 0.3, 0.0],
                    ..BodySection::default()
                },
                normal: NormalSection {
                    model: NormalKind::Hookean,
                    stiffness: 1e7,
                    restitution: 0.5,
                    margin: 0.0,
                    ..NormalSection::default()
                },
                ..base
            },
            ScenarioKind::Stacking => Self {
                duration: 2.0,
                friction: FrictionSection {
                    eta_r: 0.23,
                    ..FrictionSection::default()
                },
                normal: NormalSection {
                    model: NormalKind::Hertzian,
                    restitution: 0.4,
                    youngs_modulus: Some(2e6),
                    poisson_ratio: Some(0.3),
                    rigid_ground: false,
                    margin: 0.0,
                    ..NormalSection::default()
                },
                ..base
            },
        }
    }

    /// Parses a TOML document layered over the preset named by its
    /// `scenario` key.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let user: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let kind = match user.get("scenario") {
            Some(toml::Value::String(s)) => s.parse::<ScenarioKind>()?,
            Some(_) => return Err(Error::Config("`scenario` must be a string".into())),
            None => return Err(Error::Config("missing `scenario` key".into())),
        };
        let mut merged = toml::Table::try_from(Self::preset(kind)).map_err(|e| Error::Config(e.to_string()))?;
        for (table, a, b) in EXCLUSIVE {
            let given = |key| user.get(table).and_then(|t| t.get(key)).is_some();
            if let Some(toml::Value::Table(t)) = merged.get_mut(table) {
                if given(a) {
                    t.remove(b);
                }
                if given(b) {
                    t.remove(a);
                }
            }
        }
        merge(&mut merged, user);
        let cfg: Self = toml::Value::Table(merged)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn steps(&self) -> u64 {
        (self.duration / self.dt).round() as u64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(1e-6..=1e-3).contains(&self.dt) {
            log::warn!("dt = {} lies outside the usual [1e-6, 1e-3] s range", self.dt);
        }
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(Error::Config(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        if self.output_every == 0 {
            return Err(Error::Config("output_every must be at least 1".into()));
        }
        if !(self.gravity >= 0.0) || !self.gravity.is_finite() {
            return Err(Error::Config("gravity must be non-negative".into()));
        }
        self.incline.radians()?;
        self.sweep.validate()?;
        Ok(())
    }
}

/// Keys that replace each other when a file overrides a preset.
const EXCLUSIVE: [(&str, &str, &str); 2] = [("body", "mass", "density"), ("incline", "angle", "angle_deg")];

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip_through_toml() {
        for kind in ScenarioKind::ALL {
            let cfg = ScenarioConfig::preset(kind);
            cfg.validate().unwrap();
            let text = cfg.to_toml_string().unwrap();
            let back = ScenarioConfig::from_toml_str(&text).unwrap();
            assert_eq!(back, cfg, "{kind}");
        }
    }

    #[test]
    fn user_values_override_preset() {
        let cfg = ScenarioConfig::from_toml_str(
            "scenario = \"brick_incline\"\nduration = 2.0\n[incline]\nangle = 0.25\n[friction]\ndamping = \"off\"\n",
        )
        .unwrap();
        assert_eq!(cfg.duration, 2.0);
        assert_eq!(cfg.incline.radians().unwrap(), 0.25);
        assert_eq!(cfg.friction.damping, Damping::Off);
        assert_eq!(cfg.friction.k_d, Some(632.0));

        let cfg = ScenarioConfig::from_toml_str(
            "scenario = \"sphere_incline\"\n[incline]\nangle = 0.1\n[body]\ndensity = 100.0\n",
        )
        .unwrap();
        assert_eq!(cfg.incline.angle_deg, None);
        assert_eq!(cfg.body.mass, None);
    }

    #[test]
    fn config_errors() {
        let bad = |s: &str| ScenarioConfig::from_toml_str(s).unwrap_err().exit_code();
        assert_eq!(bad("scenario = \"brick_incline\"\ndt = 0.0\n"), 2);
        assert_eq!(bad("scenario = \"nope\"\n"), 2);
        assert_eq!(bad("duration = 1.0\n"), 2);
        assert_eq!(bad("scenario = \"brick_incline\"\nbogus = 1\n"), 2);
        assert_eq!(bad("scenario = \"brick_incline\"\n[friction]\nmu = 1\n"), 2);
        assert_eq!(bad("this is not toml"), 2);
        assert_eq!(
            bad("scenario = \"brick_incline\"\n[incline]\nangle_deg = 10\nangle = 0.1\n"),
            2
        );
    }

    #[test]
    fn grids() {
        assert_eq!(linspace([1.0, 2.0], 1), vec![1.0]);
        assert_eq!(linspace([0.0, 1.0], 3), vec![0.0, 0.5, 1.0]);
        let s = SweepSection {
            alpha_deg: [1.0, 30.0],
            alpha_points: 291,
            eta_r: [0.2, 0.5],
            eta_points: 31,
            ..SweepSection::default()
        };
        assert_eq!(s.alphas_deg().len() * s.etas().len(), 9021);
    }
}
