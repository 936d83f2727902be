use std::io::Write;

use super::config::{ScenarioConfig, ScenarioKind};
use super::record::{fmt_f64, Trajectory};
use super::run::simulate;
use crate::error::{Error, Result};
use crate::friction::RollModel;

/// The same scenario under the history-based and the legacy roll model.
#[derive(Debug, Clone, PartialEq)]
pub struct RollComparison {
    pub history: Trajectory,
    pub legacy: Trajectory,
}

/// Runs a rolling disk or sphere under both roll models from identical
/// initial conditions.
pub fn compare_roll_models(cfg: &ScenarioConfig) -> Result<RollComparison> {
    if !matches!(cfg.scenario, ScenarioKind::DiskRolling | ScenarioKind::SphereIncline) {
        return Err(Error::Config(format!(
            "roll-model comparison needs disk_rolling or sphere_incline, not {}",
            cfg.scenario
        )));
    }
    let mut h = cfg.clone();
    h.friction.roll_model = RollModel::History;
    let mut l = cfg.clone();
    l.friction.roll_model = RollModel::Legacy;
    Ok(RollComparison {
        history: simulate::<f64>(&h)?,
        legacy: simulate::<f64>(&l)?,
    })
}

const COLUMNS: [&str; 13] = [
    "x",
    "z",
    "vx",
    "vz",
    "wx",
    "wy",
    "wz",
    "roll_x",
    "roll_y",
    "roll_z",
    "normal_force",
    "slide_fx",
    "slide_mode",
];

impl RollComparison {
    /// Side-by-side time series of the first body and first contact.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        if self.history.samples.len() != self.legacy.samples.len() {
            return Err(Error::Config("runs have different lengths".into()));
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        for model in ["history", "legacy"] {
            header.extend(COLUMNS.iter().map(|c| format!("{model}.{c}")));
        }
        w.write_record(&header)?;
        for (a, b) in self.history.samples.iter().zip(&self.legacy.samples) {
            let mut row = vec![fmt_f64(a.t)];
            for s in [a, b] {
                let body = &s.bodies[0];
                row.extend(
                    [
                        body.position[0],
                        body.position[2],
                        body.velocity[0],
                        body.velocity[2],
                        body.angular_velocity[0],
                        body.angular_velocity[1],
                        body.angular_velocity[2],
                    ]
                    .map(fmt_f64),
                );
                match &s.contacts[0] {
                    Some(c) => {
                        let t = c.roll_torque_j();
                        row.extend([t[0], t[1], t[2], c.normal_force, c.slide_elastic[0]].map(fmt_f64));
                        row.push(c.slide_mode.label().to_string());
                    }
                    None => row.extend(std::iter::repeat_n(String::new(), 6)),
                }
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
