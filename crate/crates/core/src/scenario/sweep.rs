use std::io::Write;
use std::ops::ControlFlow;

use rayon::prelude::*;

use super::config::{ScenarioConfig, ScenarioKind};
use super::record::fmt_f64;
use super::run::run_with;
use crate::error::{Error, Result};
use crate::friction::Mode;
use crate::oracles::{classify_sphere_incline, SteadyState};

/// Speeds below this count as rest (m/s).
pub const REST_SPEED: f64 = 1e-3;
/// Rolling speed `|ω|R` below this fraction of the sliding speed counts as
/// pure slipping.
pub const PURE_SLIP_RATIO: f64 = 0.01;

/// Averages collected over the final window of a sphere-on-incline run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WindowStats {
    pub speed: f64,
    pub rolling_speed: f64,
    pub static_fraction: f64,
    pub samples: usize,
}

impl WindowStats {
    pub fn classify(&self) -> SteadyState {
        if self.speed < REST_SPEED && self.rolling_speed < REST_SPEED {
            SteadyState::S
        } else if self.rolling_speed < PURE_SLIP_RATIO * self.speed {
            SteadyState::PS
        } else if self.static_fraction > 0.5 {
            SteadyState::PR
        } else {
            SteadyState::RwS
        }
    }
}

/// Runs one sphere-on-incline simulation and classifies its final window.
pub fn steady_state(cfg: &ScenarioConfig) -> Result<(SteadyState, WindowStats)> {
    let radius = cfg.body.radius;
    let start = cfg.steps().saturating_sub((cfg.sweep.window / cfg.dt).round() as u64);
    let mut acc = WindowStats::default();
    let mut statics = 0usize;
    run_with::<f64>(cfg, |w| {
        if w.steps > start {
            let s = &w.bodies[1].state;
            acc.speed += s.velocity.norm();
            acc.rolling_speed += s.angular_velocity.norm() * radius;
            if w.report(0).is_some_and(|r| r.slide_mode == Mode::Static) {
                statics += 1;
            }
            acc.samples += 1;
        }
        ControlFlow::Continue(())
    })?;
    if acc.samples > 0 {
        let n = acc.samples as f64;
        acc.speed /= n;
        acc.rolling_speed /= n;
        acc.static_fraction = statics as f64 / n;
    }
    Ok((acc.classify(), acc))
}

/// One cell of the phase map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCell {
    pub alpha_deg: f64,
    pub eta_r: f64,
    pub simulated: SteadyState,
    pub oracle: SteadyState,
    /// The oracle changes class within half a grid step of this cell.
    pub boundary: bool,
}

impl PhaseCell {
    pub fn agrees(&self) -> bool {
        self.simulated == self.oracle
    }
}

fn spacing(v: &[f64]) -> f64 {
    if v.len() > 1 {
        v[1] - v[0]
    } else {
        0.0
    }
}

fn oracle(cfg: &ScenarioConfig, alpha_deg: f64, eta: f64) -> Result<SteadyState> {
    classify_sphere_incline(alpha_deg.to_radians(), cfg.friction.mu_s, cfg.friction.mu_k, eta)
}

/// Configuration of one phase-map cell.
pub fn cell_config(cfg: &ScenarioConfig, alpha_deg: f64, eta: f64) -> ScenarioConfig {
    let mut c = cfg.clone();
    c.incline.angle = None;
    c.incline.angle_deg = Some(alpha_deg);
    c.friction.eta_r = eta;
    c.friction.k_d = None;
    c.friction.slide_damping_scale = cfg.sweep.slide_damping_scale;
    c.friction.roll_damping = None;
    c.friction.roll_damping_scale = cfg.sweep.roll_damping_scale;
    c
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Simulates the sphere-on-incline grid in parallel. Results come back in
/// grid order (angle-major) whatever the worker count.
pub fn phase_map(cfg: &ScenarioConfig, workers: Option<usize>) -> Result<Vec<PhaseCell>> {
    if cfg.scenario != ScenarioKind::SphereIncline {
        return Err(Error::Config("phase maps need the sphere_incline scenario".into()));
    }
    cfg.validate()?;
    let alphas = cfg.sweep.alphas_deg();
    let etas = cfg.sweep.etas();
    let (ha, he) = (0.5 * spacing(&alphas), 0.5 * spacing(&etas));
    let grid: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| etas.iter().map(move |&e| (a, e))).collect();
    pool(workers)?.install(|| {
        grid.par_iter()
            .map(|&(a, e)| {
                let (simulated, _) = steady_state(&cell_config(cfg, a, e))?;
                let centre = oracle(cfg, a, e)?;
                let boundary = [(a - ha, e), (a + ha, e), (a, e - he), (a, e + he)]
                    .into_iter()
                    .filter(|&(x, _)| x > 0.0 && x < 90.0)
                    .any(|(x, y)| oracle(cfg, x, y.max(0.0)).is_ok_and(|c| c != centre));
                Ok(PhaseCell {
                    alpha_deg: a,
                    eta_r: e,
                    simulated,
                    oracle: centre,
                    boundary,
                })
            })
            .collect()
    })
}

pub fn write_phase_csv<W: Write>(cells: &[PhaseCell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alpha_deg", "eta_r", "simulated", "oracle", "agree", "boundary"])?;
    for c in cells {
        w.write_record([
            fmt_f64(c.alpha_deg),
            fmt_f64(c.eta_r),
            c.simulated.label().to_string(),
            c.oracle.label().to_string(),
            c.agrees().to_string(),
            c.boundary.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
