use std::io::Write;
use std::ops::ControlFlow;

use rayon::prelude::*;

use super::config::{ScenarioConfig, ScenarioKind};
use super::record::fmt_f64;
use super::run::run_with;
use crate::error::{Error, Result};
use crate::friction::Mode;

/// Friction channels of the bottom spheres' ground contacts that were
/// kinetic for most of the collapse.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FailureMode {
    pub slide_kinetic: bool,
    pub roll_kinetic: bool,
}

impl FailureMode {
    pub fn label(&self) -> &'static str {
        match (self.roll_kinetic, self.slide_kinetic) {
            (true, true) => "roll-kinetic/slide-kinetic",
            (true, false) => "roll-kinetic/slide-static",
            (false, true) => "roll-static/slide-kinetic",
            (false, false) => "roll-static/slide-static",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackOutcome {
    pub collapsed: bool,
    /// Time at which the top sphere had dropped far enough to count as a
    /// collapse.
    pub collapse_time: Option<f64>,
    /// Share of contact-steps in the collapse phase with kinetic slide.
    pub slide_kinetic_share: f64,
    /// Share of contact-steps in the collapse phase with kinetic roll.
    pub roll_kinetic_share: f64,
    /// Final drop of the top sphere (m).
    pub drop: f64,
}

impl StackOutcome {
    pub fn mode(&self) -> FailureMode {
        FailureMode {
            slide_kinetic: self.slide_kinetic_share > 0.5,
            roll_kinetic: self.roll_kinetic_share > 0.5,
        }
    }
}

/// Ground contacts of the bottom spheres, by interaction index.
const GROUND_CONTACTS: [usize; 2] = [0, 1];

/// Fraction of the collapse drop after which the collapse phase begins.
const PHASE_START: f64 = 0.25;

/// Runs one stacking simulation, stopping once the top sphere has dropped
/// by `stacking.collapse_drop` radii.
pub fn stack_outcome(cfg: &ScenarioConfig) -> Result<StackOutcome> {
    if cfg.scenario != ScenarioKind::Stacking {
        return Err(Error::Config("stack outcome needs the stacking scenario".into()));
    }
    let threshold = cfg.stacking.collapse_drop * cfg.stacking.radius;
    let mut z0 = None;
    let mut drop = 0.0;
    let (mut seen, mut slide, mut roll) = (0usize, 0usize, 0usize);
    let mut collapse_time = None;
    run_with::<f64>(cfg, |w| {
        let z = w.bodies[3].state.position.z;
        let start = *z0.get_or_insert(z);
        drop = start - z;
        if drop > PHASE_START * threshold {
            for k in GROUND_CONTACTS {
                if let Some(r) = w.report(k) {
                    seen += 1;
                    slide += usize::from(r.slide_mode == Mode::Kinetic);
                    roll += usize::from(r.roll_mode_j == Mode::Kinetic);
                }
            }
        }
        if drop > threshold {
            collapse_time = Some(w.time);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    let share = |k: usize| if seen > 0 { k as f64 / seen as f64 } else { 0.0 };
    Ok(StackOutcome {
        collapsed: collapse_time.is_some(),
        collapse_time,
        slide_kinetic_share: share(slide),
        roll_kinetic_share: share(roll),
        drop,
    })
}

/// Bracket on the largest top mass the stack can hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalMass {
    pub eta_r: f64,
    /// Heaviest mass seen to hold.
    pub holds: f64,
    /// Lightest mass seen to collapse.
    pub collapses: f64,
    /// Failure mode at `collapses`.
    pub mode: FailureMode,
}

/// Bisects the top mass over `sweep.mass_range` down to
/// `sweep.mass_tolerance`. `None` if the bracket does not straddle the
/// transition.
pub fn critical_top_mass(cfg: &ScenarioConfig, eta_r: f64) -> Result<Option<CriticalMass>> {
    let at = |m: f64| {
        let mut c = cfg.clone();
        c.friction.eta_r = eta_r;
        c.stacking.top_mass = m;
        stack_outcome(&c)
    };
    let [mut lo, mut hi] = cfg.sweep.mass_range;
    if at(lo)?.collapsed {
        return Ok(None);
    }
    let mut top = at(hi)?;
    if !top.collapsed {
        return Ok(None);
    }
    while hi - lo > cfg.sweep.mass_tolerance {
        let mid = 0.5 * (lo + hi);
        let o = at(mid)?;
        if o.collapsed {
            hi = mid;
            top = o;
        } else {
            lo = mid;
        }
    }
    Ok(Some(CriticalMass {
        eta_r,
        holds: lo,
        collapses: hi,
        mode: top.mode(),
    }))
}

/// Critical mass for every `eta_r` of the sweep grid, in grid order.
pub fn critical_mass_curve(cfg: &ScenarioConfig, workers: Option<usize>) -> Result<Vec<(f64, Option<CriticalMass>)>> {
    cfg.validate()?;
    let etas = cfg.sweep.etas();
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n);
    }
    let pool = b
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| etas.par_iter().map(|&e| Ok((e, critical_top_mass(cfg, e)?))).collect())
}

pub fn write_critical_csv<W: Write>(rows: &[(f64, Option<CriticalMass>)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["eta_r", "holds", "collapses", "failure_mode"])?;
    for (eta, c) in rows {
        match c {
            Some(c) => w.write_record([
                fmt_f64(*eta),
                fmt_f64(c.holds),
                fmt_f64(c.collapses),
                c.mode.label().into(),
            ])?,
            None => w.write_record([fmt_f64(*eta), String::new(), String::new(), "unbracketed".into()])?,
        }
    }
    w.flush()?;
    Ok(())
}
