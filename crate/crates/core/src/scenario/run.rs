use std::ops::ControlFlow;

use super::build::build_world;
use super::config::ScenarioConfig;
use super::record::{Sample, Trajectory};
use crate::dynamics::World;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Steps the world for the configured duration, calling `observe` after
/// every step. The observer may stop the run early.
pub fn run_world<T: Real>(
    world: &mut World<T>,
    cfg: &ScenarioConfig,
    mut observe: impl FnMut(&World<T>) -> ControlFlow<()>,
) -> Result<()> {
    let dt = T::lit(cfg.dt);
    for _ in 0..cfg.steps() {
        world.step(dt)?;
        if let Some(b) = world.bodies.iter().find(|b| !b.state.is_finite()) {
            return Err(Error::NonFinite(format!("state of `{}` at t = {}", b.name, world.time)));
        }
        if observe(world).is_break() {
            break;
        }
    }
    Ok(())
}

/// Builds and runs the scenario, returning the final world.
pub fn run_with<T: Real>(cfg: &ScenarioConfig, observe: impl FnMut(&World<T>) -> ControlFlow<()>) -> Result<World<T>> {
    let mut world = build_world(cfg)?;
    run_world(&mut world, cfg, observe)?;
    Ok(world)
}

/// Runs the scenario and records every `output_every`-th step, starting
/// with the initial state.
pub fn simulate<T: Real>(cfg: &ScenarioConfig) -> Result<Trajectory> {
    let mut world = build_world::<T>(cfg)?;
    let mut tr = Trajectory::new(&world);
    tr.samples.push(Sample::capture(&world));
    let every = cfg.output_every as u64;
    run_world(&mut world, cfg, |w| {
        if w.steps % every == 0 {
            tr.samples.push(Sample::capture(w));
        }
        ControlFlow::Continue(())
    })?;
    Ok(tr)
}
