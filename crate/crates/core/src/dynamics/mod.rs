//! Rigid-body state, the half-implicit integrator and the contact pipeline.

mod body;
mod integrate;
mod world;

pub use body::{fictitious, reduced, Body, BodyState, DofMask, MassProps};
pub use integrate::{integrate_step, LoadAccumulator};
pub use world::{ContactReport, Interaction, PairState, World};
