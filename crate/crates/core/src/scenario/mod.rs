//! Reference experiments: configuration, world construction, recording,
//! parameter sweeps and roll-model comparison.

mod build;
mod compare;
mod config;
mod record;
mod run;
mod stack;
mod sweep;

pub use build::{build_world, friction_params, incline_gravity};
pub use compare::{compare_roll_models, RollComparison};
pub use config::{
    linspace, BodySection, FrictionSection, InclineSection, NormalKind, NormalSection, Pose, ScenarioConfig,
    ScenarioKind, StackingSection, SweepSection,
};
pub use record::{fmt_f64, BodySample, ContactSample, Sample, Trajectory};
pub use run::{run_with, run_world, simulate};
pub use stack::{
    critical_mass_curve, critical_top_mass, stack_outcome, write_critical_csv, CriticalMass, FailureMode, StackOutcome,
};
pub use sweep::{
    cell_config, phase_map, steady_state, write_phase_csv, PhaseCell, WindowStats, PURE_SLIP_RATIO, REST_SPEED,
};
