//! Contact friction for rigid bodies with slide, roll and spin histories
//! tracked in a moving tangent frame.

// `!(x > 0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod friction;
pub mod geometry;
pub mod kinematics;
pub mod normal;
pub mod oracles;
pub mod scalar;
pub mod scenario;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision aliases.
pub type World = dynamics::World<f64>;
pub type Body = dynamics::Body<f64>;
pub type BodyState = dynamics::BodyState<f64>;
pub type Interaction = dynamics::Interaction<f64>;
pub type FrictionParams = friction::FrictionParams<f64>;
pub type ContactFrame = kinematics::ContactFrame<f64>;
pub type Shape = geometry::Shape<f64>;
pub type NormalModel = normal::NormalModel<f64>;

/// Single-precision aliases.
pub type World32 = dynamics::World<f32>;
pub type FrictionParams32 = friction::FrictionParams<f32>;
