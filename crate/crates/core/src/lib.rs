//! Outage analysis and relay-chain design for multihop mmWave backhaul over
//! hovering platforms.
//!
//! The pieces compose bottom-up: [`atmosphere`] gives the path gain of a hop,
//! [`antenna`] the array gain under tilt, [`vibration`] the tilt statistics,
//! [`outage`] the closed-form hop outage, [`chain`] the end-to-end figure for a
//! [`geometry::ChainPlan`], and [`optimizer`] searches for the cheapest plan.
//! [`montecarlo`] is an independent simulator used to check the closed forms.

// `!(x > 0.0)` is used on purpose so NaN takes the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antenna;
pub mod atmosphere;
pub mod chain;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod optimizer;
pub mod outage;
pub mod quadrature;
pub mod units;
pub mod vibration;

pub use error::{Error, Result};
