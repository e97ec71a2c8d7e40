//! Planning library for the pony express problem: deliver a message from a
//! source to a destination in the plane using robots with heterogeneous
//! maximum speeds, where the message changes hands only when two robots are
//! co-located (face-to-face handover).
//!
//! The crate provides:
//! - an exact offline solver for two robots ([`offline_two`]),
//! - a sqrt(2)-approximate grid solver for n robots ([`offline_multi`]),
//! - the race-through-source online strategy and adversarial constructions
//!   with competitive-ratio lower-bound sweeps ([`online`]),
//! - brute-force reference oracles used to validate the solvers ([`oracle`]),
//! - JSON instance/plan serialization ([`io`]) and SVG plotting ([`svg`]).

pub mod error;
pub mod geometry;
pub mod io;
pub mod offline_multi;
pub mod offline_two;
pub mod online;
pub mod oracle;
pub mod plan;
pub mod search;
pub mod svg;

pub use error::{Error, Result};
pub use geometry::{Circle, Point};
pub use plan::{DeliveryPlan, EventKind, Instance, PlanEvent, Robot};

/// Speeds closer than this to each other (relatively) are treated as equal;
/// the Apollonius construction degenerates as the speed ratio approaches 1.
pub const TOL_SPEED: f64 = 1e-9;
