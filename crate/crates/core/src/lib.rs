//! Priority planning against SIS contagions on networks.
//!
//! A priority plan treats infected nodes in a fixed order; its quality is
//! governed by the maximum cutwidth of that order viewed as a linear
//! arrangement. This crate provides the graph substrate, arrangement costs
//! and ordering heuristics, an exact event-driven SIS simulator with
//! budgeted resource allocation, and closed-form extinction-time bounds with
//! a Monte Carlo threshold estimator.

pub mod arrangement;
pub mod bounds;
pub mod epidemic;
pub mod error;
pub mod graph;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{connected_components, Graph};
pub use rng::RngSeed;
