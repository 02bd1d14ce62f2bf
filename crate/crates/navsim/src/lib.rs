//! Desk-scale dual-rate navigation stack.
//!
//! A slow privileged planner grounds mid-term goals as pixel coordinates in the
//! agent's egocentric view; a fast flow-matching policy turns those goals into
//! dense 32-waypoint trajectories; an asynchronous dual-rate executor closes the
//! loop over simulated time. The [`benchmark`] module adds procedural worlds,
//! the full navigation metric suite, and a social variant with scripted
//! dynamic humanoids.
//!
//! Crate layout mirrors the pipeline:
//!
//! * [`world`] — 2.5D occupancy grid, depth/mask rendering, discrete kinematics
//! * [`projection`] — trajectory projection, occlusion culling, pixel-goal labels
//! * [`planner`] — A* global planner emitting the slow-system output contract
//! * [`flow`] — flow-matching trajectory policy with from-scratch gradients
//! * [`executor`] — asynchronous slow/fast loop over simulated time
//! * [`benchmark`] — episodes, metrics, social curation, diagnostics
//! * [`dataset`] — grounding-sample dataset files (JSONL)

pub mod benchmark;
pub mod dataset;
pub mod error;
pub mod executor;
pub mod flow;
pub mod parallel;
pub mod planner;
pub mod projection;
pub mod rng;
pub mod world;

pub use error::{Error, Result};
