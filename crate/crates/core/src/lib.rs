//! Drone monitoring-site placement and distance-bounded multi-tour planning
//! over road networks.
//!
//! The pipeline runs: project the inputs onto a local plane, lay candidate
//! hover sites on per-subarea lattices, sample road PoIs, pick a covering set
//! of sites, then split those sites into the fewest closed tours that each fit
//! the drone's travel budget.

pub mod clustering;
pub mod config;
pub mod coverage;
pub mod fixture;
pub mod geometry;
pub mod io;
pub mod pipeline;
pub mod planner;
pub mod routing;
pub mod svg;
