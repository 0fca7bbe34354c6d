//! Dispatch path planning and helpfulness-driven, budget-limited target
//! selection.

pub mod grid;
pub mod help;
pub mod tour;

use thiserror::Error;

pub use grid::{astar, travel_time, NavGrid, Path};
pub use help::{estimate_distance, helpfulness, node_from_face, HelpfulnessConfig};
pub use tour::{brute_force_tour, plan_tour, replan, CostMatrix, HelpNode, TourPlan};

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("no path to the goal")]
    NoPath,
    #[error("cell ({x}, {y}) is not passable")]
    Blocked { x: usize, y: usize },
    #[error("{n} nodes exceed the exact-solver limit of {max}")]
    InstanceTooLarge { n: usize, max: usize },
}
