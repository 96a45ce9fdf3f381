//! Deterministic 2D multi-robot exploration by touch.
//!
//! A team of disc robots explores a bounded arena. A robot only learns about
//! an obstacle by touching it, and logs the contact point. Each robot picks
//! its next waypoint on its own, from candidates evenly spaced on a circle,
//! by minimizing a weighted sum of two costs: how close the candidate is to
//! the neighbors it can hear, and how close it is to points it has already
//! logged. A robot stops for good once it has logged a fixed number of
//! points. The logged points of all robots are merged into an obstacle map.
//!
//! Modules, bottom up:
//!
//! - [`geometry`]: vectors, shapes, signed distances.
//! - [`world`]: the arena, obstacles and the tactile contact query.
//! - [`agent`]: candidate goals, the cost function and goal selection.
//! - [`comms`]: range-limited neighbor sets.
//! - [`engine`]: the step loop, events, metrics and run logs.
//! - [`mapping`]: point aggregation, tri-state and density grids, export.
//! - [`harness`]: scenario files, parameter sweeps and output directories.
//!
//! ```
//! use tactile_explore::engine::{run, SimConfig};
//! use tactile_explore::geometry::Vec2;
//! use tactile_explore::world::World;
//!
//! let world = World::empty_square(1.5, true).unwrap();
//! let cfg = SimConfig { points_to_log: 5, ..SimConfig::default() };
//! let out = run(world, &[Vec2::new(-0.3, 0.0), Vec2::new(0.3, 0.0)], cfg).unwrap();
//! assert!(out.metrics.terminated_all);
//! assert_eq!(out.metrics.total_logged_points, 10);
//! ```

pub mod agent;
pub mod comms;
pub mod engine;
pub mod geometry;
pub mod harness;
pub mod mapping;
pub mod world;
