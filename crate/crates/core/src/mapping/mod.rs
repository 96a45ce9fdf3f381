//! Collaborative map construction from the robots' logged contact points.
//!
//! Local point sets are merged into one global set, rasterized into a
//! tri-state grid together with the swept robot discs, and splatted into a
//! normalized density grid for the interpolated obstacle map.

mod export;
mod grid;

use std::collections::HashSet;

use crate::geometry::{euclidean, Vec2};
use crate::world::World;

pub use export::{
    export_grid, import_grid_csv, read_points_csv, write_points_csv, GridFormat, GridValue,
    MappingError,
};
pub use grid::{CellState, DensityGrid, Grid, TriStateGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct ExplorationMap {
    /// Per-robot point sets, in logging order.
    pub local_sets: Vec<Vec<Vec2>>,
    pub global_set: Vec<Vec2>,
    pub grid: TriStateGrid,
    pub cell_size: f64,
    pub origin: Vec2,
}

impl ExplorationMap {
    pub fn build(
        local_sets: &[Vec<Vec2>],
        trajectories: &[Vec<Vec2>],
        world: &World,
        cell_size: f64,
        robot_radius: f64,
    ) -> Self {
        let global_set = aggregate(local_sets);
        let grid = classify_grid(trajectories, &global_set, world, cell_size, robot_radius);
        ExplorationMap {
            local_sets: local_sets.to_vec(),
            global_set,
            cell_size,
            origin: grid.origin(),
            grid,
        }
    }
}

fn point_key(p: Vec2) -> (u64, u64) {
    // Adding 0.0 folds -0.0 into 0.0 so both hash alike.
    ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
}

/// Concatenates the local sets in robot order, dropping exact duplicates.
pub fn aggregate(local_sets: &[Vec<Vec2>]) -> Vec<Vec2> {
    let mut seen = HashSet::new();
    local_sets
        .iter()
        .flatten()
        .filter(|p| seen.insert(point_key(**p)))
        .copied()
        .collect()
}

/// Distance from `p` to the closed axis-aligned box `[lo, hi]`.
fn distance_to_box(p: Vec2, lo: Vec2, hi: Vec2) -> f64 {
    euclidean(p, Vec2::new(p.x.clamp(lo.x, hi.x), p.y.clamp(lo.y, hi.y)))
}

/// Cells touched by a robot disc at any trajectory point become `Free`;
/// cells holding a global point become `Obstacle`, overriding `Free`.
pub fn classify_grid(
    trajectories: &[Vec<Vec2>],
    global_points: &[Vec2],
    world: &World,
    cell_size: f64,
    robot_radius: f64,
) -> TriStateGrid {
    let mut grid = Grid::covering(world.bounds(), cell_size, CellState::Unexplored);
    for &p in trajectories.iter().flatten() {
        let Some(((c0, c1), (r0, r1))) = grid.cells_near(p, robot_radius) else {
            continue;
        };
        for row in r0..=r1 {
            for col in c0..=c1 {
                let (lo, hi) = grid.cell_bounds(col, row);
                if distance_to_box(p, lo, hi) <= robot_radius {
                    grid.set(col, row, CellState::Free);
                }
            }
        }
    }
    for &p in global_points {
        if let Some((col, row)) = grid.cell_of(p) {
            grid.set(col, row, CellState::Obstacle);
        }
    }
    grid
}

/// Sum of triangular kernels `max(0, 1 − d/kernel_radius)` evaluated at cell
/// centers, normalized so the largest cell is 1. No points gives all zeros.
///
/// Points are summed in a canonical order, so the result does not depend on
/// the order they are passed in.
pub fn interpolate_map(
    global_points: &[Vec2],
    world: &World,
    cell_size: f64,
    kernel_radius: f64,
) -> DensityGrid {
    let mut grid = Grid::covering(world.bounds(), cell_size, 0.0f64);
    let mut points = global_points.to_vec();
    points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    for p in points {
        let Some(((c0, c1), (r0, r1))) = grid.cells_near(p, kernel_radius) else {
            continue;
        };
        for row in r0..=r1 {
            for col in c0..=c1 {
                let w = 1.0 - euclidean(grid.cell_center(col, row), p) / kernel_radius;
                if w > 0.0 {
                    *grid.get_mut(col, row) += w;
                }
            }
        }
    }
    let max = grid.cells().iter().copied().fold(0.0f64, f64::max);
    if max > 0.0 {
        grid = grid.map(|v| v / max);
    }
    grid
}
