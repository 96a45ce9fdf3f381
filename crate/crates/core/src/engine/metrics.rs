use std::collections::HashSet;

use crate::geometry::Vec2;

/// Summary of one run, with the same quantities the experiment tables report.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub sim_time: f64,
    pub steps: u64,
    pub robot_collision_count: u64,
    pub total_logged_points: usize,
    pub logged_points_per_second: f64,
    pub per_robot_logged_counts: Vec<usize>,
    /// `(time_s, cumulative logged points)` at every logging event.
    pub logged_points_timeline: Vec<(f64, usize)>,
    pub path_redundancy: Vec<usize>,
    pub terminated_all: bool,
}

/// Number of path points whose grid cell was already visited by an earlier
/// point of the same path.
pub fn path_redundancy(path: &[Vec2], cell_size: f64) -> usize {
    let mut seen = HashSet::with_capacity(path.len());
    path.iter()
        .filter(|p| {
            let cell = (
                (p.x / cell_size).floor() as i64,
                (p.y / cell_size).floor() as i64,
            );
            !seen.insert(cell)
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_cells_have_no_redundancy() {
        let path: Vec<Vec2> = (0..5).map(|i| Vec2::new(i as f64 * 0.1, 0.0)).collect();
        assert_eq!(path_redundancy(&path, 0.05), 0);
    }

    #[test]
    fn shared_cell_counts_once() {
        let path = [
            Vec2::new(0.0, 0.0),
            Vec2::new(0.001, 0.001),
            Vec2::new(0.5, 0.5),
        ];
        assert_eq!(path_redundancy(&path, 0.05), 1);
    }

    #[test]
    fn identical_points() {
        let path = vec![Vec2::new(0.3, -0.2); 7];
        assert_eq!(path_redundancy(&path, 0.05), 6);
        assert_eq!(path_redundancy(&[], 0.05), 0);
    }

    #[test]
    fn negative_coordinates_use_floor() {
        // -0.001 and 0.001 straddle the origin and fall in different cells.
        let path = [Vec2::new(-0.001, 0.0), Vec2::new(0.001, 0.0)];
        assert_eq!(path_redundancy(&path, 0.05), 0);
    }
}
