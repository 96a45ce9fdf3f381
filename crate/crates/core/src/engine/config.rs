use serde::{Deserialize, Serialize};

use crate::agent::{CostWeights, RedundancyExponent};

use super::EngineError;

/// Every tunable of a run. Missing fields in a scenario file take the
/// defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Time step, seconds.
    pub dt: f64,
    pub robot_radius: f64,
    /// Commanded speed, m/s.
    pub speed: f64,
    /// How far beyond the robot disc a surface still counts as touched.
    pub tactile_range: f64,
    /// Radius of the candidate-goal circle.
    pub goal_radius: f64,
    pub candidate_count: usize,
    pub beta: f64,
    pub gamma: f64,
    pub redundancy_exponent: RedundancyExponent,
    pub r_comm: f64,
    /// Minimum robot separation; `None` means twice the robot radius.
    pub d_min: Option<f64>,
    /// Per-robot termination threshold on logged points.
    pub points_to_log: usize,
    pub max_steps: u64,
    pub backoff_distance: f64,
    /// Only used by the harness for start placement.
    pub seed: u64,
    pub log_at_robot_center: bool,
    pub walls_are_tactile: bool,
    pub goal_reached_tolerance: f64,
    /// Extra separation beyond `d_min` before a pair can collide again.
    pub collision_hysteresis: f64,
    /// Contact points closer than this to the previous one during continuous
    /// contact are dropped.
    pub min_point_separation: f64,
    /// Reverse after every logged obstacle contact, not only on stalls.
    pub backoff_on_obstacle: bool,
    /// Cell size used to count path revisits.
    pub redundancy_cell_size: f64,
    pub map_cell_size: f64,
    pub map_kernel_radius: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 0.25,
            robot_radius: 0.037,
            speed: 0.057,
            tactile_range: 0.005,
            goal_radius: 0.3,
            candidate_count: 360,
            beta: 0.9,
            gamma: 0.1,
            redundancy_exponent: RedundancyExponent::Squared,
            r_comm: 3.0,
            d_min: None,
            points_to_log: 100,
            max_steps: 20_000,
            backoff_distance: 0.05,
            seed: 1,
            log_at_robot_center: false,
            walls_are_tactile: true,
            goal_reached_tolerance: 0.01,
            collision_hysteresis: 0.01,
            min_point_separation: 0.002,
            backoff_on_obstacle: false,
            redundancy_cell_size: 0.01,
            map_cell_size: 0.01,
            map_kernel_radius: 0.05,
        }
    }
}

impl SimConfig {
    pub fn d_min(&self) -> f64 {
        self.d_min.unwrap_or(2.0 * self.robot_radius)
    }

    pub fn weights(&self) -> Result<CostWeights, EngineError> {
        CostWeights::new(self.beta, self.gamma, self.redundancy_exponent)
            .map_err(|e| EngineError::InvalidConfig(e.to_string()))
    }

    // The negated comparisons are deliberate: NaN has to fail them.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |msg: String| Err(EngineError::InvalidConfig(msg));
        let positive = [
            ("dt", self.dt),
            ("robot_radius", self.robot_radius),
            ("speed", self.speed),
            ("goal_radius", self.goal_radius),
            ("r_comm", self.r_comm),
            ("redundancy_cell_size", self.redundancy_cell_size),
            ("map_cell_size", self.map_cell_size),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        let non_negative = [
            ("tactile_range", self.tactile_range),
            ("backoff_distance", self.backoff_distance),
            ("goal_reached_tolerance", self.goal_reached_tolerance),
            ("collision_hysteresis", self.collision_hysteresis),
            ("min_point_separation", self.min_point_separation),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be non-negative, got {v}"));
            }
        }
        if self.candidate_count == 0 {
            return bad("candidate_count must be at least 1".into());
        }
        if self.points_to_log == 0 {
            return bad("points_to_log must be at least 1".into());
        }
        if self.max_steps == 0 {
            return bad("max_steps must be at least 1".into());
        }
        if !(self.d_min() >= 2.0 * self.robot_radius) {
            return bad(format!(
                "d_min {} is below twice the robot radius {}",
                self.d_min(),
                self.robot_radius
            ));
        }
        if !(self.map_kernel_radius >= self.map_cell_size) {
            return bad(format!(
                "map_kernel_radius {} must be at least map_cell_size {}",
                self.map_kernel_radius, self.map_cell_size
            ));
        }
        self.weights().map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = SimConfig::default();
        c.validate().unwrap();
        assert_eq!(c.d_min(), 0.074);
        assert_eq!(c.candidate_count, 360);
        assert_eq!(c.goal_radius, 0.3);
        assert_eq!(c.points_to_log, 100);
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = SimConfig {
            dt: 0.0,
            ..SimConfig::default()
        };
        assert!(c.validate().is_err());
        c = SimConfig {
            d_min: Some(0.05),
            ..SimConfig::default()
        };
        assert!(c.validate().is_err());
        c = SimConfig {
            beta: 0.0,
            gamma: 0.0,
            ..SimConfig::default()
        };
        assert!(c.validate().is_err());
        c = SimConfig {
            points_to_log: 0,
            ..SimConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
