//! Per-robot decision kernel: candidate goals on a circle, the weighted
//! collision/redundancy cost, and argmin goal selection.
//!
//! Everything in here is a pure function of locally available data: the
//! robot's own position, the neighbor positions it can hear, and its own
//! logged contact points.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Vec2;

/// Distances are clamped below at this value before inversion.
pub const SINGULARITY_GUARD: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AgentError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("candidate set is empty")]
    EmptyCandidates,
}

/// Power applied to distances in the redundancy term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum RedundancyExponent {
    /// `1 / d`
    Linear,
    /// `1 / d²`
    #[default]
    Squared,
}

impl TryFrom<u8> for RedundancyExponent {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(RedundancyExponent::Linear),
            2 => Ok(RedundancyExponent::Squared),
            other => Err(format!("redundancy exponent must be 1 or 2, got {other}")),
        }
    }
}

impl From<RedundancyExponent> for u8 {
    fn from(e: RedundancyExponent) -> u8 {
        match e {
            RedundancyExponent::Linear => 1,
            RedundancyExponent::Squared => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostWeights {
    beta: f64,
    gamma: f64,
    exponent: RedundancyExponent,
}

impl CostWeights {
    pub fn new(beta: f64, gamma: f64, exponent: RedundancyExponent) -> Result<Self, AgentError> {
        if !(beta.is_finite() && gamma.is_finite())
            || beta < 0.0
            || gamma < 0.0
            || beta + gamma <= 0.0
        {
            return Err(AgentError::InvalidParam(format!(
                "weights must be non-negative with a positive sum, got beta={beta} gamma={gamma}"
            )));
        }
        Ok(CostWeights {
            beta,
            gamma,
            exponent,
        })
    }

    /// Collision-avoidance weight.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Redundancy weight.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn exponent(&self) -> RedundancyExponent {
        self.exponent
    }
}

/// Goals evenly spaced on a circle, ordered by increasing angle
/// `2πk/P` for `k = 1..=P`.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateGoalSet {
    goals: Vec<Vec2>,
    center: Vec2,
    radius: f64,
}

impl CandidateGoalSet {
    pub fn goals(&self) -> &[Vec2] {
        &self.goals
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.goals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }
}

/// The selected goal. `index` is the zero-based position in the candidate
/// list, so `index = 0` is the goal at angle `2π/P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalChoice {
    pub goal: Vec2,
    pub index: usize,
    pub cost: f64,
}

pub fn generate_candidates(
    center: Vec2,
    radius: f64,
    count: usize,
) -> Result<CandidateGoalSet, AgentError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(AgentError::InvalidParam(format!(
            "goal radius must be positive, got {radius}"
        )));
    }
    if count == 0 {
        return Err(AgentError::InvalidParam(
            "candidate count must be at least 1".into(),
        ));
    }
    let goals = (1..=count)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / count as f64;
            center + Vec2::new(theta.cos(), theta.sin()) * radius
        })
        .collect();
    Ok(CandidateGoalSet {
        goals,
        center,
        radius,
    })
}

#[inline]
fn guarded_distance(a: Vec2, b: Vec2) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt().max(SINGULARITY_GUARD)
}

/// `Σ 1/‖g − p_j‖` over neighbor positions.
pub fn collision_cost(goal: Vec2, neighbors: &[Vec2]) -> f64 {
    neighbors
        .iter()
        .map(|&p| 1.0 / guarded_distance(goal, p))
        .sum()
}

/// `Σ 1/‖g − o‖^e` over the robot's own logged points.
pub fn redundancy_cost(goal: Vec2, logged: &[Vec2], exponent: RedundancyExponent) -> f64 {
    match exponent {
        RedundancyExponent::Linear => logged
            .iter()
            .map(|&o| 1.0 / guarded_distance(goal, o))
            .sum(),
        RedundancyExponent::Squared => logged
            .iter()
            .map(|&o| {
                let d = guarded_distance(goal, o);
                1.0 / (d * d)
            })
            .sum(),
    }
}

pub fn total_cost(goal: Vec2, neighbors: &[Vec2], logged: &[Vec2], w: &CostWeights) -> f64 {
    w.beta * collision_cost(goal, neighbors) + w.gamma * redundancy_cost(goal, logged, w.exponent)
}

/// Argmin of [`total_cost`] over the candidates; ties keep the lowest index.
pub fn select_goal(
    candidates: &CandidateGoalSet,
    neighbors: &[Vec2],
    logged: &[Vec2],
    w: &CostWeights,
) -> Result<GoalChoice, AgentError> {
    argmin_where(candidates, neighbors, logged, w, |_| true).ok_or(AgentError::EmptyCandidates)
}

/// Like [`select_goal`], but only among candidates that do not lead toward
/// `touched` (the position of something the robot just bumped into). Falls
/// back to all candidates when none qualify.
pub fn select_goal_away_from(
    candidates: &CandidateGoalSet,
    neighbors: &[Vec2],
    logged: &[Vec2],
    w: &CostWeights,
    touched: Vec2,
) -> Result<GoalChoice, AgentError> {
    let toward = touched - candidates.center;
    argmin_where(candidates, neighbors, logged, w, |g| {
        (g - candidates.center).dot(toward) <= 0.0
    })
    .map_or_else(|| select_goal(candidates, neighbors, logged, w), Ok)
}

fn argmin_where(
    candidates: &CandidateGoalSet,
    neighbors: &[Vec2],
    logged: &[Vec2],
    w: &CostWeights,
    keep: impl Fn(Vec2) -> bool,
) -> Option<GoalChoice> {
    let mut best: Option<GoalChoice> = None;
    for (index, &goal) in candidates.goals.iter().enumerate() {
        if !keep(goal) {
            continue;
        }
        let cost = total_cost(goal, neighbors, logged, w);
        if best.is_none_or(|b| cost < b.cost) {
            best = Some(GoalChoice { goal, index, cost });
        }
    }
    best
}

/// Constant-speed command toward `goal`, or zero once within `tolerance`.
pub fn velocity_toward(position: Vec2, goal: Vec2, speed: f64, tolerance: f64) -> Vec2 {
    let d = goal - position;
    let dist = d.norm();
    if dist < tolerance || dist == 0.0 {
        return Vec2::ZERO;
    }
    d * (speed / dist)
}

/// Life-cycle of one robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Exploring,
    /// Reversing after a collision (or a stall against a surface).
    BackingOff {
        remaining: f64,
        direction: Vec2,
    },
    Terminated,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::Exploring => "exploring",
            Phase::BackingOff { .. } => "backing_off",
            Phase::Terminated => "terminated",
        }
    }
}

/// One robot's full state as owned by the simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    pub id: usize,
    pub position: Vec2,
    pub velocity: Vec2,
    pub goal: Option<Vec2>,
    /// Local obstacle point set, in logging order.
    pub logged_points: Vec<Vec2>,
    /// One entry per step while the robot is active, starting with the start pose.
    pub path_history: Vec<Vec2>,
    pub phase: Phase,
    /// Unit direction of the last non-zero motion.
    pub heading: Option<Vec2>,
    /// Whether the tactile query fired on the previous step.
    pub in_contact: bool,
}

impl RobotState {
    pub fn new(id: usize, position: Vec2) -> Self {
        RobotState {
            id,
            position,
            velocity: Vec2::ZERO,
            goal: None,
            logged_points: Vec::new(),
            path_history: vec![position],
            phase: Phase::Exploring,
            heading: None,
            in_contact: false,
        }
    }

    pub fn is_terminated(&self) -> bool {
        matches!(self.phase, Phase::Terminated)
    }
}
