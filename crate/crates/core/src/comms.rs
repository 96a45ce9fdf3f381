//! Range-limited neighbor discovery over the communication disk graph.

use std::collections::VecDeque;

use thiserror::Error;

use crate::geometry::{euclidean, Vec2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CommsError {
    #[error("observer {0} is not in the position table")]
    UnknownObserver(usize),
}

/// What one robot can hear at a given step.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSnapshot {
    pub observer_id: usize,
    /// Sorted by id; never contains the observer.
    pub neighbors: Vec<(usize, Vec2)>,
    pub taken_at_step: u64,
}

impl NeighborSnapshot {
    pub fn positions(&self) -> Vec<Vec2> {
        self.neighbors.iter().map(|&(_, p)| p).collect()
    }

    pub fn ids(&self) -> Vec<usize> {
        self.neighbors.iter().map(|&(id, _)| id).collect()
    }
}

/// Robots `j ≠ observer` with `‖p_observer − p_j‖ ≤ r_comm`, sorted by id.
pub fn neighbor_set(
    all_positions: &[(usize, Vec2)],
    observer_id: usize,
    r_comm: f64,
    step: u64,
) -> Result<NeighborSnapshot, CommsError> {
    let &(_, me) = all_positions
        .iter()
        .find(|(id, _)| *id == observer_id)
        .ok_or(CommsError::UnknownObserver(observer_id))?;
    let mut neighbors: Vec<(usize, Vec2)> = all_positions
        .iter()
        .filter(|&&(id, p)| id != observer_id && euclidean(me, p) <= r_comm)
        .copied()
        .collect();
    neighbors.sort_by_key(|&(id, _)| id);
    Ok(NeighborSnapshot {
        observer_id,
        neighbors,
        taken_at_step: step,
    })
}

/// Whether the `r_comm` disk graph is a single connected component.
pub fn is_fully_connected(all_positions: &[(usize, Vec2)], r_comm: f64) -> bool {
    let n = all_positions.len();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if !seen[j] && euclidean(all_positions[i].1, all_positions[j].1) <= r_comm {
                seen[j] = true;
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    reached == n
}
