//! CSV writers for per-run trajectory, event and timeline logs.

use std::io::Write;

use serde::Serialize;

use super::{ContactEvent, EventKind, TrajectoryRow};
use crate::world::ContactSource;

#[derive(Serialize)]
struct TrajectoryRecord {
    step: u64,
    time_s: f64,
    robot_id: usize,
    x: f64,
    y: f64,
    phase: &'static str,
    goal_x: Option<f64>,
    goal_y: Option<f64>,
}

#[derive(Serialize)]
struct EventRecord {
    step: u64,
    time_s: f64,
    kind: String,
    robot_ids: String,
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct TimelineRecord {
    time_s: f64,
    cumulative_logged_points: usize,
}

/// Columns: step, time_s, robot_id, x, y, phase, goal_x, goal_y.
pub fn write_trajectory_csv<W: Write>(rows: &[TrajectoryRow], dt: f64, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(TrajectoryRecord {
            step: r.step,
            time_s: r.step as f64 * dt,
            robot_id: r.robot_id,
            x: r.position.x,
            y: r.position.y,
            phase: r.phase,
            goal_x: r.goal.map(|g| g.x),
            goal_y: r.goal.map(|g| g.y),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: step, time_s, kind, robot_ids, x, y. Collisions list both ids
/// separated by `;` and report the midpoint.
pub fn write_events_csv<W: Write>(events: &[ContactEvent], dt: f64, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if events.is_empty() {
        w.write_record(["step", "time_s", "kind", "robot_ids", "x", "y"])?;
    }
    for e in events {
        let (kind, robot_ids, p) = match e.kind {
            EventKind::ObstacleContact {
                robot,
                point,
                source,
            } => {
                let kind = match source {
                    ContactSource::Obstacle(i) => format!("obstacle_contact:{i}"),
                    ContactSource::Wall => "wall_contact".to_string(),
                };
                (kind, robot.to_string(), point)
            }
            EventKind::RobotCollision { a, b, midpoint } => {
                ("robot_collision".into(), format!("{a};{b}"), midpoint)
            }
            EventKind::GoalReached { robot, position } => {
                ("goal_reached".into(), robot.to_string(), position)
            }
            EventKind::Terminated { robot, position } => {
                ("terminated".into(), robot.to_string(), position)
            }
        };
        w.serialize(EventRecord {
            step: e.step,
            time_s: e.step as f64 * dt,
            kind,
            robot_ids,
            x: p.x,
            y: p.y,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: time_s, cumulative_logged_points. An empty timeline yields a
/// header-only file.
pub fn write_timeline_csv<W: Write>(timeline: &[(f64, usize)], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if timeline.is_empty() {
        w.write_record(["time_s", "cumulative_logged_points"])?;
    }
    for &(time_s, cumulative_logged_points) in timeline {
        w.serialize(TimelineRecord {
            time_s,
            cumulative_logged_points,
        })?;
    }
    w.flush()?;
    Ok(())
}
