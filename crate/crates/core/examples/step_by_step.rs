//! Driving the engine one step at a time and watching its events.

use tactile_explore::engine::{EventKind, SimConfig, Simulation};
use tactile_explore::geometry::{Rect, Shape, Vec2};
use tactile_explore::world::World;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let world = World::new(
        Rect::centered_square(0.5)?,
        vec![Shape::circle(Vec2::new(0.0, 0.0), 0.1)?],
        true,
    )?;
    let cfg = SimConfig {
        points_to_log: 8,
        ..SimConfig::default()
    };
    let mut sim = Simulation::new(world, &[Vec2::new(-0.3, -0.3), Vec2::new(0.3, 0.3)], cfg)?;

    while !sim.all_terminated() {
        for ev in sim.step()? {
            let t = ev.step as f64 * sim.config().dt;
            match ev.kind {
                EventKind::ObstacleContact {
                    robot,
                    point,
                    source,
                } => println!(
                    "{t:7.2} s  robot {robot} logs ({:.3}, {:.3}) on {source:?}",
                    point.x, point.y
                ),
                EventKind::RobotCollision { a, b, .. } => {
                    println!("{t:7.2} s  robots {a} and {b} collide")
                }
                EventKind::Terminated { robot, .. } => println!("{t:7.2} s  robot {robot} is done"),
                EventKind::GoalReached { .. } => {}
            }
        }
    }
    for r in sim.robots() {
        println!(
            "robot {} rests at ({:.3}, {:.3})",
            r.id, r.position.x, r.position.y
        );
    }
    let out = sim.finish();
    println!(
        "{} points in {:.2} s",
        out.metrics.total_logged_points, out.metrics.sim_time
    );
    Ok(())
}
