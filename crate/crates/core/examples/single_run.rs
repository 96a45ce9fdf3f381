//! One full run on the bundled arena, written out as a run directory.
//!
//! ```text
//! cargo run --release --example single_run -- [seed] [out-dir]
//! ```

use std::path::PathBuf;

use tactile_explore::engine::run;
use tactile_explore::harness::{write_run_dir, RunFiles, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(Ok(2), |s| s.parse())?;
    let out: PathBuf = args
        .next()
        .map_or_else(|| format!("runs/example_seed{seed}").into(), Into::into);

    let scenario = Scenario::paper_arena()?;
    let starts = scenario.starts_for_seed(seed)?;
    let output = run(scenario.world.clone(), &starts, scenario.config.clone())?;
    let m = &output.metrics;

    println!("starts: {starts:?}");
    println!(
        "{:.2} s, {} steps, {} points, {:.3} points/s, {} robot collisions, terminated: {}",
        m.sim_time,
        m.steps,
        m.total_logged_points,
        m.logged_points_per_second,
        m.robot_collision_count,
        m.terminated_all
    );
    println!("per robot: {:?}", m.per_robot_logged_counts);
    println!("revisited cells per robot: {:?}", m.path_redundancy);

    let files = RunFiles {
        trajectories: true,
        events: true,
    };
    write_run_dir(&out, &scenario, &starts, &output, files)?;
    println!("wrote {}", out.display());
    Ok(())
}
