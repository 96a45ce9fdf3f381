//! Writing a scenario by hand, validating it, and running it.

use tactile_explore::engine::run;
use tactile_explore::harness::{HarnessError, Scenario};

const CORRIDOR: &str = r#"
format_version = 1
name = "corridor"

[world]
bounds = { min = [-1.0, -0.3], max = [1.0, 0.3] }
obstacles = [
    { kind = "rect", min = [-0.4, -0.3], max = [-0.3, 0.05] },
    { kind = "rect", min = [0.3, -0.05], max = [0.4, 0.3] },
    { kind = "polygon", vertices = [[-0.05, -0.3], [0.05, -0.3], [0.0, -0.15]] },
]

[robots]
starts = [[-0.8, 0.0], [0.8, 0.0]]
count = 4
jitter = 0.02

[config]
points_to_log = 25
beta = 0.9
gamma = 0.1
r_comm = 0.8
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = Scenario::parse(CORRIDOR)?;
    for seed in 1..=3 {
        let starts = scenario.starts_for_seed(seed)?;
        let m = run(scenario.world.clone(), &starts, scenario.config.clone())?.metrics;
        println!(
            "seed {seed}: {} points in {:.1} s, {} collisions, terminated {}",
            m.total_logged_points, m.sim_time, m.robot_collision_count, m.terminated_all
        );
    }

    // Two robots on top of each other is rejected at load time.
    let bad = CORRIDOR.replace("[0.8, 0.0]]", "[-0.79, 0.0]]");
    match Scenario::parse(&bad) {
        Err(HarnessError::InvalidScenario(msg)) => println!("rejected: {msg}"),
        other => println!("unexpected: {other:?}"),
    }
    // A typo in a config key is a parse error with a line number.
    let typo = CORRIDOR.replace("r_comm", "rcomm");
    if let Err(e) = Scenario::parse(&typo) {
        println!("{e}");
    }
    Ok(())
}
