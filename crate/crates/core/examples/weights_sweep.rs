//! The nine (beta, gamma) pairs from {0.1, 0.5, 0.9}, three robots.

use tactile_explore::harness::{run_sweep, Scenario, SweepAxis, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: u64 = std::env::args().nth(1).map_or(Ok(10), |s| s.parse())?;
    let levels = [0.1, 0.5, 0.9];
    let pairs = levels
        .iter()
        .flat_map(|&b| levels.iter().map(move |&g| (b, g)))
        .collect();
    let spec = SweepSpec::new(
        Scenario::paper_arena()?,
        SweepAxis::BetaGamma(pairs),
        (1..=n).collect(),
    );
    let results = run_sweep(&spec)?;

    println!("beta/gamma  terminated  time_s  collisions  points  points/s");
    for a in &results.summary {
        let mean = |s: Option<tactile_explore::harness::Stat>| s.map_or(f64::NAN, |s| s.mean);
        println!(
            "{:>10}  {:>5}/{:<4}  {:>6.0}  {:>10.2}  {:>6.1}  {:>8.3}",
            a.axis_value.to_string(),
            a.terminated,
            a.runs,
            mean(a.sim_time_s),
            mean(a.robot_collisions),
            mean(a.logged_points),
            mean(a.logged_points_per_s)
        );
    }
    Ok(())
}
