//! Robot collisions against communication range with seven robots.
//!
//! ```text
//! cargo run --release --example comm_range_sweep -- [seeds] [out-dir]
//! ```

use tactile_explore::harness::{run_sweep, write_sweep, Scenario, SweepAxis, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(Ok(100), |s| s.parse())?;
    let scenario = Scenario::paper_arena()?.with_team_size(7);
    let axis = SweepAxis::CommRange(vec![0.4, 0.5, 0.6, 0.7, 0.8]);
    let spec = SweepSpec::new(scenario, axis, (1..=n).collect()).with_override("points_to_log", 30);

    let results = run_sweep(&spec)?;
    println!("r_comm  runs  collisions (mean ± se)  max  points/s");
    for a in &results.summary {
        let (Some(c), Some(rate)) = (a.robot_collisions, a.logged_points_per_s) else {
            println!(
                "{:>6}  {:>4}  all runs failed",
                a.axis_value.to_string(),
                a.runs
            );
            continue;
        };
        println!(
            "{:>6}  {:>4}  {:>10.2} ± {:<10.2} {:>4}  {:.3}",
            a.axis_value.to_string(),
            a.runs,
            c.mean,
            c.std_err,
            c.max,
            rate.mean
        );
    }
    if let Some(dir) = args.next() {
        write_sweep(&results, dir.as_ref())?;
        println!("wrote {dir}");
    }
    Ok(())
}
