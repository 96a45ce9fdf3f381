use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tactile_explore::engine::run_with;
use tactile_explore::harness::{
    remap_run_dir, run_sweep, write_run_dir, write_sweep, HarnessError, RemapOptions, RunFiles,
    Scenario, SweepSpec,
};

#[derive(Parser)]
#[command(version, about = "Multi-robot tactile exploration simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario (a file path, or `paper_arena`) and write a run directory.
    Run {
        scenario: String,
        /// Seed for start placement; defaults to the scenario's `config.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; defaults to `runs/<name>_seed<seed>`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-step `trajectory.csv`.
        #[arg(long)]
        trajectories: bool,
        /// Also write `events.csv`.
        #[arg(long)]
        events: bool,
    },
    /// Run a sweep file and write metrics, summary and timelines.
    Sweep {
        spec: PathBuf,
        /// Replace the sweep's seed list; may be repeated.
        #[arg(long)]
        seed: Vec<u64>,
        /// Output directory; defaults to the sweep's `out`, then `sweep_out`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-rasterize a finished run directory.
    Map {
        run_dir: PathBuf,
        /// Defaults to the run directory itself.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cell_size: Option<f64>,
        #[arg(long)]
        kernel_radius: Option<f64>,
    },
    /// Check that a scenario parses and its starts are valid.
    Validate {
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                HarnessError::Parse { .. } | HarnessError::InvalidScenario(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn execute(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Run {
            scenario,
            seed,
            out,
            trajectories,
            events,
        } => {
            let mut s = Scenario::resolve(&scenario)?;
            let seed = seed.unwrap_or(s.config.seed);
            s.config.seed = seed;
            let starts = s.starts_for_seed(seed)?;
            let output = run_with(s.world.clone(), &starts, s.config.clone(), trajectories)?;
            let dir =
                out.unwrap_or_else(|| Path::new("runs").join(format!("{}_seed{seed}", s.name)));
            write_run_dir(
                &dir,
                &s,
                &starts,
                &output,
                RunFiles {
                    trajectories,
                    events,
                },
            )?;
            let m = &output.metrics;
            println!(
                "{}: {} robots, {:.2} s, {} points ({:.3}/s), {} robot collisions, terminated: {}",
                s.name,
                starts.len(),
                m.sim_time,
                m.total_logged_points,
                m.logged_points_per_second,
                m.robot_collision_count,
                m.terminated_all
            );
            println!("wrote {}", dir.display());
        }
        Command::Sweep { spec, seed, out } => {
            let mut spec = SweepSpec::load(&spec)?;
            if !seed.is_empty() {
                spec.seeds = seed;
            }
            let dir = out
                .or_else(|| spec.out_dir.clone())
                .unwrap_or_else(|| "sweep_out".into());
            let results = run_sweep(&spec)?;
            write_sweep(&results, &dir)?;
            println!(
                "{:>10} {:>5} {:>6} {:>10} {:>10} {:>8}",
                results.axis, "runs", "term", "time_s", "collisions", "points"
            );
            for a in &results.summary {
                let mean =
                    |s: Option<tactile_explore::harness::Stat>| s.map_or(f64::NAN, |s| s.mean);
                println!(
                    "{:>10} {:>5} {:>6} {:>10.1} {:>10.2} {:>8.1}",
                    a.axis_value.to_string(),
                    a.runs,
                    a.terminated,
                    mean(a.sim_time_s),
                    mean(a.robot_collisions),
                    mean(a.logged_points)
                );
            }
            let failed: usize = results.summary.iter().map(|a| a.failed).sum();
            if failed > 0 {
                eprintln!("{failed} runs failed, see metrics.csv");
            }
            println!("wrote {}", dir.display());
        }
        Command::Map {
            run_dir,
            out,
            cell_size,
            kernel_radius,
        } => {
            let out = out.unwrap_or_else(|| run_dir.clone());
            let (tri, density) = remap_run_dir(
                &run_dir,
                &out,
                RemapOptions {
                    cell_size,
                    kernel_radius,
                },
            )?;
            println!(
                "{}x{} cells, coverage {:.3}, peak density {:.3}",
                tri.width(),
                tri.height(),
                tri.coverage_fraction(),
                density.cells().iter().cloned().fold(0.0, f64::max)
            );
            println!("wrote {}", out.display());
        }
        Command::Validate { scenario, seed } => {
            let s = Scenario::resolve(&scenario)?;
            let starts = s.starts_for_seed(seed.unwrap_or(s.config.seed))?;
            println!(
                "{}: ok ({} obstacles, {} robots)",
                s.name,
                s.world.obstacles().len(),
                starts.len()
            );
        }
    }
    Ok(())
}
