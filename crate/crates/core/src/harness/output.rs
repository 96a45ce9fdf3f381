//! Per-run output directories.
//!
//! | file | contents |
//! |---|---|
//! | `scenario.toml` | the scenario with the exact starts used, no jitter |
//! | `metrics.csv` | one row of run metrics |
//! | `timeline.csv` | cumulative logged points at every logging event |
//! | `points.csv` | every robot's logged points, in order |
//! | `paths.csv` | every robot's path, one row per step while active |
//! | `trajectory.csv`, `events.csv` | optional per-step and per-event logs |
//! | `tristate.{pgm,csv}`, `density.{pgm,csv}` | the rasterized maps |

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use super::HarnessError;
use crate::engine::log::{write_events_csv, write_timeline_csv, write_trajectory_csv};
use crate::engine::RunOutput;
use crate::geometry::Vec2;
use crate::mapping::{
    classify_grid, export_grid, interpolate_map, read_points_csv, write_points_csv, DensityGrid,
    GridFormat, TriStateGrid,
};

/// Which optional logs [`write_run_dir`] produces.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunFiles {
    pub trajectories: bool,
    pub events: bool,
}

#[derive(Serialize)]
struct RunMetricsRecord {
    sim_time_s: f64,
    steps: u64,
    robot_collisions: u64,
    logged_points: usize,
    logged_points_per_s: f64,
    terminated: bool,
    per_robot_logged: String,
    path_redundancy: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct PathRecord {
    robot_id: usize,
    step: usize,
    x: f64,
    y: f64,
}

fn joined<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes the time series of cumulative logged points as CSV.
pub fn emit_timeline(output: &RunOutput, path: &Path) -> Result<(), HarnessError> {
    let mut out = create(path)?;
    write_timeline_csv(&output.metrics.logged_points_timeline, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_run_dir(
    dir: &Path,
    scenario: &Scenario,
    starts: &[Vec2],
    output: &RunOutput,
    files: RunFiles,
) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join("scenario.toml"),
        scenario.to_toml_with_starts(starts)?,
    )?;

    let m = &output.metrics;
    let mut w = csv::Writer::from_writer(create(&dir.join("metrics.csv"))?);
    w.serialize(RunMetricsRecord {
        sim_time_s: m.sim_time,
        steps: m.steps,
        robot_collisions: m.robot_collision_count,
        logged_points: m.total_logged_points,
        logged_points_per_s: m.logged_points_per_second,
        terminated: m.terminated_all,
        per_robot_logged: joined(&m.per_robot_logged_counts),
        path_redundancy: joined(&m.path_redundancy),
    })?;
    w.flush()?;
    drop(w);

    emit_timeline(output, &dir.join("timeline.csv"))?;

    let mut out = create(&dir.join("points.csv"))?;
    write_points_csv(&output.map.local_sets, &mut out)?;
    out.flush()?;

    let mut w = csv::Writer::from_writer(create(&dir.join("paths.csv"))?);
    if output.trajectories.iter().all(Vec::is_empty) {
        w.write_record(["robot_id", "step", "x", "y"])?;
    }
    for (robot_id, path) in output.trajectories.iter().enumerate() {
        for (step, p) in path.iter().enumerate() {
            w.serialize(PathRecord {
                robot_id,
                step,
                x: p.x,
                y: p.y,
            })?;
        }
    }
    w.flush()?;
    drop(w);

    if files.trajectories {
        let mut out = create(&dir.join("trajectory.csv"))?;
        write_trajectory_csv(&output.trajectory_log, output.dt, &mut out)?;
        out.flush()?;
    }
    if files.events {
        let mut out = create(&dir.join("events.csv"))?;
        write_events_csv(&output.events, output.dt, &mut out)?;
        out.flush()?;
    }

    let density = interpolate_map(
        &output.map.global_set,
        &scenario.world,
        scenario.config.map_cell_size,
        scenario.config.map_kernel_radius,
    );
    write_maps(dir, &output.map.grid, &density)
}

fn write_maps(dir: &Path, tri: &TriStateGrid, density: &DensityGrid) -> Result<(), HarnessError> {
    export_grid(tri, &dir.join("tristate.pgm"), GridFormat::Pgm)?;
    export_grid(tri, &dir.join("tristate.csv"), GridFormat::Csv)?;
    export_grid(density, &dir.join("density.pgm"), GridFormat::Pgm)?;
    export_grid(density, &dir.join("density.csv"), GridFormat::Csv)?;
    Ok(())
}

/// Map-only settings for [`remap_run_dir`]; `None` keeps the run's values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RemapOptions {
    pub cell_size: Option<f64>,
    pub kernel_radius: Option<f64>,
}

/// Rebuilds the tri-state and density grids of a finished run from its
/// `scenario.toml`, `points.csv` and `paths.csv`, and writes them to `out`.
pub fn remap_run_dir(
    run_dir: &Path,
    out: &Path,
    opts: RemapOptions,
) -> Result<(TriStateGrid, DensityGrid), HarnessError> {
    let scenario = Scenario::load(&run_dir.join("scenario.toml"))?;
    let local_sets = read_points_csv(&run_dir.join("points.csv"))?;
    let mut paths: Vec<Vec<Vec2>> = Vec::new();
    let mut r = csv::Reader::from_path(run_dir.join("paths.csv"))?;
    for rec in r.deserialize() {
        let rec: PathRecord = rec?;
        if paths.len() <= rec.robot_id {
            paths.resize(rec.robot_id + 1, Vec::new());
        }
        paths[rec.robot_id].push(Vec2::new(rec.x, rec.y));
    }
    let cfg = &scenario.config;
    let cell = opts.cell_size.unwrap_or(cfg.map_cell_size);
    let kernel = opts.kernel_radius.unwrap_or(cfg.map_kernel_radius);
    if !(cell > 0.0 && kernel > 0.0) {
        return Err(HarnessError::InvalidScenario(
            "cell size and kernel radius must be positive".into(),
        ));
    }
    let global = crate::mapping::aggregate(&local_sets);
    let tri = classify_grid(&paths, &global, &scenario.world, cell, cfg.robot_radius);
    let density = interpolate_map(&global, &scenario.world, cell, kernel);
    fs::create_dir_all(out)?;
    write_maps(out, &tri, &density)?;
    Ok((tri, density))
}
