//! Building maps from a run: tri-state grid, density grid, PGM and CSV.

use tactile_explore::engine::run;
use tactile_explore::harness::Scenario;
use tactile_explore::mapping::{export_grid, interpolate_map, CellState, GridFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| "map_out".into());
    let scenario = Scenario::paper_arena()?;
    let starts = scenario.starts_for_seed(3)?;
    let output = run(scenario.world.clone(), &starts, scenario.config.clone())?;

    let grid = &output.map.grid;
    println!(
        "{}x{} cells: {} obstacle, {} free, {} unexplored ({:.1}% seen)",
        grid.width(),
        grid.height(),
        grid.count(CellState::Obstacle),
        grid.count(CellState::Free),
        grid.count(CellState::Unexplored),
        100.0 * grid.coverage_fraction()
    );

    // A coarser density map than the run's own, to compare against.
    let coarse = interpolate_map(&output.map.global_set, &scenario.world, 0.025, 0.075);
    std::fs::create_dir_all(&out_dir)?;
    let dir = std::path::Path::new(&out_dir);
    export_grid(grid, &dir.join("tristate.pgm"), GridFormat::Pgm)?;
    export_grid(&coarse, &dir.join("density_coarse.pgm"), GridFormat::Pgm)?;
    export_grid(&coarse, &dir.join("density_coarse.csv"), GridFormat::Csv)?;

    // Coarse text preview, top row first like the PGM.
    let shades = [' ', '.', ':', '+', '#'];
    for row in (0..coarse.height()).rev().step_by(2) {
        let line: String = coarse
            .row(row)
            .iter()
            .map(|&v| shades[((v * 4.0).round() as usize).min(4)])
            .collect();
        println!("|{line}|");
    }
    println!("wrote {}", dir.display());
    Ok(())
}
