//! Grid and point-cloud files.
//!
//! Both grid formats write the top row (highest y) first so the PGM shows
//! north up in an image viewer; CSV uses the same row order.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::grid::{CellState, Grid};
use crate::geometry::Vec2;

#[derive(Debug, Error)]
pub enum MappingError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed grid file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFormat {
    /// Binary greyscale P5, 8 bits per cell.
    Pgm,
    Csv,
}

/// How a cell value is written to (and read back from) grid files.
pub trait GridValue: Sized + Clone {
    fn to_byte(&self) -> u8;
    fn to_field(&self) -> String;
    fn parse_field(s: &str) -> Option<Self>;
}

impl GridValue for CellState {
    fn to_byte(&self) -> u8 {
        match self {
            CellState::Obstacle => 255,
            CellState::Free => 128,
            CellState::Unexplored => 0,
        }
    }

    fn to_field(&self) -> String {
        match self {
            CellState::Obstacle => "obstacle",
            CellState::Free => "free",
            CellState::Unexplored => "unexplored",
        }
        .to_string()
    }

    fn parse_field(s: &str) -> Option<Self> {
        match s {
            "obstacle" => Some(CellState::Obstacle),
            "free" => Some(CellState::Free),
            "unexplored" => Some(CellState::Unexplored),
            _ => None,
        }
    }
}

/// Densities are expected in `[0, 1]`.
impl GridValue for f64 {
    fn to_byte(&self) -> u8 {
        (self.clamp(0.0, 1.0) * 255.0).round() as u8
    }

    fn to_field(&self) -> String {
        // Shortest representation that parses back to the same bits.
        format!("{self:?}")
    }

    fn parse_field(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

pub fn grid_to_pgm<T: GridValue>(grid: &Grid<T>) -> Vec<u8> {
    let mut bytes = format!("P5\n{} {}\n255\n", grid.width(), grid.height()).into_bytes();
    for row in (0..grid.height()).rev() {
        bytes.extend(grid.row(row).iter().map(GridValue::to_byte));
    }
    bytes
}

pub fn write_grid_csv<T: GridValue, W: Write>(grid: &Grid<T>, out: W) -> Result<(), MappingError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    for row in (0..grid.height()).rev() {
        w.write_record(grid.row(row).iter().map(GridValue::to_field))?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_grid<T: GridValue>(
    grid: &Grid<T>,
    path: &Path,
    format: GridFormat,
) -> Result<(), MappingError> {
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        GridFormat::Pgm => out.write_all(&grid_to_pgm(grid))?,
        GridFormat::Csv => write_grid_csv(grid, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

/// Reads a grid CSV written by [`export_grid`]. Geometry is not stored in the
/// file, so the caller supplies cell size and origin.
pub fn import_grid_csv<T: GridValue>(
    path: &Path,
    cell_size: f64,
    origin: Vec2,
) -> Result<Grid<T>, MappingError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| {
                T::parse_field(f)
                    .ok_or_else(|| MappingError::Parse(format!("bad cell value {f:?}")))
            })
            .collect::<Result<Vec<T>, _>>()?;
        rows.push(row);
    }
    rows.reverse();
    Grid::from_rows(rows, cell_size, origin)
        .ok_or_else(|| MappingError::Parse("ragged rows".into()))
}

#[derive(Debug, Serialize, Deserialize)]
struct PointRecord {
    robot_id: usize,
    seq: usize,
    x: f64,
    y: f64,
}

/// Columns: robot_id, seq, x, y.
pub fn write_points_csv<W: Write>(local_sets: &[Vec<Vec2>], out: W) -> Result<(), MappingError> {
    let mut w = csv::Writer::from_writer(out);
    if local_sets.iter().all(Vec::is_empty) {
        w.write_record(["robot_id", "seq", "x", "y"])?;
    }
    for (robot_id, set) in local_sets.iter().enumerate() {
        for (seq, p) in set.iter().enumerate() {
            w.serialize(PointRecord {
                robot_id,
                seq,
                x: p.x,
                y: p.y,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_points_csv`]; robots without points still get an empty
/// set up to the highest id seen.
pub fn read_points_csv(path: &Path) -> Result<Vec<Vec<Vec2>>, MappingError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut sets: Vec<Vec<Vec2>> = Vec::new();
    for rec in r.deserialize() {
        let rec: PointRecord = rec?;
        if sets.len() <= rec.robot_id {
            sets.resize(rec.robot_id + 1, Vec::new());
        }
        sets[rec.robot_id].push(Vec2::new(rec.x, rec.y));
    }
    Ok(sets)
}
