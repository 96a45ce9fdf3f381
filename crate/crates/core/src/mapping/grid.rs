use crate::geometry::{Rect, Vec2};

/// Tri-state classification of a map cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CellState {
    #[default]
    Unexplored,
    Free,
    Obstacle,
}

/// Row-major raster over a rectangle. Row 0 is the lowest y, column 0 the
/// lowest x.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    cell_size: f64,
    origin: Vec2,
    cells: Vec<T>,
}

pub type TriStateGrid = Grid<CellState>;
pub type DensityGrid = Grid<f64>;

impl<T: Clone> Grid<T> {
    pub fn new(width: usize, height: usize, cell_size: f64, origin: Vec2, fill: T) -> Self {
        Grid {
            width,
            height,
            cell_size,
            origin,
            cells: vec![fill; width * height],
        }
    }

    /// Smallest grid anchored at `bounds.min()` whose cells cover `bounds`.
    pub fn covering(bounds: &Rect, cell_size: f64, fill: T) -> Self {
        // The epsilon keeps 1.5 / 0.01 at 150 cells rather than 151.
        let count = |extent: f64| (((extent / cell_size) - 1e-9).ceil() as usize).max(1);
        Grid::new(
            count(bounds.width()),
            count(bounds.height()),
            cell_size,
            bounds.min(),
            fill,
        )
    }

    /// Builds a grid from rows listed bottom (row 0) first.
    pub fn from_rows(rows: Vec<Vec<T>>, cell_size: f64, origin: Vec2) -> Option<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return None;
        }
        Some(Grid {
            width,
            height,
            cell_size,
            origin,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn set(&mut self, col: usize, row: usize, v: T) {
        let w = self.width;
        self.cells[row * w + col] = v;
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            cell_size: self.cell_size,
            origin: self.origin,
            cells: self.cells.iter().map(f).collect(),
        }
    }
}

impl<T> Grid<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn origin(&self) -> Vec2 {
        self.origin
    }

    pub fn get(&self, col: usize, row: usize) -> &T {
        &self.cells[row * self.width + col]
    }

    pub fn get_mut(&mut self, col: usize, row: usize) -> &mut T {
        &mut self.cells[row * self.width + col]
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.cells[row * self.width..(row + 1) * self.width]
    }

    /// `(col, row)` of the cell containing `p`. Points on the far edge belong
    /// to the last cell; points outside the grid give `None`.
    pub fn cell_of(&self, p: Vec2) -> Option<(usize, usize)> {
        let fx = (p.x - self.origin.x) / self.cell_size;
        let fy = (p.y - self.origin.y) / self.cell_size;
        let tol = 1e-9;
        if fx < -tol || fy < -tol || fx > self.width as f64 + tol || fy > self.height as f64 + tol {
            return None;
        }
        let col = (fx.floor().max(0.0) as usize).min(self.width - 1);
        let row = (fy.floor().max(0.0) as usize).min(self.height - 1);
        Some((col, row))
    }

    pub fn cell_center(&self, col: usize, row: usize) -> Vec2 {
        Vec2::new(
            self.origin.x + (col as f64 + 0.5) * self.cell_size,
            self.origin.y + (row as f64 + 0.5) * self.cell_size,
        )
    }

    /// `(min, max)` corners of a cell.
    pub fn cell_bounds(&self, col: usize, row: usize) -> (Vec2, Vec2) {
        let min = Vec2::new(
            self.origin.x + col as f64 * self.cell_size,
            self.origin.y + row as f64 * self.cell_size,
        );
        (min, min + Vec2::new(self.cell_size, self.cell_size))
    }

    /// Inclusive `(col, row)` ranges of cells overlapping the square of half
    /// side `reach` around `p`, clipped to the grid.
    pub fn cells_near(&self, p: Vec2, reach: f64) -> Option<((usize, usize), (usize, usize))> {
        let lo_x = ((p.x - reach - self.origin.x) / self.cell_size).floor();
        let hi_x = ((p.x + reach - self.origin.x) / self.cell_size).floor();
        let lo_y = ((p.y - reach - self.origin.y) / self.cell_size).floor();
        let hi_y = ((p.y + reach - self.origin.y) / self.cell_size).floor();
        if hi_x < 0.0 || hi_y < 0.0 || lo_x >= self.width as f64 || lo_y >= self.height as f64 {
            return None;
        }
        let clip = |v: f64, n: usize| (v.max(0.0) as usize).min(n - 1);
        Some((
            (clip(lo_x, self.width), clip(hi_x, self.width)),
            (clip(lo_y, self.height), clip(hi_y, self.height)),
        ))
    }
}

impl TriStateGrid {
    /// Fraction of cells that are not `Unexplored`.
    pub fn coverage_fraction(&self) -> f64 {
        let known = self
            .cells
            .iter()
            .filter(|c| **c != CellState::Unexplored)
            .count();
        known as f64 / self.cells.len() as f64
    }

    pub fn count(&self, state: CellState) -> usize {
        self.cells.iter().filter(|c| **c == state).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_paper_arena() {
        let g = Grid::covering(&Rect::centered_square(0.75).unwrap(), 0.01, 0u8);
        assert_eq!((g.width(), g.height()), (150, 150));
        assert_eq!(g.cell_of(Vec2::new(-0.75, -0.75)), Some((0, 0)));
        assert_eq!(g.cell_of(Vec2::new(0.75, 0.75)), Some((149, 149)));
        assert_eq!(g.cell_of(Vec2::new(0.8, 0.0)), None);
        assert_eq!(g.cell_of(Vec2::new(0.0, 0.0)), Some((75, 75)));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Grid::from_rows(vec![vec![1, 2], vec![3]], 1.0, Vec2::ZERO).is_none());
    }
}
