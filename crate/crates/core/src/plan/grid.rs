//! Grid path planning: 8-connected A* with the octile heuristic.
//!
//! Straight moves cost 1 cell, diagonals sqrt(2); costs convert to seconds
//! via `cell_size / speed`. Diagonal moves are forbidden when both
//! orthogonal neighbors are walls (no corner cutting).

use ordered_float::OrderedFloat;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::plan::PlanError;
use crate::scalar::{cast, Scalar};
use crate::world::map::Cell;
use crate::world::HomeMap;
use crate::Real;

/// Passability view of a [`HomeMap`].
#[derive(Debug, Clone, PartialEq)]
pub struct NavGrid {
    pub width: usize,
    pub height: usize,
    pub cell_size: Real,
    passable: Vec<bool>,
}

impl NavGrid {
    pub fn from_map(map: &HomeMap) -> NavGrid {
        let mut passable = vec![false; map.width * map.height];
        for y in 0..map.height {
            for x in 0..map.width {
                passable[y * map.width + x] = map.is_free(Cell::new(x, y));
            }
        }
        NavGrid { width: map.width, height: map.height, cell_size: map.cell_size, passable }
    }

    /// Open grid for tests and synthetic instances; `walls` lists blocked cells.
    pub fn open(width: usize, height: usize, walls: &[Cell]) -> NavGrid {
        let mut passable = vec![true; width * height];
        for w in walls {
            passable[w.y * width + w.x] = false;
        }
        NavGrid { width, height, cell_size: 0.1, passable }
    }

    pub fn is_passable(&self, c: Cell) -> bool {
        c.x < self.width && c.y < self.height && self.passable[c.y * self.width + c.x]
    }

    fn index(&self, c: Cell) -> usize {
        c.y * self.width + c.x
    }

    /// 8-connected neighbors with step costs in cell units.
    pub fn neighbors<T: Scalar>(&self, c: Cell) -> Vec<(Cell, T)> {
        const DIRS: [(i64, i64); 8] = [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ];
        let sqrt2 = cast::<T>(std::f64::consts::SQRT_2);
        let mut out = Vec::with_capacity(8);
        for (dx, dy) in DIRS {
            let nx = c.x as i64 + dx;
            let ny = c.y as i64 + dy;
            if nx < 0 || ny < 0 {
                continue;
            }
            let n = Cell::new(nx as usize, ny as usize);
            if !self.is_passable(n) {
                continue;
            }
            if dx != 0 && dy != 0 {
                let side_a = Cell::new(nx as usize, c.y);
                let side_b = Cell::new(c.x, ny as usize);
                // diagonal forbidden when both orthogonal neighbors are walls
                if !self.is_passable(side_a) && !self.is_passable(side_b) {
                    continue;
                }
                out.push((n, sqrt2));
            } else {
                out.push((n, T::one()));
            }
        }
        out
    }
}

/// A cell path with its total cost in cell units.
#[derive(Debug, Clone, PartialEq)]
pub struct Path<T> {
    pub cells: Vec<Cell>,
    pub cost_cells: T,
}

impl<T: Scalar> Path<T> {
    /// Polyline of cell centers, meters.
    pub fn polyline(&self, grid: &NavGrid) -> Vec<crate::geom::Vec2> {
        self.cells
            .iter()
            .map(|c| {
                crate::geom::Vec2::new(
                    (c.x as Real + 0.5) * grid.cell_size,
                    (c.y as Real + 0.5) * grid.cell_size,
                )
            })
            .collect()
    }
}

/// Octile distance: admissible for the 1 / sqrt(2) cost model.
fn octile<T: Scalar>(a: Cell, b: Cell) -> T {
    let dx = (a.x as f64 - b.x as f64).abs();
    let dy = (a.y as f64 - b.y as f64).abs();
    let (lo, hi) = if dx < dy { (dx, dy) } else { (dy, dx) };
    cast::<T>(hi - lo) + cast::<T>(std::f64::consts::SQRT_2) * cast::<T>(lo)
}

/// Cost-optimal path under the octile heuristic, with deterministic
/// tie-breaking by (f, h, cell index).
pub fn astar<T: Scalar>(grid: &NavGrid, start: Cell, goal: Cell) -> Result<Path<T>, PlanError> {
    if !grid.is_passable(start) {
        return Err(PlanError::Blocked { x: start.x, y: start.y });
    }
    if !grid.is_passable(goal) {
        return Err(PlanError::Blocked { x: goal.x, y: goal.y });
    }
    if start == goal {
        return Ok(Path { cells: vec![start], cost_cells: T::zero() });
    }
    let n = grid.width * grid.height;
    let mut g: Vec<T> = vec![T::infinity(); n];
    let mut parent: Vec<usize> = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(OrderedFloat<f64>, OrderedFloat<f64>, usize)>> =
        BinaryHeap::new();

    let si = grid.index(start);
    g[si] = T::zero();
    let h0: T = octile(start, goal);
    heap.push(Reverse((
        OrderedFloat(h0.to_f64().unwrap()),
        OrderedFloat(h0.to_f64().unwrap()),
        si,
    )));

    while let Some(Reverse((_, _, idx))) = heap.pop() {
        if closed[idx] {
            continue;
        }
        closed[idx] = true;
        let cell = Cell::new(idx % grid.width, idx / grid.width);
        if cell == goal {
            let mut cells = vec![cell];
            let mut cur = idx;
            while parent[cur] != usize::MAX {
                cur = parent[cur];
                cells.push(Cell::new(cur % grid.width, cur / grid.width));
            }
            cells.reverse();
            return Ok(Path { cells, cost_cells: g[idx] });
        }
        for (next, step) in grid.neighbors::<T>(cell) {
            let ni = grid.index(next);
            if closed[ni] {
                continue;
            }
            let tentative = g[idx] + step;
            if tentative < g[ni] {
                g[ni] = tentative;
                parent[ni] = idx;
                let h: T = octile(next, goal);
                let f = tentative + h;
                heap.push(Reverse((
                    OrderedFloat(f.to_f64().unwrap()),
                    OrderedFloat(h.to_f64().unwrap()),
                    ni,
                )));
            }
        }
    }
    Err(PlanError::NoPath)
}

/// Convert a path cost to travel seconds: `cost_in_cells * cell_size / speed`.
pub fn travel_time<T: Scalar>(path: &Path<T>, speed: Real, cell_size: Real) -> T {
    debug_assert!(speed > 0.0);
    path.cost_cells * cast::<T>(cell_size) / cast::<T>(speed)
}
