//! Uniform bucket grid for neighbour queries.

use std::collections::HashMap;

use crate::geometry::Vec2;

#[derive(Debug, Clone)]
pub struct SpatialGrid {
    cell: f64,
    positions: Vec<Vec2>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    min_cell: (i64, i64),
    max_cell: (i64, i64),
}

impl SpatialGrid {
    /// Buckets `positions` into square cells of side `cell`.
    ///
    /// # Panics
    /// If `cell` is not positive and finite.
    pub fn new(positions: &[Vec2], cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "grid cell must be positive, got {cell}");
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut min_cell = (i64::MAX, i64::MAX);
        let mut max_cell = (i64::MIN, i64::MIN);
        for (id, &p) in positions.iter().enumerate() {
            let key = key_of(p, cell);
            min_cell = (min_cell.0.min(key.0), min_cell.1.min(key.1));
            max_cell = (max_cell.0.max(key.0), max_cell.1.max(key.1));
            buckets.entry(key).or_default().push(id);
        }
        SpatialGrid {
            cell,
            positions: positions.to_vec(),
            buckets,
            min_cell,
            max_cell,
        }
    }

    pub fn positions(&self) -> &[Vec2] {
        &self.positions
    }

    /// Ids of every other robot whose centre is strictly closer than
    /// `influence` to robot `id`, in ascending id order.
    pub fn neighbors_of(&self, id: usize, influence: f64) -> Vec<usize> {
        let p = self.positions[id];
        let reach = (influence / self.cell).ceil().max(1.0) as i64;
        let (cx, cy) = key_of(p, self.cell);
        let mut out = Vec::new();
        for gx in cx - reach..=cx + reach {
            for gy in cy - reach..=cy + reach {
                if let Some(ids) = self.buckets.get(&(gx, gy)) {
                    out.extend(
                        ids.iter()
                            .copied()
                            .filter(|&j| j != id && p.distance(self.positions[j]) < influence),
                    );
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Positions matching [`Self::neighbors_of`], in the same order.
    pub fn sense_neighbors(&self, id: usize, influence: f64) -> Vec<Vec2> {
        self.neighbors_of(id, influence)
            .into_iter()
            .map(|j| self.positions[j])
            .collect()
    }

    /// Distance from robot `id` to its closest other robot, `None` when alone.
    pub fn nearest_distance(&self, id: usize) -> Option<f64> {
        let p = self.positions[id];
        let (cx, cy) = key_of(p, self.cell);
        let span = (self.max_cell.0 - self.min_cell.0).max(self.max_cell.1 - self.min_cell.1);
        let mut best = f64::INFINITY;
        for ring in 0..=span.max(0) + 1 {
            // everything outside the rings searched so far lies at least this far away
            if best <= ring as f64 * self.cell - self.cell {
                break;
            }
            for (gx, gy) in ring_cells(cx, cy, ring) {
                if let Some(ids) = self.buckets.get(&(gx, gy)) {
                    for &j in ids {
                        if j != id {
                            best = best.min(p.distance(self.positions[j]));
                        }
                    }
                }
            }
        }
        best.is_finite().then_some(best)
    }
}

fn key_of(p: Vec2, cell: f64) -> (i64, i64) {
    ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
}

fn ring_cells(cx: i64, cy: i64, ring: i64) -> Vec<(i64, i64)> {
    if ring == 0 {
        return vec![(cx, cy)];
    }
    let mut cells = Vec::with_capacity(8 * ring as usize);
    for gx in cx - ring..=cx + ring {
        cells.push((gx, cy - ring));
        cells.push((gx, cy + ring));
    }
    for gy in cy - ring + 1..cy + ring {
        cells.push((cx - ring, gy));
        cells.push((cx + ring, gy));
    }
    cells
}
