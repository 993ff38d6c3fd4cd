//! Hausdorff distances between finite point sets, plus the uniform spatial
//! hash used everywhere exact nearest-neighbor queries are needed.

use super::{Point2, Rect};
use crate::error::{Error, Result};

/// Uniform grid over a fixed point set supporting exact nearest-neighbor and
/// radius queries. Pruning is purely an optimization: results are identical to
/// a full scan.
#[derive(Debug, Clone)]
pub struct PointGrid {
    points: Vec<Point2>,
    origin: Point2,
    cell: f64,
    nx: i64,
    ny: i64,
    cells: Vec<Vec<u32>>,
}

impl PointGrid {
    /// Grid with automatic cell size (about one point per cell).
    pub fn new(points: Vec<Point2>) -> Self {
        let bbox = Rect::bounding(&points).unwrap_or(Rect::new(Point2::default(), Point2::default()));
        let n = points.len().max(1) as f64;
        let cell = (bbox.area() / n).sqrt().max(bbox.diameter() / (4.0 * n));
        let cell = if cell > 0.0 && cell.is_finite() { cell } else { 1.0 };
        Self::with_cell(points, cell)
    }

    pub fn with_cell(points: Vec<Point2>, cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite());
        let bbox = Rect::bounding(&points).unwrap_or(Rect::new(Point2::default(), Point2::default()));
        // Cell size is a performance knob only; clamp the allocation so tiny
        // cells over a wide or degenerate box cannot blow up memory.
        let max_cells = (8 * points.len() + 4096) as f64;
        let mut cell = cell
            .max(bbox.width() / max_cells)
            .max(bbox.height() / max_cells);
        let needed = ((bbox.width() / cell + 1.0) * (bbox.height() / cell + 1.0)).max(1.0);
        if needed > max_cells {
            cell *= (needed / max_cells).sqrt();
        }
        let nx = ((bbox.width() / cell).floor() as i64).saturating_add(1).max(1);
        let ny = ((bbox.height() / cell).floor() as i64).saturating_add(1).max(1);
        let mut cells = vec![Vec::new(); (nx * ny) as usize];
        let origin = bbox.min;
        for (i, p) in points.iter().enumerate() {
            let (ix, iy) = cell_of(*p, origin, cell, nx, ny);
            cells[(iy * nx + ix) as usize].push(i as u32);
        }
        Self {
            points,
            origin,
            cell,
            nx,
            ny,
            cells,
        }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Exact nearest point to `p`, optionally skipping one index (used for
    /// nearest-neighbor distances within the same set).
    pub fn nearest_excluding(&self, p: Point2, skip: Option<usize>) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        self.ring_search(p, 0.0, f64::INFINITY, |i, grid| {
            if Some(i as usize) == skip {
                return best.map_or(f64::INFINITY, |(_, d)| d);
            }
            let d = p.dist(grid.points[i as usize]);
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i as usize, d));
            }
            best.map_or(f64::INFINITY, |(_, d)| d)
        });
        best
    }

    pub fn nearest_dist(&self, p: Point2) -> Option<f64> {
        self.nearest_excluding(p, None).map(|(_, d)| d)
    }

    /// Visit every index whose point lies within `radius` of `p`.
    pub fn for_each_within(&self, p: Point2, radius: f64, mut f: impl FnMut(usize, f64)) {
        let lo_x = (((p.x - radius - self.origin.x) / self.cell).floor() as i64).clamp(0, self.nx - 1);
        let hi_x = (((p.x + radius - self.origin.x) / self.cell).floor() as i64).clamp(0, self.nx - 1);
        let lo_y = (((p.y - radius - self.origin.y) / self.cell).floor() as i64).clamp(0, self.ny - 1);
        let hi_y = (((p.y + radius - self.origin.y) / self.cell).floor() as i64).clamp(0, self.ny - 1);
        for iy in lo_y..=hi_y {
            for ix in lo_x..=hi_x {
                for &i in &self.cells[(iy * self.nx + ix) as usize] {
                    let d = p.dist(self.points[i as usize]);
                    if d <= radius {
                        f(i as usize, d);
                    }
                }
            }
        }
    }

    /// Scan candidates in expanding rings around `p`. `visit` returns the
    /// current search bound; scanning stops once no remaining cell can hold a
    /// point at distance < bound + slack (`slack` widens the net when the
    /// indexed points stand in for geometry extending up to `slack` away,
    /// e.g. arc centers standing in for arcs).
    pub fn ring_search(
        &self,
        p: Point2,
        slack: f64,
        init_bound: f64,
        mut visit: impl FnMut(u32, &Self) -> f64,
    ) {
        if self.points.is_empty() {
            return;
        }
        let (cx, cy) = cell_of(p, self.origin, self.cell, self.nx, self.ny);
        let clamp_d = self.rect_distance(p, cx, cy);
        let k_max = (cx.max(self.nx - 1 - cx)).max(cy.max(self.ny - 1 - cy));
        let mut bound = init_bound;
        for k in 0..=k_max {
            let ring_lb = ((k - 1).max(0) as f64 * self.cell).max(clamp_d);
            if ring_lb - slack >= bound {
                break;
            }
            self.for_ring_cells(cx, cy, k, |ix, iy, grid| {
                if grid.rect_distance(p, ix, iy) - slack >= bound {
                    return;
                }
                for &i in &grid.cells[(iy * grid.nx + ix) as usize] {
                    bound = visit(i, grid).min(bound);
                }
            });
        }
    }

    fn for_ring_cells(&self, cx: i64, cy: i64, k: i64, mut f: impl FnMut(i64, i64, &Self)) {
        if k == 0 {
            f(cx, cy, self);
            return;
        }
        for ix in (cx - k).max(0)..=(cx + k).min(self.nx - 1) {
            for &iy in &[cy - k, cy + k] {
                if iy >= 0 && iy < self.ny {
                    f(ix, iy, self);
                }
            }
        }
        for iy in (cy - k + 1).max(0)..=(cy + k - 1).min(self.ny - 1) {
            for &ix in &[cx - k, cx + k] {
                if ix >= 0 && ix < self.nx {
                    f(ix, iy, self);
                }
            }
        }
    }

    /// Distance from `p` to the closed rectangle of cell `(ix, iy)`.
    fn rect_distance(&self, p: Point2, ix: i64, iy: i64) -> f64 {
        let x0 = self.origin.x + ix as f64 * self.cell;
        let y0 = self.origin.y + iy as f64 * self.cell;
        let dx = (x0 - p.x).max(p.x - (x0 + self.cell)).max(0.0);
        let dy = (y0 - p.y).max(p.y - (y0 + self.cell)).max(0.0);
        dx.hypot(dy)
    }
}

fn cell_of(p: Point2, origin: Point2, cell: f64, nx: i64, ny: i64) -> (i64, i64) {
    let ix = (((p.x - origin.x) / cell).floor() as i64).clamp(0, nx - 1);
    let iy = (((p.y - origin.y) / cell).floor() as i64).clamp(0, ny - 1);
    (ix, iy)
}

/// Directed Hausdorff distance `sup_{a in A} inf_{b in B} |a-b|` with the
/// index of the witness in `A`.
pub fn directed_hausdorff(from: &[Point2], to: &[Point2]) -> Result<(f64, usize)> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::EmptySet);
    }
    let grid = PointGrid::new(to.to_vec());
    let mut worst = (f64::NEG_INFINITY, 0usize);
    for (i, p) in from.iter().enumerate() {
        let d = grid.nearest_dist(*p).expect("nonempty");
        if d > worst.0 {
            worst = (d, i);
        }
    }
    Ok(worst)
}

/// Symmetric Hausdorff distance between two finite point sets: the max of the
/// two directed sup-inf distances.
pub fn hausdorff_distance(a: &[Point2], b: &[Point2]) -> Result<f64> {
    let (d_ab, _) = directed_hausdorff(a, b)?;
    let (d_ba, _) = directed_hausdorff(b, a)?;
    Ok(d_ab.max(d_ba))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::TAU;
    use proptest::prelude::*;

    /// Brute-force oracle over all pairs.
    fn hausdorff_double_loop(a: &[Point2], b: &[Point2]) -> f64 {
        let dir = |from: &[Point2], to: &[Point2]| {
            from.iter()
                .map(|p| to.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min))
                .fold(f64::NEG_INFINITY, f64::max)
        };
        dir(a, b).max(dir(b, a))
    }

    #[test]
    fn single_pair_distance() {
        let a = vec![Point2::new(0.0, 0.0)];
        let b = vec![Point2::new(3.0, 4.0)];
        assert_eq!(hausdorff_distance(&a, &b).expect("ok"), 5.0);
    }

    #[test]
    fn identical_sets_are_at_zero() {
        let a: Vec<Point2> = (0..50)
            .map(|k| Point2::from_angle(k as f64 / 50.0 * TAU))
            .collect();
        assert_eq!(hausdorff_distance(&a, &a).expect("ok"), 0.0);
    }

    #[test]
    fn empty_input_errors() {
        assert!(matches!(
            hausdorff_distance(&[], &[Point2::default()]),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn polygon_samples_match_double_loop_oracle() {
        let a: Vec<Point2> = (0..100)
            .map(|k| Point2::from_angle(k as f64 / 100.0 * TAU))
            .collect();
        let b: Vec<Point2> = (0..200)
            .map(|k| Point2::from_angle((k as f64 + 0.5) / 200.0 * TAU))
            .collect();
        let fast = hausdorff_distance(&a, &b).expect("ok");
        let slow = hausdorff_double_loop(&a, &b);
        assert_eq!(fast, slow);
    }

    #[test]
    fn grid_nearest_is_exact_on_random_sets() {
        let mut state = 42u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let pts: Vec<Point2> = (0..300)
            .map(|_| Point2::new(next() * 2.0 - 1.0, next() * 2.0 - 1.0))
            .collect();
        let grid = PointGrid::new(pts.clone());
        for _ in 0..200 {
            let q = Point2::new(next() * 4.0 - 2.0, next() * 4.0 - 2.0);
            let exact = pts
                .iter()
                .map(|p| p.dist(q))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(grid.nearest_dist(q).expect("nonempty"), exact);
        }
    }

    proptest! {
        #[test]
        fn triangle_inequality_on_random_point_sets(
            a in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..20),
            b in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..20),
            c in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..20),
        ) {
            let to_pts = |v: &Vec<(f64, f64)>| v.iter().map(|&(x, y)| Point2::new(x, y)).collect::<Vec<_>>();
            let (a, b, c) = (to_pts(&a), to_pts(&b), to_pts(&c));
            let ab = hausdorff_distance(&a, &b).expect("ok");
            let bc = hausdorff_distance(&b, &c).expect("ok");
            let ac = hausdorff_distance(&a, &c).expect("ok");
            prop_assert!(ac <= ab + bc + 1e-12);
        }
    }
}
