//! Boundary of the ball union as an exact arrangement of circular arcs,
//! stitched into closed loops with a cumulative-length parameterization.

use super::BallUnion;
use crate::error::{Error, Result};
use crate::geom::{
    circle_cover_by_ball, point_to_arc_distance, subtract_angular_cover, AngularIntervalSet, Arc,
    Point2, PointGrid, Polyline,
};
#[cfg(test)]
use crate::geom::TAU;
use serde::{Deserialize, Serialize};

/// Absolute tolerance for matching arc endpoints when stitching loops.
const STITCH_TOL: f64 = 1e-9;

/// One boundary arc with its source ball.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryArc {
    pub arc: Arc,
    /// Index of the ball whose circle carries this arc (`u32::MAX` for
    /// synthetic arrangements).
    pub ball: u32,
}

/// A closed chain of arcs with cumulative-length parameterization.
#[derive(Debug, Clone)]
pub struct BoundaryLoop {
    pub arc_indices: Vec<usize>,
    /// Cumulative arclength; `cum[k]` is the start of arc `k` in the loop,
    /// with a final entry equal to the total length.
    pub cum: Vec<f64>,
    pub length: f64,
    /// Ball-union component this loop belongs to.
    pub component: u32,
    /// Total signed turning (sum of arc spans plus junction turns); +2pi for
    /// outer boundaries, -2pi for holes.
    pub turning: f64,
}

/// The full boundary arrangement.
#[derive(Debug, Clone)]
pub struct BoundaryArrangement {
    arcs: Vec<BoundaryArc>,
    loops: Vec<BoundaryLoop>,
    index: ArcIndex,
}

#[derive(Debug, Clone)]
struct ArcIndex {
    /// Grid over arc centers; entry i corresponds to arcs[i].
    centers: PointGrid,
    r_max: f64,
}

impl BoundaryArrangement {
    pub fn arcs(&self) -> &[BoundaryArc] {
        &self.arcs
    }

    pub fn loops(&self) -> &[BoundaryLoop] {
        &self.loops
    }

    pub fn total_length(&self) -> f64 {
        self.loops.iter().map(|l| l.length).sum()
    }

    /// Exact distance from `y` to the arrangement (minimum over all arcs).
    pub fn distance(&self, y: Point2) -> f64 {
        let mut best = f64::INFINITY;
        self.index.centers.ring_search(y, self.index.r_max, f64::INFINITY, |i, grid| {
            let arc = &self.arcs[i as usize].arc;
            let dc = y.dist(grid.points()[i as usize]);
            // Distance to the full circle lower-bounds distance to the arc.
            if (dc - arc.radius).abs() < best {
                best = best.min(point_to_arc_distance(y, arc));
            }
            best
        });
        best
    }

    /// Point on a loop at arclength `s` from its start (wraps around).
    pub fn loop_point(&self, loop_idx: usize, s: f64) -> Point2 {
        let lp = &self.loops[loop_idx];
        let s = s.rem_euclid(lp.length);
        let k = match lp
            .cum
            .binary_search_by(|c| c.partial_cmp(&s).expect("finite"))
        {
            Ok(k) => k.min(lp.arc_indices.len() - 1),
            Err(k) => k - 1,
        };
        let arc = &self.arcs[lp.arc_indices[k]].arc;
        arc.point_at_arclength(s - lp.cum[k])
    }

    /// Sample a loop at spacing at most `spacing`.
    pub fn sample_loop(&self, loop_idx: usize, spacing: f64) -> Vec<Point2> {
        let lp = &self.loops[loop_idx];
        let count = (lp.length / spacing).ceil().max(8.0) as usize;
        (0..count)
            .map(|k| self.loop_point(loop_idx, lp.length * k as f64 / count as f64))
            .collect()
    }

    /// Sample every loop at spacing at most `spacing`.
    pub fn sample_all(&self, spacing: f64) -> Vec<Point2> {
        (0..self.loops.len())
            .flat_map(|i| self.sample_loop(i, spacing))
            .collect()
    }

    /// Loop as a polyline (for winding queries).
    pub fn loop_polyline(&self, loop_idx: usize, spacing: f64) -> Polyline {
        Polyline::new(self.sample_loop(loop_idx, spacing), true).expect("loops have >= 8 samples")
    }

    /// Arcs of the loop restricted to the parameter interval `[s0, s0+len)`
    /// (wrapping), as standalone trimmed arcs.
    pub fn loop_subchain(&self, loop_idx: usize, s0: f64, len: f64) -> Vec<Arc> {
        assert!(len > 0.0);
        let lp = &self.loops[loop_idx];
        let len = len.min(lp.length);
        let mut out = Vec::new();
        let mut s = s0.rem_euclid(lp.length);
        let mut remaining = len;
        while remaining > 1e-12 * lp.length.max(1.0) {
            let k = match lp
                .cum
                .binary_search_by(|c| c.partial_cmp(&s).expect("finite"))
            {
                Ok(k) => k.min(lp.arc_indices.len() - 1),
                Err(k) => k - 1,
            };
            let arc = &self.arcs[lp.arc_indices[k]].arc;
            let into = s - lp.cum[k];
            let available = (lp.cum[k + 1] - s).max(0.0);
            let take = available.min(remaining);
            if take > STITCH_TOL {
                let start = arc.start_angle + into / arc.radius;
                out.push(Arc::new(arc.center, arc.radius, start, take / arc.radius));
            }
            remaining -= take.max(1e-15);
            s = (s + take.max(1e-15)).rem_euclid(lp.length);
        }
        out
    }

    /// SVG path data (`d` attribute) for one loop.
    pub fn loop_svg_path(&self, loop_idx: usize) -> String {
        use std::fmt::Write;
        let lp = &self.loops[loop_idx];
        let mut d = String::new();
        for (pos, &ai) in lp.arc_indices.iter().enumerate() {
            let arc = &self.arcs[ai].arc;
            if pos == 0 {
                let p = arc.start_point();
                write!(d, "M {} {}", p.x, p.y).expect("string write");
            }
            if arc.full_circle {
                let mid = arc.point_at_angle(arc.start_angle + std::f64::consts::PI);
                let end = arc.start_point();
                write!(
                    d,
                    " A {r} {r} 0 0 1 {mx} {my} A {r} {r} 0 0 1 {ex} {ey}",
                    r = arc.radius,
                    mx = mid.x,
                    my = mid.y,
                    ex = end.x,
                    ey = end.y
                )
                .expect("string write");
            } else {
                let large = if arc.span() > std::f64::consts::PI { 1 } else { 0 };
                let e = arc.end_point();
                write!(
                    d,
                    " A {r} {r} 0 {large} 1 {ex} {ey}",
                    r = arc.radius,
                    ex = e.x,
                    ey = e.y
                )
                .expect("string write");
            }
        }
        d.push_str(" Z");
        d
    }

    /// JSON export: arcs as center/radius/angles, loops as arc index lists.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "arcs": self.arcs,
            "loops": self.loops.iter().map(|l| serde_json::json!({
                "arcs": l.arc_indices,
                "length": l.length,
                "component": l.component,
                "turning": l.turning,
            })).collect::<Vec<_>>(),
        })
    }

    /// Assemble an arrangement from explicit loops of arcs (synthetic
    /// fixtures and deserialized exports). Arcs within each loop must chain
    /// end-to-start.
    pub fn from_loops(loop_arcs: Vec<Vec<Arc>>) -> Self {
        let mut arcs = Vec::new();
        let mut loops = Vec::new();
        for chain in loop_arcs {
            assert!(!chain.is_empty());
            let first = arcs.len();
            let indices: Vec<usize> = (first..first + chain.len()).collect();
            for arc in &chain {
                arcs.push(BoundaryArc {
                    arc: *arc,
                    ball: u32::MAX,
                });
            }
            loops.push(make_loop(&arcs, indices, 0));
        }
        let index = build_index(&arcs);
        Self { arcs, loops, index }
    }
}

fn build_index(arcs: &[BoundaryArc]) -> ArcIndex {
    let centers: Vec<Point2> = arcs.iter().map(|a| a.arc.center).collect();
    let r_max = arcs.iter().map(|a| a.arc.radius).fold(0.0, f64::max);
    let cell = if r_max > 0.0 { r_max } else { 1.0 };
    ArcIndex {
        centers: PointGrid::with_cell(centers, cell),
        r_max,
    }
}

fn make_loop(arcs: &[BoundaryArc], arc_indices: Vec<usize>, component: u32) -> BoundaryLoop {
    let mut cum = Vec::with_capacity(arc_indices.len() + 1);
    cum.push(0.0);
    let mut acc = 0.0;
    for &i in &arc_indices {
        acc += arcs[i].arc.length();
        cum.push(acc);
    }
    // Signed turning: arc curvature plus junction exterior angles.
    let mut turning = 0.0;
    for (pos, &i) in arc_indices.iter().enumerate() {
        let arc = &arcs[i].arc;
        turning += arc.span();
        if !arc.full_circle {
            let next = &arcs[arc_indices[(pos + 1) % arc_indices.len()]].arc;
            let t_out = arc.tangent_at(arc.end_angle);
            let t_in = next.tangent_at(next.start_angle);
            turning += t_out.cross(t_in).atan2(t_out.dot(t_in));
        }
    }
    BoundaryLoop {
        arc_indices,
        cum,
        length: acc,
        component,
        turning,
    }
}

/// Compute the boundary arrangement of a ball union: each ball's circle minus
/// the angular cover contributed by overlapping neighbors, stitched into
/// closed loops by endpoint matching.
pub fn boundary(union: &BallUnion) -> Result<BoundaryArrangement> {
    let eps = union.epsilon();
    let centers = union.centers();
    let mut arcs: Vec<BoundaryArc> = Vec::new();
    for (i, c) in centers.iter().enumerate() {
        let mut cover = AngularIntervalSet::new();
        union.balls_within(*c, 2.0 * eps, |j, d| {
            if j != i && d < 2.0 * eps {
                if let Some((start, span)) = circle_cover_by_ball(*c, eps, centers[j], eps) {
                    cover.add(start, span);
                }
            }
        });
        let uncovered = subtract_angular_cover(&cover);
        if uncovered.covers_circle() {
            arcs.push(BoundaryArc {
                arc: Arc::full(*c, eps),
                ball: i as u32,
            });
        } else {
            for (start, span) in uncovered.logical_intervals() {
                arcs.push(BoundaryArc {
                    arc: Arc::new(*c, eps, start, span),
                    ball: i as u32,
                });
            }
        }
    }

    // Stitch partial arcs into loops; full circles are loops of their own.
    let partial: Vec<usize> = arcs
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.arc.full_circle)
        .map(|(i, _)| i)
        .collect();
    let starts: Vec<Point2> = partial.iter().map(|&i| arcs[i].arc.start_point()).collect();
    let start_grid = PointGrid::with_cell(starts, eps);
    let mut next: Vec<Option<usize>> = vec![None; arcs.len()];
    let mut used: Vec<bool> = vec![false; partial.len()];
    for &i in &partial {
        let end = arcs[i].arc.end_point();
        let mut matched: Vec<usize> = Vec::new();
        start_grid.for_each_within(end, STITCH_TOL, |k, _| matched.push(k));
        if matched.len() != 1 || used[matched[0]] {
            return Err(Error::DegenerateArrangement { x: end.x, y: end.y });
        }
        used[matched[0]] = true;
        next[i] = Some(partial[matched[0]]);
    }

    let mut loops = Vec::new();
    let mut visited = vec![false; arcs.len()];
    for (i, arc) in arcs.iter().enumerate() {
        if visited[i] {
            continue;
        }
        if arc.arc.full_circle {
            visited[i] = true;
            loops.push(make_loop(&arcs, vec![i], union.component_of(arc.ball as usize)));
            continue;
        }
        let mut chain = Vec::new();
        let mut cur = i;
        loop {
            if visited[cur] {
                break;
            }
            visited[cur] = true;
            chain.push(cur);
            cur = next[cur].expect("partial arcs all matched");
        }
        if cur != i {
            let p = arcs[i].arc.start_point();
            return Err(Error::DegenerateArrangement { x: p.x, y: p.y });
        }
        let component = union.component_of(arcs[i].ball as usize);
        loops.push(make_loop(&arcs, chain, component));
    }

    let index = build_index(&arcs);
    Ok(BoundaryArrangement { arcs, loops, index })
}

/// Build the union and its boundary together, retrying once with a relative
/// 1e-9 perturbation of epsilon if the arrangement is degenerate (exact
/// tangencies are broken by the perturbation).
pub fn build_boundary(points: &[Point2], epsilon: f64) -> Result<(BallUnion, BoundaryArrangement)> {
    let union = BallUnion::build(points, epsilon)?;
    match boundary(&union) {
        Ok(arr) => Ok((union, arr)),
        Err(Error::DegenerateArrangement { .. }) => {
            let bumped = epsilon * (1.0 + 1e-9);
            let union = BallUnion::build(points, bumped)?;
            let arr = boundary(&union)?;
            Ok((union, arr))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::winding_number;

    #[test]
    fn single_ball_is_one_full_circle_loop() {
        let union = BallUnion::build(&[Point2::new(0.2, -0.1)], 0.3).expect("ok");
        let arr = boundary(&union).expect("ok");
        assert_eq!(arr.loops().len(), 1);
        assert_eq!(arr.arcs().len(), 1);
        assert!(arr.arcs()[0].arc.full_circle);
        assert!((arr.total_length() - TAU * 0.3).abs() < 1e-12);
    }

    #[test]
    fn two_balls_lens_geometry() {
        // Centers at distance eps: the union boundary consists of two arcs,
        // each of span 2*pi - 2*acos(d/2eps) = 2*pi - 2*pi/3.
        let eps = 0.5;
        let union = BallUnion::build(
            &[Point2::new(0.0, 0.0), Point2::new(eps, 0.0)],
            eps,
        )
        .expect("ok");
        let arr = boundary(&union).expect("ok");
        assert_eq!(arr.arcs().len(), 2);
        assert_eq!(arr.loops().len(), 1, "lens boundary is a single loop");
        let expected = 2.0 * eps * (TAU - 2.0 * (TAU / 6.0));
        assert!(
            (arr.total_length() - expected).abs() < 1e-9,
            "length {} vs {}",
            arr.total_length(),
            expected
        );

        // Rasterization oracle: sample circle points, keep those not interior
        // to the other ball, compare measure within 1%.
        let m = 20_000;
        let mut kept = 0usize;
        for &c in union.centers() {
            let other = if c.x == 0.0 {
                Point2::new(eps, 0.0)
            } else {
                Point2::new(0.0, 0.0)
            };
            for k in 0..m {
                let p = c + Point2::from_angle(k as f64 / m as f64 * TAU) * eps;
                if p.dist(other) >= eps {
                    kept += 1;
                }
            }
        }
        let raster = kept as f64 / m as f64 * TAU * eps;
        assert!((arr.total_length() - raster).abs() / raster < 0.01);
    }

    #[test]
    fn fully_covered_ball_contributes_no_arcs() {
        // Center ball swallowed by four overlapping neighbors.
        let eps = 1.0;
        let mut pts = vec![Point2::new(0.0, 0.0)];
        for k in 0..4 {
            pts.push(Point2::from_angle(k as f64 / 4.0 * TAU) * 0.9);
        }
        let union = BallUnion::build(&pts, eps).expect("ok");
        let arr = boundary(&union).expect("ok");
        assert!(arr.arcs().iter().all(|a| a.ball != 0), "covered ball has arcs");
    }

    #[test]
    fn ring_of_balls_has_two_loops_with_opposite_turning() {
        let n = 40;
        let pts: Vec<Point2> = (0..n)
            .map(|k| Point2::from_angle(k as f64 / n as f64 * TAU))
            .collect();
        let eps = 0.25; // overlapping ring, hole in the middle
        let union = BallUnion::build(&pts, eps).expect("ok");
        let arr = boundary(&union).expect("ok");
        assert_eq!(arr.loops().len(), 2, "outer and inner boundary");
        let mut turnings: Vec<f64> = arr.loops().iter().map(|l| l.turning).collect();
        turnings.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        assert!((turnings[0] + TAU).abs() < 1e-6, "hole turning {}", turnings[0]);
        assert!((turnings[1] - TAU).abs() < 1e-6, "outer turning {}", turnings[1]);

        // Winding around the origin: outer loop winds once, hole loop winds
        // the other way (it is traversed clockwise as seen from the hole).
        for lp in 0..2 {
            let poly = arr.loop_polyline(lp, 0.01);
            let w = winding_number(&poly, Point2::new(0.0, 0.0)).expect("off-curve");
            let turning = arr.loops()[lp].turning;
            if turning > 0.0 {
                assert_eq!(w, 1);
            } else {
                assert_eq!(w, -1);
            }
        }

        // Loop lengths equal the sum of their arc lengths.
        for lp in arr.loops() {
            let sum: f64 = lp.arc_indices.iter().map(|&i| arr.arcs()[i].arc.length()).sum();
            assert!((sum - lp.length).abs() < 1e-9);
        }
    }

    #[test]
    fn distance_matches_dense_sampling_oracle() {
        let mut state = 77u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let pts: Vec<Point2> = (0..200)
            .map(|_| Point2::new(next() * 2.0 - 1.0, next() * 2.0 - 1.0))
            .collect();
        let eps = 0.12;
        let union = BallUnion::build(&pts, eps).expect("ok");
        let arr = boundary(&union).expect("ok");
        // Per-arc sampling including endpoints, so sliver arcs and junction
        // corners are represented in the oracle.
        let spacing = arr.total_length() / 100_000.0;
        let mut dense = Vec::new();
        for ba in arr.arcs() {
            let steps = (ba.arc.length() / spacing).ceil().max(1.0) as usize;
            for k in 0..=steps {
                dense.push(ba.arc.point_at_arclength(ba.arc.length() * k as f64 / steps as f64));
            }
        }
        for _ in 0..50 {
            let y = Point2::new(next() * 2.4 - 1.2, next() * 2.4 - 1.2);
            let exact = super::super::distance_to_boundary(&union, &arr, y);
            let oracle = dense.iter().map(|p| p.dist(y)).fold(f64::INFINITY, f64::min);
            assert!(
                (exact - oracle).abs() < 1e-5,
                "distance {exact} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn isolated_ball_distance_values() {
        let union = BallUnion::build(&[Point2::new(0.0, 0.0)], 0.4).expect("ok");
        let arr = boundary(&union).expect("ok");
        let d_center = super::super::distance_to_boundary(&union, &arr, Point2::new(0.0, 0.0));
        assert!((d_center - 0.4).abs() < 1e-12);
        let d_out = super::super::distance_to_boundary(&union, &arr, Point2::new(1.0, 0.0));
        assert!((d_out - 0.6).abs() < 1e-12);
    }

    #[test]
    fn subchain_covers_requested_length() {
        let arr = BoundaryArrangement::from_loops(vec![vec![Arc::full(
            Point2::new(0.0, 0.0),
            1.0,
        )]]);
        let chain = arr.loop_subchain(0, 1.0, 2.5);
        let total: f64 = chain.iter().map(|a| a.length()).sum();
        assert!((total - 2.5).abs() < 1e-9);
        // Chain starts at arclength 1.0 around the circle.
        let p0 = chain[0].start_point();
        assert!(p0.dist(Point2::from_angle(1.0)) < 1e-9);
    }
}
