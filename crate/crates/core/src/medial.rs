//! The medial estimator: midpoints of segments joining the two estimated
//! boundary curves, the completed curve through them, and the open-curve
//! machinery that splits a single boundary loop into two sides by removing
//! cap neighborhoods around the estimated endpoints.

use crate::error::{Error, Result};
use crate::geom::{Arc, Point2, Polyline, TAU};
use crate::support_est::BoundaryArrangement;
use serde::{Deserialize, Serialize};

/// An ordered chain of arcs (one side of the split boundary) with cumulative
/// arclength.
#[derive(Debug, Clone)]
pub struct ArcChain {
    arcs: Vec<Arc>,
    cum: Vec<f64>,
    length: f64,
}

impl ArcChain {
    pub fn new(arcs: Vec<Arc>) -> Self {
        let mut cum = Vec::with_capacity(arcs.len() + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for a in &arcs {
            acc += a.length();
            cum.push(acc);
        }
        Self {
            arcs,
            cum,
            length: acc,
        }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty() || self.length <= 0.0
    }

    pub fn point_at(&self, s: f64) -> Point2 {
        let s = s.clamp(0.0, self.length);
        let k = match self
            .cum
            .binary_search_by(|c| c.partial_cmp(&s).expect("finite"))
        {
            Ok(k) => k.min(self.arcs.len() - 1),
            Err(k) => k - 1,
        };
        self.arcs[k].point_at_arclength(s - self.cum[k])
    }

    /// Ordered samples at (at most) `spacing` apart along the chain.
    pub fn sample(&self, spacing: f64) -> Vec<Point2> {
        assert!(spacing > 0.0);
        let count = (self.length / spacing).ceil().max(2.0) as usize;
        (0..=count)
            .map(|k| self.point_at(self.length * k as f64 / count as f64))
            .collect()
    }

    /// Exact nearest point on the chain (arc-exact, no discretization).
    pub fn nearest_point(&self, p: Point2) -> (Point2, f64) {
        let mut best = (Point2::default(), f64::INFINITY);
        for arc in &self.arcs {
            // Distance to the full circle lower-bounds the arc distance.
            if (p.dist(arc.center) - arc.radius).abs() >= best.1 {
                continue;
            }
            let (q, d) = arc.nearest_point(p);
            if d < best.1 {
                best = (q, d);
            }
        }
        best
    }

    /// Largest pairwise distance between samples of the chain.
    pub fn diameter(&self, spacing: f64) -> f64 {
        let pts = self.sample(spacing);
        let mut worst = 0.0f64;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                worst = worst.max(pts[i].dist(pts[j]));
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitProvenance {
    ClosedNative,
    OpenSplit,
}

/// The two sides of the estimated boundary. In the closed case these are the
/// two arrangement loops; in the open case they are the two chains remaining
/// after removing the completed cap pieces.
#[derive(Debug, Clone)]
pub struct SplitBoundary {
    pub side0: ArcChain,
    pub side1: ArcChain,
    pub provenance: SplitProvenance,
    /// For the open case: the removed completions around each endpoint.
    pub cut_sets: Option<[ArcChain; 2]>,
    /// Whether the sides are closed loops (closed case) or open chains.
    pub sides_closed: bool,
}

/// Configuration of the open-curve cap removal.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EndpointSplitConfig {
    /// Cap radius slack: caps are balls of radius `sigma_hat + c * epsilon`.
    pub c: f64,
    pub sigma_hat: f64,
    pub epsilon: f64,
}

/// Default cap slack: the endpoint estimate carries a 16-epsilon guarantee
/// and the split needs `c >= C + 1`.
pub const DEFAULT_CAP_SLACK: f64 = 17.0;

/// Half-width (in curve parameter, times sqrt(epsilon)) of the boundary
/// portion a cap of slack `c` can reach.
pub fn cap_slack_a(c: f64, epsilon: f64, sigma: f64, phi: f64, delta: f64) -> f64 {
    ((2.0 * sigma * c + c * c * epsilon) / (phi * phi * (1.0 - sigma / delta))).sqrt()
}

/// Hausdorff slack (times sqrt(epsilon)) between the true cap region and the
/// extended end cap.
pub fn cap_slack_b(a: f64, phi: f64, sigma: f64, delta: f64) -> f64 {
    a * phi * (1.0 + sigma / delta)
}

/// Split a closed-tube arrangement into its outer (side 0) and inner (side 1)
/// loops, identified by which loop winds around a point of the other.
pub fn split_closed(arr: &BoundaryArrangement) -> Result<SplitBoundary> {
    if arr.loops().len() != 2 {
        return Err(Error::NotClosedTube(arr.loops().len()));
    }
    let chain_of = |idx: usize| {
        let lp = &arr.loops()[idx];
        ArcChain::new(
            lp.arc_indices
                .iter()
                .map(|&i| arr.arcs()[i].arc)
                .collect(),
        )
    };
    let spacing = |idx: usize| arr.loops()[idx].length / 256.0;
    let poly0 = arr.loop_polyline(0, spacing(0));
    let probe1 = arr.loop_point(1, 0.0);
    let w01 = crate::geom::winding_number(&poly0, probe1).unwrap_or(0);
    let poly1 = arr.loop_polyline(1, spacing(1));
    let probe0 = arr.loop_point(0, 0.0);
    let w10 = crate::geom::winding_number(&poly1, probe0).unwrap_or(0);
    let (outer, inner) = match (w01.abs(), w10.abs()) {
        (1, 0) => (0, 1),
        (0, 1) => (1, 0),
        _ => return Err(Error::NotClosedTube(2)),
    };
    Ok(SplitBoundary {
        side0: chain_of(outer),
        side1: chain_of(inner),
        provenance: SplitProvenance::ClosedNative,
        cut_sets: None,
        sides_closed: true,
    })
}

/// Pragmatic variant for arrangements with more than two loops (tubes merged
/// by intersections): side 0 is the loop enclosing all others, side 1 chains
/// every remaining loop. Midpoints then land midway between the outer shell
/// and the nearest hole, which degrades only near the intersections.
pub fn split_outer_vs_rest(arr: &BoundaryArrangement) -> Result<SplitBoundary> {
    if arr.loops().len() < 2 {
        return Err(Error::NotClosedTube(arr.loops().len()));
    }
    if arr.loops().len() == 2 {
        return split_closed(arr);
    }
    let mut outer = None;
    'candidates: for i in 0..arr.loops().len() {
        let poly = arr.loop_polyline(i, arr.loops()[i].length / 256.0);
        for j in 0..arr.loops().len() {
            if i == j {
                continue;
            }
            let w = crate::geom::winding_number(&poly, arr.loop_point(j, 0.0)).unwrap_or(0);
            if w.abs() != 1 {
                continue 'candidates;
            }
        }
        outer = Some(i);
        break;
    }
    let outer = outer.ok_or(Error::NotClosedTube(arr.loops().len()))?;
    let chain_of = |idx: usize| {
        ArcChain::new(
            arr.loops()[idx]
                .arc_indices
                .iter()
                .map(|&i| arr.arcs()[i].arc)
                .collect(),
        )
    };
    let mut rest = Vec::new();
    for (i, lp) in arr.loops().iter().enumerate() {
        if i != outer {
            rest.extend(lp.arc_indices.iter().map(|&k| arr.arcs()[k].arc));
        }
    }
    Ok(SplitBoundary {
        side0: chain_of(outer),
        side1: ArcChain::new(rest),
        provenance: SplitProvenance::ClosedNative,
        cut_sets: None,
        sides_closed: true,
    })
}

/// Circular intervals `(start, len)` on `[0, circumference)`.
fn merge_circular(mut intervals: Vec<(f64, f64)>, circumference: f64) -> Vec<(f64, f64)> {
    if intervals.is_empty() {
        return intervals;
    }
    // Split wrapping intervals.
    let mut parts = Vec::new();
    for (s, l) in intervals.drain(..) {
        let s = s.rem_euclid(circumference);
        if s + l <= circumference {
            parts.push((s, l));
        } else {
            parts.push((s, circumference - s));
            parts.push((0.0, s + l - circumference));
        }
    }
    parts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (s, l) in parts {
        match merged.last_mut() {
            Some(last) if s <= last.0 + last.1 + 1e-12 => {
                let end = (last.0 + last.1).max(s + l);
                last.1 = end - last.0;
            }
            _ => merged.push((s, l)),
        }
    }
    // Wrap-around merge of last into first.
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().expect("nonempty");
        if last.0 + last.1 >= circumference - 1e-12 && first.0 <= 1e-12 {
            merged.pop();
            merged[0] = (last.0, last.1 + first.1);
        }
    }
    merged
}

/// Smallest circular interval containing all given intervals: the complement
/// of the largest gap between them.
fn circular_completion(intervals: &[(f64, f64)], circumference: f64) -> (f64, f64) {
    assert!(!intervals.is_empty());
    if intervals.len() == 1 {
        return intervals[0];
    }
    let mut best_gap = (f64::NEG_INFINITY, 0usize);
    for i in 0..intervals.len() {
        let end_i = intervals[i].0 + intervals[i].1;
        let next = intervals[(i + 1) % intervals.len()];
        let gap = (next.0 - end_i).rem_euclid(circumference);
        if gap > best_gap.0 {
            best_gap = (gap, i);
        }
    }
    let after = intervals[(best_gap.1 + 1) % intervals.len()].0;
    let len = circumference - best_gap.0;
    (after.rem_euclid(circumference), len)
}

/// Split a single-loop (open tube) boundary by removing the completed cap
/// pieces around the endpoint estimates. The remainder must consist of two
/// chains, which become the two sides.
pub fn split_open(
    arr: &BoundaryArrangement,
    x0: Point2,
    x1: Point2,
    config: &EndpointSplitConfig,
) -> Result<SplitBoundary> {
    if arr.loops().len() != 1 {
        return Err(Error::InvalidInput(format!(
            "open split expects a single boundary loop, found {}",
            arr.loops().len()
        )));
    }
    if config.c < 1.0 {
        return Err(Error::InvalidInput("cap slack c must be >= 1".into()));
    }
    let radius = config.sigma_hat + config.c * config.epsilon;
    if x0.dist(x1) <= 2.0 * radius {
        return Err(Error::CapSeparation(format!(
            "endpoint gap {} <= 2*(sigma_hat + c*eps) = {}",
            x0.dist(x1),
            2.0 * radius
        )));
    }
    let lp = &arr.loops()[0];
    let circumference = lp.length;

    // Parameter intervals of the loop inside each cap ball.
    let cap_intervals = |center: Point2| -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for (k, &ai) in lp.arc_indices.iter().enumerate() {
            let arc = &arr.arcs()[ai].arc;
            if let Some((start, span)) =
                crate::geom::circle_cover_by_ball(arc.center, arc.radius, center, radius)
            {
                // Intersect the covered circle interval with the arc span.
                let mut cover = crate::geom::AngularIntervalSet::new();
                cover.add(start, span);
                let within = if arc.full_circle {
                    cover
                } else {
                    let mut outside_arc = crate::geom::AngularIntervalSet::new();
                    outside_arc.add(arc.end_angle, TAU - arc.span());
                    // intersection = complement(complement(cover) U outside)
                    cover.complement().union(&outside_arc).complement()
                };
                for (s, len) in within.logical_intervals() {
                    // Angles at the arc start can round just below it and
                    // normalize to almost a full turn; snap them back.
                    let mut offset = crate::geom::normalize_angle(s - arc.start_angle);
                    if offset > arc.span() {
                        offset = if TAU - offset < 1e-6 { 0.0 } else { arc.span() };
                    }
                    let len = len.min(arc.span() - offset);
                    if len > 0.0 {
                        out.push((lp.cum[k] + offset * arc.radius, len * arc.radius));
                    }
                }
            }
        }
        merge_circular(out, circumference)
    };

    let e0 = cap_intervals(x0);
    let e1 = cap_intervals(x1);
    if e0.is_empty() || e1.is_empty() {
        return Err(Error::CapSeparation(
            "a cap ball does not meet the boundary".into(),
        ));
    }
    let comp0 = circular_completion(&e0, circumference);
    let comp1 = circular_completion(&e1, circumference);
    // Disjointness of the two completions on the circle.
    let overlaps = |a: (f64, f64), b: (f64, f64)| {
        let rel = (b.0 - a.0).rem_euclid(circumference);
        rel < a.1 || (a.0 - b.0).rem_euclid(circumference) < b.1
    };
    if overlaps(comp0, comp1) {
        return Err(Error::CapSeparation(
            "cap completions overlap; sigma too large relative to endpoint gap".into(),
        ));
    }
    // Removing two disjoint closed arcs from a circle leaves two chains.
    let gap_a_start = (comp0.0 + comp0.1).rem_euclid(circumference);
    let gap_a_len = (comp1.0 - gap_a_start).rem_euclid(circumference);
    let gap_b_start = (comp1.0 + comp1.1).rem_euclid(circumference);
    let gap_b_len = (comp0.0 - gap_b_start).rem_euclid(circumference);
    if gap_a_len <= 16.0 * f64::EPSILON * circumference
        || gap_b_len <= 16.0 * f64::EPSILON * circumference
    {
        return Err(Error::CapSeparation(
            "cap completions cover the whole boundary".into(),
        ));
    }

    let side0 = ArcChain::new(arr.loop_subchain(0, gap_a_start, gap_a_len));
    let side1 = ArcChain::new(arr.loop_subchain(0, gap_b_start, gap_b_len));
    let cut0 = ArcChain::new(arr.loop_subchain(0, comp0.0, comp0.1));
    let cut1 = ArcChain::new(arr.loop_subchain(0, comp1.0, comp1.1));
    Ok(SplitBoundary {
        side0,
        side1,
        provenance: SplitProvenance::OpenSplit,
        cut_sets: Some([cut0, cut1]),
        sides_closed: false,
    })
}

/// One fitted medial sample: a point on side 0, its nearest point on side 1,
/// and their midpoint.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MedialSample {
    pub on_side0: Point2,
    pub on_side1: Point2,
    pub midpoint: Point2,
}

/// Fitted midpoints in side-0 order, with breakpoints where consecutive
/// midpoints jump.
#[derive(Debug, Clone)]
pub struct MedialEstimate {
    pub samples: Vec<MedialSample>,
    /// Indices `i` such that the jump from midpoint `i-1` (cyclically, when
    /// closed) to midpoint `i` exceeds the continuity threshold.
    pub breakpoints: Vec<usize>,
    pub spacing: f64,
    pub closed: bool,
}

impl MedialEstimate {
    pub fn midpoints(&self) -> Vec<Point2> {
        self.samples.iter().map(|s| s.midpoint).collect()
    }
}

/// Sample side 0 at the given spacing and join each sample to its exact
/// nearest point on side 1; midpoints are emitted in side-0 order.
pub fn medial_fit(split: &SplitBoundary, spacing: f64) -> Result<MedialEstimate> {
    if !(spacing > 0.0) {
        return Err(Error::InvalidInput("spacing must be positive".into()));
    }
    if split.side0.is_empty() || split.side1.is_empty() {
        return Err(Error::InvalidInput("empty boundary side".into()));
    }
    let side0_points = if split.sides_closed {
        // Closed loop: do not duplicate the seam point.
        let count = (split.side0.length() / spacing).ceil().max(2.0) as usize;
        (0..count)
            .map(|k| split.side0.point_at(split.side0.length() * k as f64 / count as f64))
            .collect::<Vec<_>>()
    } else {
        split.side0.sample(spacing)
    };
    let samples: Vec<MedialSample> = side0_points
        .into_iter()
        .map(|y| {
            let (z, _) = split.side1.nearest_point(y);
            MedialSample {
                on_side0: y,
                on_side1: z,
                midpoint: (y + z) * 0.5,
            }
        })
        .collect();
    let threshold = 3.0 * spacing;
    let mut breakpoints = Vec::new();
    let start = if split.sides_closed { 0 } else { 1 };
    for i in start..samples.len() {
        let prev = if i == 0 { samples.len() - 1 } else { i - 1 };
        if samples[prev].midpoint.dist(samples[i].midpoint) > threshold {
            breakpoints.push(i);
        }
    }
    Ok(MedialEstimate {
        samples,
        breakpoints,
        spacing,
        closed: split.sides_closed,
    })
}

/// Join the fitted midpoints in order into the completed curve (linear
/// interpolation across breakpoints is implicit in consecutive-vertex
/// joining). Closed completions are validated to be simple.
pub fn complete(estimate: &MedialEstimate) -> Result<Polyline> {
    let mut midpoints = estimate.midpoints();
    midpoints.dedup_by(|a, b| a.dist(*b) < 1e-12);
    if estimate.closed {
        if let (Some(first), Some(last)) = (midpoints.first(), midpoints.last()) {
            if first.dist(*last) < 1e-12 && midpoints.len() > 2 {
                midpoints.pop();
            }
        }
    }
    let poly = Polyline::new(midpoints, estimate.closed)?;
    if estimate.closed {
        if let Some((i, j)) = poly.first_self_intersection() {
            return Err(Error::CompletionNotSimple(i, j));
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::hausdorff_distance;
    use crate::support_est::{boundary, BallUnion};

    fn concentric() -> BoundaryArrangement {
        BoundaryArrangement::from_loops(vec![
            vec![Arc::full(Point2::new(0.0, 0.0), 1.2)],
            vec![Arc::full(Point2::new(0.0, 0.0), 0.8)],
        ])
    }

    #[test]
    fn split_closed_identifies_outer_loop() {
        let split = split_closed(&concentric()).expect("ok");
        assert_eq!(split.provenance, SplitProvenance::ClosedNative);
        assert!((split.side0.length() - TAU * 1.2).abs() < 1e-9);
        assert!((split.side1.length() - TAU * 0.8).abs() < 1e-9);
    }

    #[test]
    fn split_closed_rejects_single_loop() {
        let arr = BoundaryArrangement::from_loops(vec![vec![Arc::full(
            Point2::new(0.0, 0.0),
            1.0,
        )]]);
        assert!(matches!(split_closed(&arr), Err(Error::NotClosedTube(1))));
    }

    #[test]
    fn concentric_midpoints_sit_on_the_center_circle() {
        let split = split_closed(&concentric()).expect("ok");
        let est = medial_fit(&split, 0.05).expect("ok");
        assert!(est.breakpoints.is_empty());
        for s in &est.samples {
            assert!((s.midpoint.norm() - 1.0).abs() < 1e-6, "radius {}", s.midpoint.norm());
            // Midpoint equidistance is exact by construction.
            let d0 = s.midpoint.dist(s.on_side0);
            let d1 = s.midpoint.dist(s.on_side1);
            assert!((d0 - d1).abs() < 1e-12);
        }
        // Side disjointness.
        let min_gap = est
            .samples
            .iter()
            .map(|s| s.on_side0.dist(s.on_side1))
            .fold(f64::INFINITY, f64::min);
        assert!(min_gap > 0.0);
    }

    #[test]
    fn completion_approximates_the_circle() {
        let split = split_closed(&concentric()).expect("ok");
        let spacing = 0.05;
        let est = medial_fit(&split, spacing).expect("ok");
        let completed = complete(&est).expect("simple");
        assert!(completed.is_closed());
        // Continuum-exact directed distances: polygon points measure their
        // radial gap to the circle; circle samples measure their distance to
        // the polyline itself.
        let poly_to_circle = completed
            .sample(1e-3)
            .iter()
            .map(|p| (p.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        let circle_to_poly = (0..4000)
            .map(|k| {
                let q = Point2::from_angle(k as f64 / 4000.0 * TAU);
                completed.distance_to_point(q)
            })
            .fold(0.0, f64::max);
        let dh = poly_to_circle.max(circle_to_poly);
        assert!(dh <= spacing * spacing / 2.0 + 1e-6, "dh {dh}");
    }

    #[test]
    fn artificial_gap_is_bridged_by_one_segment() {
        // Remove a chunk of samples; the completion joins across the gap.
        let split = split_closed(&concentric()).expect("ok");
        let mut est = medial_fit(&split, 0.05).expect("ok");
        let keep = est.samples.len() * 3 / 4;
        est.samples.truncate(keep);
        est.closed = false;
        let completed = complete(&est).expect("ok");
        assert_eq!(completed.vertices().len(), keep);
        assert!(!completed.is_closed());
    }

    fn stadium_fixture() -> (BallUnion, BoundaryArrangement) {
        let n = 201;
        let pts: Vec<Point2> = (0..n)
            .map(|k| Point2::new(k as f64 / (n - 1) as f64, 0.0))
            .collect();
        let eps = 0.15;
        let union = BallUnion::build(&pts, eps).expect("ok");
        let arr = boundary(&union).expect("ok");
        (union, arr)
    }

    #[test]
    fn stadium_split_recovers_straight_edges() {
        let (_, arr) = stadium_fixture();
        assert_eq!(arr.loops().len(), 1, "open tube boundary is one loop");
        let config = EndpointSplitConfig {
            c: 1.0,
            sigma_hat: 0.15,
            epsilon: 0.15,
        };
        let split = split_open(&arr, Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), &config)
            .expect("separates");
        assert_eq!(split.provenance, SplitProvenance::OpenSplit);
        // Each side is one straight edge: all samples near y = +-0.15, and the
        // two sides take opposite signs.
        let s0 = split.side0.sample(0.01);
        let s1 = split.side1.sample(0.01);
        let sign0 = s0[s0.len() / 2].y.signum();
        for p in &s0 {
            assert!((p.y.abs() - 0.15).abs() < 2e-3, "side0 point {:?}", p);
            assert_eq!(p.y.signum(), sign0);
        }
        for p in &s1 {
            assert!((p.y.abs() - 0.15).abs() < 2e-3, "side1 point {:?}", p);
            assert_eq!(p.y.signum(), -sign0);
        }
        // Both remaining edges keep at least 1 - 2*a*sqrt(eps)*phi of length.
        let a = cap_slack_a(1.0, 0.15, 0.15, 1.0, crate::model::THICKNESS_INFINITE);
        let min_len = 1.0 - 2.0 * a * 0.15f64.sqrt() * 1.0;
        assert!(split.side0.length() >= min_len, "side0 len {}", split.side0.length());
        assert!(split.side1.length() >= min_len, "side1 len {}", split.side1.length());
        // Cap diameter bound: within each removed piece, max pairwise distance
        // is at most 2*sigma_hat + 2*c*eps.
        let cuts = split.cut_sets.as_ref().expect("open split has cuts");
        for cut in cuts {
            assert!(cut.diameter(0.02) <= 2.0 * 0.15 + 2.0 * 0.15 + 1e-9);
        }
        // Midpoints of the stadium sides trace the segment.
        let est = medial_fit(&split, 0.02).expect("ok");
        for s in &est.samples {
            assert!(s.midpoint.y.abs() < 2e-3, "midpoint {:?}", s.midpoint);
        }
    }

    #[test]
    fn too_close_endpoints_rejected() {
        let (_, arr) = stadium_fixture();
        let config = EndpointSplitConfig {
            c: 1.0,
            sigma_hat: 0.15,
            epsilon: 0.15,
        };
        assert!(matches!(
            split_open(&arr, Point2::new(0.4, 0.0), Point2::new(0.6, 0.0), &config),
            Err(Error::CapSeparation(_))
        ));
    }
}
