//! Polylines: the discrete representation of curves and extracted paths.

use super::{point_segment_distance, Point2, TAU};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An ordered chain of vertices. For closed polylines the segment from the
/// last vertex back to the first is implicit (first vertex is not repeated).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Polyline {
    vertices: Vec<Point2>,
    closed: bool,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput(
                "polyline needs at least 2 vertices".into(),
            ));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("polyline vertex not finite".into()));
        }
        if closed && vertices.first() == vertices.last() && vertices.len() > 2 {
            let mut v = vertices;
            v.pop();
            return Ok(Self {
                vertices: v,
                closed,
            });
        }
        Ok(Self { vertices, closed })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    pub fn segment(&self, i: usize) -> (Point2, Point2) {
        let a = self.vertices[i];
        let b = self.vertices[(i + 1) % self.vertices.len()];
        (a, b)
    }

    pub fn length(&self) -> f64 {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                a.dist(b)
            })
            .sum()
    }

    pub fn distance_to_point(&self, p: Point2) -> f64 {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                point_segment_distance(p, a, b)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Points along the polyline at (at most) `spacing` apart, including all
    /// vertices.
    pub fn sample(&self, spacing: f64) -> Vec<Point2> {
        assert!(spacing > 0.0);
        let mut out = Vec::new();
        for i in 0..self.segment_count() {
            let (a, b) = self.segment(i);
            let len = a.dist(b);
            let steps = (len / spacing).ceil().max(1.0) as usize;
            for k in 0..steps {
                out.push(a.lerp(b, k as f64 / steps as f64));
            }
        }
        if !self.closed {
            out.push(*self.vertices.last().expect("nonempty"));
        }
        out
    }

    /// Whether the polyline has no proper self-intersections. Non-adjacent
    /// segments must not touch; adjacent segments share only their common
    /// vertex. Runs a sweep over x-sorted segments.
    pub fn is_simple(&self) -> bool {
        self.first_self_intersection().is_none()
    }

    /// First pair of non-adjacent segments that intersect, if any.
    pub fn first_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.segment_count();
        let m = self.vertices.len();
        let mut order: Vec<usize> = (0..n).collect();
        let min_x = |i: usize| {
            let (a, b) = self.segment(i);
            a.x.min(b.x)
        };
        let max_x = |i: usize| {
            let (a, b) = self.segment(i);
            a.x.max(b.x)
        };
        order.sort_by(|&i, &j| min_x(i).partial_cmp(&min_x(j)).expect("finite"));
        let mut active: Vec<usize> = Vec::new();
        for &i in &order {
            let xi = min_x(i);
            active.retain(|&j| max_x(j) >= xi);
            for &j in &active {
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                // Adjacent segments (sharing a vertex) are allowed to touch.
                let adjacent = hi - lo == 1 || (self.closed && lo == 0 && hi == n - 1 && m > 2);
                if adjacent {
                    continue;
                }
                let (a, b) = self.segment(lo);
                let (c, d) = self.segment(hi);
                if segments_intersect(a, b, c, d) {
                    return Some((lo, hi));
                }
            }
            active.push(i);
        }
        None
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Whether closed segments `[a,b]` and `[c,d]` share a point.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2| -> bool {
        orient(p, q, r) == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(c, d, a) || on(c, d, b) || on(a, b, c) || on(a, b, d)
}

/// Signed winding number of a closed polyline around `p`, by summed subtended
/// angles. Errors when `p` lies on the curve (within 1e-12), where the winding
/// number is undefined.
pub fn winding_number(curve: &Polyline, p: Point2) -> Result<i32> {
    if !curve.is_closed() {
        return Err(Error::InvalidInput(
            "winding number requires a closed polyline".into(),
        ));
    }
    let mut total = 0.0;
    for i in 0..curve.segment_count() {
        let (a, b) = curve.segment(i);
        if point_segment_distance(p, a, b) <= 1e-12 {
            return Err(Error::DegenerateQuery);
        }
        let u = a - p;
        let v = b - p;
        total += u.cross(v).atan2(u.dot(v));
    }
    Ok((total / TAU).round() as i32)
}
