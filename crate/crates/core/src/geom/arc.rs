//! Circular arcs with CCW angular spans. The boundary of a union of
//! equal-radius balls is a finite collection of these.

use super::{normalize_angle, Point2, TAU};
use serde::{Deserialize, Serialize};

/// A circular arc traversed counterclockwise from `start_angle` to
/// `end_angle`. `full_circle` marks the degenerate-span case where start and
/// end coincide and the arc is the whole circle.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Arc {
    pub center: Point2,
    pub radius: f64,
    pub start_angle: f64,
    pub end_angle: f64,
    pub full_circle: bool,
}

impl Arc {
    /// Arc from `start` spanning `span` radians CCW. Spans are clamped into
    /// `(0, 2*pi]`; a span of `2*pi` produces a full circle.
    pub fn new(center: Point2, radius: f64, start: f64, span: f64) -> Self {
        assert!(radius > 0.0, "arc radius must be positive");
        assert!(span > 0.0 && span <= TAU + 1e-12, "span must lie in (0, 2*pi]");
        if span >= TAU - 1e-12 {
            return Self::full(center, radius);
        }
        let s = normalize_angle(start);
        Self {
            center,
            radius,
            start_angle: s,
            end_angle: normalize_angle(s + span),
            full_circle: false,
        }
    }

    pub fn full(center: Point2, radius: f64) -> Self {
        assert!(radius > 0.0, "arc radius must be positive");
        Self {
            center,
            radius,
            start_angle: 0.0,
            end_angle: 0.0,
            full_circle: true,
        }
    }

    pub fn span(&self) -> f64 {
        if self.full_circle {
            TAU
        } else {
            let d = normalize_angle(self.end_angle - self.start_angle);
            if d == 0.0 {
                TAU
            } else {
                d
            }
        }
    }

    pub fn length(&self) -> f64 {
        self.radius * self.span()
    }

    pub fn point_at_angle(&self, theta: f64) -> Point2 {
        self.center + Point2::from_angle(theta) * self.radius
    }

    pub fn start_point(&self) -> Point2 {
        self.point_at_angle(self.start_angle)
    }

    pub fn end_point(&self) -> Point2 {
        self.point_at_angle(self.end_angle)
    }

    /// Point at arclength `s` from the start (CCW), `0 <= s <= length()`.
    pub fn point_at_arclength(&self, s: f64) -> Point2 {
        self.point_at_angle(self.start_angle + s / self.radius)
    }

    /// Whether angle `theta` falls inside the CCW span.
    pub fn contains_angle(&self, theta: f64) -> bool {
        if self.full_circle {
            return true;
        }
        normalize_angle(theta - self.start_angle) <= self.span()
    }

    /// Unit tangent in the traversal (CCW) direction at angle `theta`.
    pub fn tangent_at(&self, theta: f64) -> Point2 {
        Point2::from_angle(theta + std::f64::consts::FRAC_PI_2)
    }

    /// Exact nearest point on the arc to `p`, with its distance.
    pub fn nearest_point(&self, p: Point2) -> (Point2, f64) {
        let v = p - self.center;
        let d = v.norm();
        if self.full_circle {
            if d == 0.0 {
                let q = self.point_at_angle(0.0);
                return (q, self.radius);
            }
            let q = self.center + v * (self.radius / d);
            return (q, (d - self.radius).abs());
        }
        let theta = v.angle();
        if self.contains_angle(theta) {
            if d == 0.0 {
                return (self.start_point(), self.radius);
            }
            let q = self.center + v * (self.radius / d);
            (q, (d - self.radius).abs())
        } else {
            let a = self.start_point();
            let b = self.end_point();
            let da = p.dist(a);
            let db = p.dist(b);
            if da <= db {
                (a, da)
            } else {
                (b, db)
            }
        }
    }
}

/// Exact Euclidean distance from `p` to the arc point set: the radial
/// projection when the angular projection lands inside the span, otherwise
/// the nearest endpoint.
pub fn point_to_arc_distance(p: Point2, arc: &Arc) -> f64 {
    arc.nearest_point(p).1
}

/// Angular interval of the circle `(center, radius)` lying inside the closed
/// ball `B(ball_center, ball_radius)`, as `(start, span)`. Returns `None` when
/// the circle misses the ball, and a full span when the circle is swallowed.
pub fn circle_cover_by_ball(
    center: Point2,
    radius: f64,
    ball_center: Point2,
    ball_radius: f64,
) -> Option<(f64, f64)> {
    let d = center.dist(ball_center);
    if d + radius <= ball_radius {
        return Some((0.0, TAU));
    }
    if (d - radius).abs() > ball_radius || d == 0.0 {
        return None;
    }
    let cos_half = (d * d + radius * radius - ball_radius * ball_radius) / (2.0 * d * radius);
    let half = cos_half.clamp(-1.0, 1.0).acos();
    if half <= 0.0 {
        return None;
    }
    let mid = (ball_center - center).angle();
    Some((normalize_angle(mid - half), 2.0 * half))
}
