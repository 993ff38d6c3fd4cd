//! Filament curves: named analytic families discretized into dense polylines
//! parameterized by normalized arclength, with cached unit tangent and normal
//! fields.

use crate::error::{Error, Result};
use crate::geom::{project_on_segment, Point2, Polyline, TAU};
use serde::{Deserialize, Serialize};

pub const DEFAULT_RESOLUTION: usize = 512;

/// Named curve families selectable from configs. Coordinates are model units
/// inside the ambient box `[-1, 1]^2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CurveFamily {
    Circle {
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Segment {
        from: [f64; 2],
        to: [f64; 2],
    },
    /// Chord from `from` to `to` with a sinusoidal transverse displacement;
    /// `cycles = 1` is a single arch meeting both endpoints exactly.
    SineArc {
        from: [f64; 2],
        to: [f64; 2],
        amplitude: f64,
        #[serde(default = "default_cycles")]
        cycles: f64,
    },
    /// Archimedean spiral `r = r0 + growth * theta`, `theta` over
    /// `[0, 2*pi*turns]`.
    Spiral {
        #[serde(default)]
        center: [f64; 2],
        r0: f64,
        growth: f64,
        turns: f64,
    },
    UserPolyline {
        vertices: Vec<[f64; 2]>,
        closed: bool,
    },
}

fn default_cycles() -> f64 {
    1.0
}

impl CurveFamily {
    fn is_closed(&self) -> bool {
        match self {
            CurveFamily::Circle { .. } | CurveFamily::Ellipse { .. } => true,
            CurveFamily::Segment { .. } | CurveFamily::SineArc { .. } | CurveFamily::Spiral { .. } => false,
            CurveFamily::UserPolyline { closed, .. } => *closed,
        }
    }

    /// Position at raw parameter `t` in `[0, 1]`.
    fn position(&self, t: f64) -> Point2 {
        match *self {
            CurveFamily::Circle { radius, center } => {
                Point2::new(center[0], center[1]) + Point2::from_angle(TAU * t) * radius
            }
            CurveFamily::Ellipse { a, b, center } => Point2::new(
                center[0] + a * (TAU * t).cos(),
                center[1] + b * (TAU * t).sin(),
            ),
            CurveFamily::Segment { from, to } => {
                Point2::new(from[0], from[1]).lerp(Point2::new(to[0], to[1]), t)
            }
            CurveFamily::SineArc {
                from,
                to,
                amplitude,
                cycles,
            } => {
                let a = Point2::new(from[0], from[1]);
                let b = Point2::new(to[0], to[1]);
                let normal = (b - a).normalized().rot90();
                a.lerp(b, t) + normal * (amplitude * (std::f64::consts::PI * cycles * t).sin())
            }
            CurveFamily::Spiral {
                center,
                r0,
                growth,
                turns,
            } => {
                let theta = TAU * turns * t;
                Point2::new(center[0], center[1]) + Point2::from_angle(theta) * (r0 + growth * theta)
            }
            CurveFamily::UserPolyline { .. } => unreachable!("polylines are resampled directly"),
        }
    }

    /// Derivative with respect to `t` (not arclength); `None` for user
    /// polylines, whose tangents come from finite differences.
    fn derivative(&self, t: f64) -> Option<Point2> {
        let d = match *self {
            CurveFamily::Circle { radius, .. } => {
                Point2::from_angle(TAU * t).rot90() * (TAU * radius)
            }
            CurveFamily::Ellipse { a, b, .. } => Point2::new(
                -a * TAU * (TAU * t).sin(),
                b * TAU * (TAU * t).cos(),
            ),
            CurveFamily::Segment { from, to } => {
                Point2::new(to[0] - from[0], to[1] - from[1])
            }
            CurveFamily::SineArc {
                from,
                to,
                amplitude,
                cycles,
            } => {
                let a = Point2::new(from[0], from[1]);
                let b = Point2::new(to[0], to[1]);
                let normal = (b - a).normalized().rot90();
                let w = std::f64::consts::PI * cycles;
                (b - a) + normal * (amplitude * w * (w * t).cos())
            }
            CurveFamily::Spiral {
                r0,
                growth,
                turns,
                ..
            } => {
                let w = TAU * turns;
                let theta = w * t;
                let radial = Point2::from_angle(theta);
                radial * (growth * w) + radial.rot90() * ((r0 + growth * theta) * w)
            }
            CurveFamily::UserPolyline { .. } => return None,
        };
        Some(d)
    }
}

/// A filament curve as a dense polyline with equal-length segments, unit
/// tangents and left normals per vertex, total arclength, and topology.
#[derive(Debug, Clone)]
pub struct FilamentCurve {
    vertices: Vec<Point2>,
    tangents: Vec<Point2>,
    normals: Vec<Point2>,
    arclength: f64,
    closed: bool,
}

impl FilamentCurve {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn arclength(&self) -> f64 {
        self.arclength
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Position at normalized arclength `u` in `[0, 1]` (closed curves wrap).
    pub fn eval(&self, u: f64) -> Point2 {
        let (i, frac) = self.locate(u);
        let a = self.vertices[i];
        let b = self.vertices[(i + 1) % self.vertices.len()];
        a.lerp(b, frac)
    }

    /// Unit tangent at `u`.
    pub fn tangent(&self, u: f64) -> Point2 {
        let (i, frac) = self.locate(u);
        let a = self.tangents[i];
        let b = self.tangents[(i + 1) % self.vertices.len()];
        (a + (b - a) * frac).normalized()
    }

    /// Unit left normal at `u` (tangent rotated +90 degrees).
    pub fn normal(&self, u: f64) -> Point2 {
        let (i, frac) = self.locate(u);
        let a = self.normals[i];
        let b = self.normals[(i + 1) % self.vertices.len()];
        (a + (b - a) * frac).normalized()
    }

    fn locate(&self, u: f64) -> (usize, f64) {
        let n = self.segment_count() as f64;
        let s = if self.closed {
            u.rem_euclid(1.0) * n
        } else {
            u.clamp(0.0, 1.0) * n
        };
        let mut i = s.floor() as usize;
        let mut frac = s - i as f64;
        if i >= self.segment_count() {
            i = self.segment_count() - 1;
            frac = 1.0;
        }
        (i, frac)
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        if self.closed {
            self.vertices[0]
        } else {
            *self.vertices.last().expect("nonempty")
        }
    }

    /// Distance from `p` to the curve and the normalized arclength of the
    /// nearest point.
    pub fn nearest(&self, p: Point2) -> (f64, f64) {
        let mut best = (f64::INFINITY, 0.0);
        let n = self.vertices.len();
        for i in 0..self.segment_count() {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let (t, foot) = project_on_segment(p, a, b);
            let d = p.dist(foot);
            if d < best.0 {
                best = (d, (i as f64 + t) / self.segment_count() as f64);
            }
        }
        best
    }

    /// `count` points at equal arclength spacing (closed curves omit the
    /// duplicate endpoint).
    pub fn sample_uniform(&self, count: usize) -> Vec<Point2> {
        let denom = if self.closed { count } else { count - 1 };
        (0..count)
            .map(|k| self.eval(k as f64 / denom as f64))
            .collect()
    }

    pub fn to_polyline(&self) -> Polyline {
        Polyline::new(self.vertices.clone(), self.closed).expect("curve is a valid polyline")
    }
}

/// Build a curve from a named family at resolution `m` (vertex count).
///
/// The returned polyline has equal-length segments: vertex positions are
/// marched along a dense pre-sampling at a fixed chord length, with the chord
/// chosen by bisection so the march ends exactly at the curve end (open) or
/// back at the start (closed).
pub fn build_curve(family: &CurveFamily, m: usize) -> Result<FilamentCurve> {
    if m < 16 {
        return Err(Error::InvalidInput(format!(
            "curve resolution {m} < 16"
        )));
    }
    validate_family(family)?;
    let closed = family.is_closed();

    // Dense pre-sampling of the family (or the user polyline itself).
    let dense: Vec<Point2> = match family {
        CurveFamily::UserPolyline { vertices, .. } => {
            let pts: Vec<Point2> = vertices.iter().map(|v| Point2::new(v[0], v[1])).collect();
            if pts.len() < 2 {
                return Err(Error::InvalidInput("user polyline needs >= 2 vertices".into()));
            }
            if pts.len() > 2 && !Polyline::new(pts.clone(), closed)?.is_simple() {
                return Err(Error::NotSimple);
            }
            densify_polyline(&pts, closed, 32 * m)
        }
        _ => {
            let n = 32 * m;
            if closed {
                (0..n).map(|k| family.position(k as f64 / n as f64)).collect()
            } else {
                (0..n)
                    .map(|k| family.position(k as f64 / (n - 1) as f64))
                    .collect()
            }
        }
    };

    let cum = cumulative_lengths(&dense, closed);
    let total = *cum.last().expect("nonempty");
    if !(total > 0.0) {
        return Err(Error::InvalidInput("curve has zero length".into()));
    }

    let chords = if closed { m } else { m - 1 };
    let target = total / chords as f64;
    // Bisect the chord length so the equal-chord march lands exactly on the end.
    let mut lo = target * 0.99;
    let mut hi = target * 1.000001;
    let mut verts = march(&dense, &cum, closed, lo, chords);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let attempt = march(&dense, &cum, closed, mid, chords);
        // Overshoot: the march ran off the end before placing all vertices.
        match attempt {
            Some((v, end_s)) if end_s <= total => {
                lo = mid;
                verts = Some((v, end_s));
            }
            _ => hi = mid,
        }
    }
    let (mut vertices, _) =
        verts.ok_or_else(|| Error::InvalidInput("arclength march failed".into()))?;
    vertices.truncate(m);

    // Map each vertex back to a raw family parameter for analytic tangents.
    let tangents: Vec<Point2> = match family {
        CurveFamily::UserPolyline { .. } => finite_difference_tangents(&vertices, closed),
        _ => vertices
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let t = raw_parameter(&dense, &cum, closed, *v, j, m);
                family
                    .derivative(t)
                    .expect("analytic family")
                    .normalized()
            })
            .collect(),
    };
    let normals = tangents.iter().map(|t| t.rot90()).collect();

    let curve = FilamentCurve {
        vertices,
        tangents,
        normals,
        arclength: total,
        closed,
    };
    if !curve.to_polyline().is_simple() {
        return Err(Error::NotSimple);
    }
    Ok(curve)
}

fn validate_family(family: &CurveFamily) -> Result<()> {
    let ok = match *family {
        CurveFamily::Circle { radius, .. } => radius > 0.0,
        CurveFamily::Ellipse { a, b, .. } => a > 0.0 && b > 0.0,
        CurveFamily::Segment { from, to } => from != to,
        CurveFamily::SineArc { from, to, .. } => from != to,
        CurveFamily::Spiral { r0, turns, growth, .. } => r0 >= 0.0 && turns > 0.0 && (r0 > 0.0 || growth > 0.0),
        CurveFamily::UserPolyline { .. } => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput("bad curve family parameters".into()))
    }
}

fn densify_polyline(pts: &[Point2], closed: bool, n: usize) -> Vec<Point2> {
    let cum = cumulative_lengths(pts, closed);
    let total = *cum.last().expect("nonempty");
    let segs = if closed { pts.len() } else { pts.len() - 1 };
    (0..n)
        .map(|k| {
            let s = if closed {
                total * k as f64 / n as f64
            } else {
                total * k as f64 / (n - 1) as f64
            };
            let i = match cum.binary_search_by(|c| c.partial_cmp(&s).expect("finite")) {
                Ok(i) => i.min(segs - 1),
                Err(i) => (i - 1).min(segs - 1),
            };
            let seg_len = cum[i + 1] - cum[i];
            let t = if seg_len > 0.0 { (s - cum[i]) / seg_len } else { 0.0 };
            pts[i].lerp(pts[(i + 1) % pts.len()], t)
        })
        .collect()
}

/// Cumulative arclength over vertices; closed polylines append the wrap
/// segment, so the result has `len + 1` entries ending at the total length.
fn cumulative_lengths(pts: &[Point2], closed: bool) -> Vec<f64> {
    let segs = if closed { pts.len() } else { pts.len() - 1 };
    let mut cum = Vec::with_capacity(segs + 1);
    cum.push(0.0);
    let mut acc = 0.0;
    for i in 0..segs {
        acc += pts[i].dist(pts[(i + 1) % pts.len()]);
        cum.push(acc);
    }
    cum
}

fn point_at(dense: &[Point2], cum: &[f64], closed: bool, s: f64) -> Point2 {
    let segs = cum.len() - 1;
    let s = s.clamp(0.0, *cum.last().expect("nonempty"));
    let i = match cum.binary_search_by(|c| c.partial_cmp(&s).expect("finite")) {
        Ok(i) => i.min(segs - 1),
        Err(i) => (i - 1).min(segs - 1),
    };
    let seg_len = cum[i + 1] - cum[i];
    let t = if seg_len > 0.0 { (s - cum[i]) / seg_len } else { 0.0 };
    let next = if closed { (i + 1) % dense.len() } else { i + 1 };
    dense[i].lerp(dense[next], t)
}

/// March `chords` equal chords of length `c` along the dense polyline.
/// Returns the vertices (including the start) and the arclength position
/// after the final chord, or `None` if the march runs off the end early.
fn march(
    dense: &[Point2],
    cum: &[f64],
    closed: bool,
    c: f64,
    chords: usize,
) -> Option<(Vec<Point2>, f64)> {
    let total = *cum.last().expect("nonempty");
    let mut verts = vec![dense[0]];
    let mut s = 0.0;
    for _ in 0..chords {
        let p = *verts.last().expect("nonempty");
        // Bisect the arclength position where the chord from p reaches c.
        let mut lo = s;
        let mut hi = (s + 4.0 * c).min(total);
        if point_at(dense, cum, closed, hi).dist(p) < c {
            return None;
        }
        for _ in 0..52 {
            let mid = 0.5 * (lo + hi);
            if point_at(dense, cum, closed, mid).dist(p) < c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        s = 0.5 * (lo + hi);
        verts.push(point_at(dense, cum, closed, s));
    }
    Some((verts, s))
}

/// Raw family parameter of a marched vertex, recovered from its arclength
/// position on the dense pre-sampling.
fn raw_parameter(
    dense: &[Point2],
    cum: &[f64],
    closed: bool,
    v: Point2,
    j: usize,
    m: usize,
) -> f64 {
    // Initial guess: fraction of total arclength, refined by nested scans of
    // the dense table around the best position so far.
    let denom = if closed { m } else { m - 1 };
    let guess = j as f64 / denom as f64;
    let total = *cum.last().expect("nonempty");
    let mut center = guess * total;
    let mut window = total / m as f64 * 2.0;
    let steps = 64;
    for _ in 0..3 {
        let mut best = (f64::INFINITY, center);
        for k in 0..=steps {
            let s = (center - window + 2.0 * window * k as f64 / steps as f64).clamp(0.0, total);
            let d = point_at(dense, cum, closed, s).dist(v);
            if d < best.0 {
                best = (d, s);
            }
        }
        center = best.1;
        window /= steps as f64 / 4.0;
    }
    center / total
}

fn finite_difference_tangents(vertices: &[Point2], closed: bool) -> Vec<Point2> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = if closed {
                (vertices[(i + n - 1) % n], vertices[(i + 1) % n])
            } else if i == 0 {
                (vertices[0], vertices[1])
            } else if i == n - 1 {
                (vertices[n - 2], vertices[n - 1])
            } else {
                (vertices[i - 1], vertices[i + 1])
            };
            (b - a).normalized()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_roundtrip() {
        let c = build_curve(
            &CurveFamily::Circle {
                radius: 1.0,
                center: [0.0, 0.0],
            },
            256,
        )
        .expect("builds");
        assert!(c.is_closed());
        assert!((c.arclength() - TAU).abs() < 1e-4, "phi {}", c.arclength());
        // Segments equal to each other within 1e-6 relative.
        let v = c.vertices();
        let lengths: Vec<f64> = (0..v.len())
            .map(|i| v[i].dist(v[(i + 1) % v.len()]))
            .collect();
        let lo = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = lengths.iter().cloned().fold(0.0, f64::max);
        assert!((hi - lo) / lo < 1e-6, "segment spread {lo}..{hi}");
        // Tangents unit and orthogonal to normals.
        for u in [0.0, 0.13, 0.5, 0.99] {
            let t = c.tangent(u);
            assert!((t.norm() - 1.0).abs() < 1e-12);
            assert!(t.dot(c.normal(u)).abs() < 1e-12);
        }
    }

    #[test]
    fn segment_is_open_unit_length() {
        let c = build_curve(
            &CurveFamily::Segment {
                from: [0.0, 0.0],
                to: [1.0, 0.0],
            },
            64,
        )
        .expect("builds");
        assert!(!c.is_closed());
        assert!((c.arclength() - 1.0).abs() < 1e-12);
        assert_eq!(c.start(), Point2::new(0.0, 0.0));
        assert!(c.end().dist(Point2::new(1.0, 0.0)) < 1e-9);
    }

    #[test]
    fn ellipse_perimeter_matches_quadrature_oracle() {
        let (a, b) = (2.0, 1.0);
        let c = build_curve(
            &CurveFamily::Ellipse {
                a,
                b,
                center: [0.0, 0.0],
            },
            512,
        )
        .expect("builds");
        // Adaptive-step quadrature of |f'(t)| via fine Simpson sums.
        let n = 1 << 16;
        let speed = |t: f64| {
            let dx = -a * TAU * (TAU * t).sin();
            let dy = b * TAU * (TAU * t).cos();
            dx.hypot(dy)
        };
        let mut sum = 0.0;
        for k in 0..n {
            let t0 = k as f64 / n as f64;
            let t1 = (k as f64 + 0.5) / n as f64;
            let t2 = (k + 1) as f64 / n as f64;
            sum += (speed(t0) + 4.0 * speed(t1) + speed(t2)) / (6.0 * n as f64);
        }
        assert!(
            (c.arclength() - sum).abs() < 1e-4,
            "polyline {} vs quadrature {}",
            c.arclength(),
            sum
        );
        // Segment equality holds even where curvature varies.
        let v = c.vertices();
        let lengths: Vec<f64> = (0..v.len())
            .map(|i| v[i].dist(v[(i + 1) % v.len()]))
            .collect();
        let lo = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = lengths.iter().cloned().fold(0.0, f64::max);
        assert!((hi - lo) / lo < 1e-6, "segment spread {lo}..{hi}");
    }

    #[test]
    fn self_intersecting_user_polyline_rejected() {
        let family = CurveFamily::UserPolyline {
            vertices: vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]],
            closed: true,
        };
        assert!(matches!(build_curve(&family, 64), Err(Error::NotSimple)));
    }

    #[test]
    fn low_resolution_rejected() {
        let family = CurveFamily::Circle {
            radius: 1.0,
            center: [0.0, 0.0],
        };
        assert!(build_curve(&family, 8).is_err());
    }

    #[test]
    fn nearest_projects_onto_curve() {
        let c = build_curve(
            &CurveFamily::Circle {
                radius: 1.0,
                center: [0.0, 0.0],
            },
            256,
        )
        .expect("builds");
        let (d, u) = c.nearest(Point2::new(2.0, 0.0));
        assert!((d - 1.0).abs() < 1e-4);
        let foot = c.eval(u);
        assert!(foot.dist(Point2::new(1.0, 0.0)) < 1e-2);
    }
}
