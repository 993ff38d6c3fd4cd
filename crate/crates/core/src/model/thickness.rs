//! Curve thickness: the minimum circumradius over all triples of distinct
//! curve points. It is both the minimum global radius of curvature and the
//! largest radius of a ball that rolls freely along the curve.

use super::FilamentCurve;
use crate::error::{Error, Result};
use crate::geom::Point2;

/// Sentinel standing in for an infinite thickness (straight curves), so that
/// `sigma < Delta` checks stay plain comparisons.
pub const THICKNESS_INFINITE: f64 = 1e12;

/// Resolution of the brute-force triple scan; 200^3/6 triples stay cheap.
const BRUTE_RESOLUTION: usize = 200;

#[derive(Debug, Clone)]
pub struct ThicknessReport {
    /// Estimated thickness Delta.
    pub delta: f64,
    /// The triple of curve points achieving the minimal circumradius.
    pub lower_witness: [Point2; 3],
    /// Minimum radius of curvature alone (consecutive-triple circumradii).
    pub curvature_bound: f64,
}

/// Circumradius of the circle through three points; collinear or coincident
/// triples contribute the infinite sentinel.
pub fn circumradius(a: Point2, b: Point2, c: Point2) -> f64 {
    let la = b.dist(c);
    let lb = a.dist(c);
    let lc = a.dist(b);
    let area2 = (b - a).cross(c - a).abs();
    // The cross product carries roundoff of order 1e-16 * scale * side; treat
    // areas below a wide margin of that as collinear, otherwise roundoff in
    // near-coincident triples masquerades as large curvature.
    let scale = a.x.abs().max(a.y.abs()).max(b.x.abs()).max(b.y.abs()).max(c.x.abs()).max(c.y.abs()).max(1e-3);
    let max_side = la.max(lb).max(lc);
    if area2 <= 1e-11 * scale * max_side {
        return THICKNESS_INFINITE;
    }
    let r = la * lb * lc / (2.0 * area2);
    r.min(THICKNESS_INFINITE)
}

/// Thickness of a curve: brute force over all vertex triples at reduced
/// resolution, followed by a local golden-section refinement around the
/// minimizing triple. Reports both Delta and the pure-curvature bound.
pub fn thickness(curve: &FilamentCurve) -> Result<ThicknessReport> {
    if curve.vertices().len() < 3 {
        return Err(Error::InvalidInput(
            "thickness needs at least 3 vertices".into(),
        ));
    }

    // Curvature bound from consecutive triples at full resolution.
    let v = curve.vertices();
    let n = v.len();
    let consecutive = if curve.is_closed() { n } else { n - 2 };
    let mut curvature_bound = THICKNESS_INFINITE;
    for i in 0..consecutive {
        curvature_bound =
            curvature_bound.min(circumradius(v[i], v[(i + 1) % n], v[(i + 2) % n]));
    }

    // Brute force over all triples at reduced resolution. Triples are taken
    // at polyline vertices: marched vertices sit on the curve to ~1e-8, while
    // interpolated chord points are off by the sagitta, which circumradii
    // amplify quadratically at close spacing.
    let m = BRUTE_RESOLUTION.min(n);
    let strided: Vec<usize> = (0..m).map(|k| k * n / m).collect();
    let mut best = (THICKNESS_INFINITE, [0usize, 1, 2]);
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let r = circumradius(v[strided[i]], v[strided[j]], v[strided[k]]);
                if r < best.0 {
                    best = (r, [strided[i], strided[j], strided[k]]);
                }
            }
        }
    }

    let mut delta = best.0;
    let mut witness = [v[best.1[0]], v[best.1[1]], v[best.1[2]]];
    if best.0 < THICKNESS_INFINITE {
        let segs = curve.segment_count() as f64;
        let mut us = [
            best.1[0] as f64 / segs,
            best.1[1] as f64 / segs,
            best.1[2] as f64 / segs,
        ];
        let window = (n as f64 / m as f64) / segs;
        // Snap evaluation to the nearest vertex so every probed point lies on
        // the curve; coincident snaps degenerate and are skipped.
        let closed = curve.is_closed();
        let snap = move |u: f64| -> Point2 {
            let i = if closed {
                (u.rem_euclid(1.0) * segs).round() as usize % n
            } else {
                (u.clamp(0.0, 1.0) * segs).round() as usize
            };
            v[i.min(n - 1)]
        };
        let objective = |us: &[f64; 3]| {
            let p = [snap(us[0]), snap(us[1]), snap(us[2])];
            if p[0] == p[1] || p[1] == p[2] || p[0] == p[2] {
                return THICKNESS_INFINITE;
            }
            circumradius(p[0], p[1], p[2])
        };
        // Cyclic golden-section descent on each parameter.
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _round in 0..3 {
            for axis in 0..3 {
                let mut lo = us[axis] - window;
                let mut hi = us[axis] + window;
                if !curve.is_closed() {
                    lo = lo.max(0.0);
                    hi = hi.min(1.0);
                }
                let mut x1 = hi - phi * (hi - lo);
                let mut x2 = lo + phi * (hi - lo);
                let eval_at = |x: f64, us: &[f64; 3]| {
                    let mut trial = *us;
                    trial[axis] = x;
                    objective(&trial)
                };
                let mut f1 = eval_at(x1, &us);
                let mut f2 = eval_at(x2, &us);
                for _ in 0..24 {
                    if f1 <= f2 {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - phi * (hi - lo);
                        f1 = eval_at(x1, &us);
                    } else {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + phi * (hi - lo);
                        f2 = eval_at(x2, &us);
                    }
                }
                let x_best = if f1 <= f2 { x1 } else { x2 };
                if eval_at(x_best, &us) < objective(&us) {
                    us[axis] = x_best;
                }
            }
        }
        let refined = objective(&us);
        if refined < delta {
            delta = refined;
            witness = [snap(us[0]), snap(us[1]), snap(us[2])];
        }
    }

    // The curvature bound is itself a limit of triple circumradii.
    let delta = delta.min(curvature_bound);
    Ok(ThicknessReport {
        delta,
        lower_witness: witness,
        curvature_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_curve, CurveFamily};

    #[test]
    fn circle_thickness_is_radius() {
        let c = build_curve(
            &CurveFamily::Circle {
                radius: 1.0,
                center: [0.0, 0.0],
            },
            512,
        )
        .expect("builds");
        let report = thickness(&c).expect("ok");
        assert!((report.delta - 1.0).abs() < 1e-3, "delta {}", report.delta);
        assert!(report.delta <= report.curvature_bound);
    }

    #[test]
    fn segment_thickness_is_infinite_sentinel() {
        let c = build_curve(
            &CurveFamily::Segment {
                from: [0.0, 0.0],
                to: [1.0, 0.0],
            },
            64,
        )
        .expect("builds");
        let report = thickness(&c).expect("ok");
        assert_eq!(report.delta, THICKNESS_INFINITE);
        assert_eq!(report.curvature_bound, THICKNESS_INFINITE);
    }

    #[test]
    fn ellipse_thickness_matches_brute_force_and_curvature() {
        // Min radius of curvature of an ellipse is b^2/a at the ends of the
        // major axis; with no near self-intersection this is the thickness.
        let c = build_curve(
            &CurveFamily::Ellipse {
                a: 2.0,
                b: 1.0,
                center: [0.0, 0.0],
            },
            512,
        )
        .expect("builds");
        let report = thickness(&c).expect("ok");
        assert!(
            (report.delta - 0.5).abs() < 1e-2,
            "delta {} vs b^2/a = 0.5",
            report.delta
        );
        assert!(report.delta <= report.curvature_bound + 1e-12);
    }

    #[test]
    fn near_self_intersection_beats_curvature() {
        // A slowly growing spiral: the gap between consecutive windings is
        // 2*pi*growth = 0.05, so the thickness is about half the gap, while
        // the radius of curvature stays near r0 = 0.3.
        let growth = 0.05 / crate::geom::TAU;
        let c = build_curve(
            &CurveFamily::Spiral {
                center: [0.0, 0.0],
                r0: 0.3,
                growth,
                turns: 2.0,
            },
            512,
        )
        .expect("builds");
        let report = thickness(&c).expect("ok");
        assert!(
            report.delta < 0.04,
            "delta {} should reflect the 0.05 winding gap",
            report.delta
        );
        assert!(
            report.curvature_bound > 0.2,
            "curvature radius {} should stay near r0",
            report.curvature_bound
        );
        assert!(report.delta <= report.curvature_bound);
    }
}
