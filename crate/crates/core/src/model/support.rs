//! The support of the sampling distribution: the tube of radius sigma around
//! the filament, its boundary pieces, and the analytic Euclidean distance
//! transform. The filament is exactly the medial axis of this set whenever
//! sigma is below the curve thickness.

use super::{thickness, FilamentCurve, ThicknessReport};
use crate::error::{Error, Result};
use crate::geom::{Arc, Point2};

/// Ground-truth support `S`: the union of sigma-balls along the curve.
/// Holds precomputed offset polylines for the two boundary sides and, for
/// open curves, the two semicircular end-cap arcs.
#[derive(Debug, Clone)]
pub struct SupportModel {
    curve: FilamentCurve,
    sigma: f64,
    thickness: ThicknessReport,
    side0: Vec<Point2>,
    side1: Vec<Point2>,
    caps: Option<[Arc; 2]>,
}

impl SupportModel {
    /// Requires `sigma < Delta(curve)`; open curves additionally need their
    /// endpoints separated by more than `2*sigma` so the end caps are
    /// disjoint and the filament equals the medial axis.
    pub fn new(curve: FilamentCurve, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidInput("sigma must be positive".into()));
        }
        let report = thickness(&curve)?;
        if sigma >= report.delta {
            return Err(Error::ThicknessViolated {
                sigma,
                delta: report.delta,
            });
        }
        if !curve.is_closed() {
            let gap = curve.start().dist(curve.end());
            if sigma >= gap / 2.0 {
                return Err(Error::InvalidInput(format!(
                    "open curve endpoints too close: sigma {} >= |f(1)-f(0)|/2 = {}",
                    sigma,
                    gap / 2.0
                )));
            }
        }

        let n = curve.vertices().len();
        let denom = if curve.is_closed() { n } else { n - 1 };
        let mut side0 = Vec::with_capacity(n);
        let mut side1 = Vec::with_capacity(n);
        for k in 0..n {
            let u = k as f64 / denom as f64;
            let p = curve.eval(u);
            let normal = curve.normal(u);
            side0.push(p + normal * sigma);
            side1.push(p - normal * sigma);
        }
        let caps = if curve.is_closed() {
            None
        } else {
            // Cap at f(0) faces backwards (-T), at f(1) forwards (+T); each is
            // the half circle between the two fiber endpoints.
            let t0 = curve.tangent(0.0);
            let t1 = curve.tangent(1.0);
            let start0 = t0.rot90().angle(); // +N(0)
            let start1 = (-t1.rot90()).angle(); // -N(1)
            Some([
                Arc::new(curve.start(), sigma, start0, std::f64::consts::PI),
                Arc::new(curve.end(), sigma, start1, std::f64::consts::PI),
            ])
        };

        Ok(Self {
            curve,
            sigma,
            thickness: report,
            side0,
            side1,
            caps,
        })
    }

    pub fn curve(&self) -> &FilamentCurve {
        &self.curve
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn delta(&self) -> f64 {
        self.thickness.delta
    }

    pub fn thickness_report(&self) -> &ThicknessReport {
        &self.thickness
    }

    /// Offset boundary polylines (side 0 is the +normal side).
    pub fn boundary_sides(&self) -> (&[Point2], &[Point2]) {
        (&self.side0, &self.side1)
    }

    pub fn caps(&self) -> Option<&[Arc; 2]> {
        self.caps.as_ref()
    }

    /// Whether `y` lies in the support (within sigma of the curve).
    pub fn contains(&self, y: Point2) -> bool {
        self.curve.nearest(y).0 <= self.sigma
    }

    /// Exact distance from `y` to the support boundary. For `y` in the
    /// support this is `sigma - d(y, filament)`; outside it is
    /// `d(y, filament) - sigma`. Both cases collapse to one absolute value.
    pub fn true_edt(&self, y: Point2) -> f64 {
        (self.curve.nearest(y).0 - self.sigma).abs()
    }

    /// Fiber through `f(u)`: the normal segment of half-length sigma.
    pub fn fiber(&self, u: f64) -> (Point2, Point2) {
        let p = self.curve.eval(u);
        let n = self.curve.normal(u);
        (p + n * self.sigma, p - n * self.sigma)
    }

    /// Dense sampling of the full boundary (both sides plus caps when open),
    /// spaced at most `spacing` apart.
    pub fn boundary_samples(&self, spacing: f64) -> Vec<Point2> {
        assert!(spacing > 0.0);
        let mut out = Vec::new();
        for side in [&self.side0, &self.side1] {
            let closed = self.curve.is_closed();
            let count = side.len();
            let segs = if closed { count } else { count - 1 };
            for i in 0..segs {
                let a = side[i];
                let b = side[(i + 1) % count];
                let steps = (a.dist(b) / spacing).ceil().max(1.0) as usize;
                for k in 0..steps {
                    out.push(a.lerp(b, k as f64 / steps as f64));
                }
            }
            if !closed {
                out.push(*side.last().expect("nonempty"));
            }
        }
        if let Some(caps) = &self.caps {
            for arc in caps {
                let steps = (arc.length() / spacing).ceil().max(2.0) as usize;
                for k in 0..=steps {
                    out.push(arc.point_at_arclength(arc.length() * k as f64 / steps as f64));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::hausdorff_distance;
    use crate::model::{build_curve, CurveFamily};

    fn circle_model(radius: f64, sigma: f64) -> SupportModel {
        let curve = build_curve(
            &CurveFamily::Circle {
                radius,
                center: [0.0, 0.0],
            },
            512,
        )
        .expect("builds");
        SupportModel::new(curve, sigma).expect("valid model")
    }

    #[test]
    fn annulus_edt_values() {
        let model = circle_model(1.0, 0.2);
        // Outside the annulus at radius 1.1+0.2: boundary distance 0.1... the
        // outer boundary sits at radius 1.2, so radius 1.1 is inside with
        // distance 0.1 to it.
        let y = Point2::new(1.1, 0.0);
        assert!((model.true_edt(y) - 0.1).abs() < 1e-6);
        // On the filament the EDT equals sigma.
        let on = model.curve().eval(0.37);
        assert!((model.true_edt(on) - 0.2).abs() < 1e-9);
        // Far outside.
        let far = Point2::new(3.0, 0.0);
        assert!((model.true_edt(far) - 1.8).abs() < 1e-4);
    }

    #[test]
    fn interior_identity_and_dense_boundary_oracle() {
        let model = circle_model(1.0, 0.2);
        let boundary = model.boundary_samples(1e-3);
        let mut state = 7u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut tested = 0;
        while tested < 200 {
            let y = Point2::new(next() * 2.6 - 1.3, next() * 2.6 - 1.3);
            if !model.contains(y) {
                continue;
            }
            tested += 1;
            // Identity: d(y, M(S)) + EDT(y) = sigma.
            let d_medial = model.curve().nearest(y).0;
            assert!((d_medial + model.true_edt(y) - model.sigma()).abs() < 1e-6);
            // Dense-sampling oracle for the boundary distance.
            let oracle = boundary
                .iter()
                .map(|b| b.dist(y))
                .fold(f64::INFINITY, f64::min);
            assert!(
                (model.true_edt(y) - oracle).abs() < 2e-3,
                "edt {} vs oracle {}",
                model.true_edt(y),
                oracle
            );
        }
    }

    #[test]
    fn support_contains_matches_brute_force() {
        let model = circle_model(1.0, 0.15);
        let dense: Vec<Point2> = (0..100_000)
            .map(|k| model.curve().eval(k as f64 / 100_000.0))
            .collect();
        let mut state = 99u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let y = Point2::new(next() * 3.0 - 1.5, next() * 3.0 - 1.5);
            let brute = dense
                .iter()
                .map(|p| p.dist(y))
                .fold(f64::INFINITY, f64::min);
            // Skip points too close to the decision boundary for the oracle's
            // sampling resolution.
            if (brute - model.sigma()).abs() < 1e-4 {
                continue;
            }
            assert_eq!(model.contains(y), brute <= model.sigma());
        }
    }

    #[test]
    fn thickness_violation_rejected() {
        let curve = build_curve(
            &CurveFamily::Circle {
                radius: 0.5,
                center: [0.0, 0.0],
            },
            256,
        )
        .expect("builds");
        assert!(matches!(
            SupportModel::new(curve, 0.6),
            Err(Error::ThicknessViolated { .. })
        ));
    }

    #[test]
    fn open_curve_caps_and_endpoint_separation() {
        let curve = build_curve(
            &CurveFamily::Segment {
                from: [0.0, 0.0],
                to: [1.0, 0.0],
            },
            128,
        )
        .expect("builds");
        let model = SupportModel::new(curve, 0.15).expect("valid");
        let caps = model.caps().expect("open curve has caps");
        // The stadium boundary: distance from a cap sample to the expected
        // circle centers.
        for (arc, center) in caps.iter().zip([Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]) {
            assert!(arc.center.dist(center) < 1e-9);
            assert!((arc.radius - 0.15).abs() < 1e-12);
            assert!((arc.span() - std::f64::consts::PI).abs() < 1e-9);
        }
        // Cap arcs face outward: their midpoints are beyond the endpoints.
        let mid0 = caps[0].point_at_arclength(caps[0].length() / 2.0);
        assert!(mid0.x < -0.14, "cap 0 midpoint {:?}", mid0);
        let mid1 = caps[1].point_at_arclength(caps[1].length() / 2.0);
        assert!(mid1.x > 1.14, "cap 1 midpoint {:?}", mid1);

        // Too-close endpoints are rejected for open curves.
        let tight = build_curve(
            &CurveFamily::SineArc {
                from: [0.0, 0.0],
                to: [0.2, 0.0],
                amplitude: 0.4,
                cycles: 1.0,
            },
            256,
        )
        .expect("builds");
        assert!(SupportModel::new(tight, 0.15).is_err());
    }

    #[test]
    fn fibers_are_disjoint_for_sampled_parameters() {
        let model = circle_model(1.0, 0.3);
        let k = 60;
        let fibers: Vec<(Point2, Point2)> =
            (0..k).map(|i| model.fiber(i as f64 / k as f64)).collect();
        for i in 0..k {
            for j in (i + 1)..k {
                let (a, b) = fibers[i];
                let (c, d) = fibers[j];
                assert!(
                    !crate::geom::segments_intersect(a, b, c, d),
                    "fibers {i} and {j} intersect"
                );
            }
        }
    }

    #[test]
    fn boundary_samples_cover_offset_circles() {
        let model = circle_model(1.0, 0.2);
        let samples = model.boundary_samples(0.01);
        let outer: Vec<Point2> = (0..2000)
            .map(|k| Point2::from_angle(k as f64 / 2000.0 * crate::geom::TAU) * 1.2)
            .collect();
        let inner: Vec<Point2> = (0..2000)
            .map(|k| Point2::from_angle(k as f64 / 2000.0 * crate::geom::TAU) * 0.8)
            .collect();
        let mut reference = outer;
        reference.extend(inner);
        let d = hausdorff_distance(&reference, &samples).expect("ok");
        assert!(d < 5e-3, "boundary samples off by {d}");
    }
}
