//! The empirical distance-transform estimator: the noise level is the maximum
//! of `d(y, boundary)` over the estimated support, attained near the filament;
//! the superlevel region within `delta` of that maximum is the fitted set.

use crate::error::{Error, Result};
use crate::geom::{Point2, Rect};
use crate::model::SupportModel;
use crate::support_est::{BallUnion, BoundaryArrangement};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Result of the EDT stage: the estimated noise level, its maximizer, the
/// threshold offset, and the materialized superlevel region.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdtEstimate {
    pub sigma_hat: f64,
    pub y_hat: Point2,
    pub delta: f64,
    pub epsilon: f64,
    pub grid_step: f64,
    pub region_points: Vec<Point2>,
}

/// Maximize `arr.distance` over the support given by `contains`, by compass
/// pattern search from every start, with step halving down to `final_step`.
pub fn maximize_edt(
    arr: &BoundaryArrangement,
    contains: &(dyn Fn(Point2) -> bool + Sync),
    starts: &[Point2],
    initial_step: f64,
    final_step: f64,
) -> (f64, Point2) {
    let mut best = (f64::NEG_INFINITY, Point2::default());
    for &start in starts {
        if !contains(start) {
            continue;
        }
        let mut p = start;
        let mut value = arr.distance(p);
        let mut step = initial_step;
        let mut evals = 0usize;
        while step >= final_step && evals < 4000 {
            let mut moved = false;
            let mut local_best = (value, p);
            for dir in [
                Point2::new(step, 0.0),
                Point2::new(-step, 0.0),
                Point2::new(0.0, step),
                Point2::new(0.0, -step),
            ] {
                let q = p + dir;
                evals += 1;
                if contains(q) {
                    let v = arr.distance(q);
                    if v > local_best.0 {
                        local_best = (v, q);
                        moved = true;
                    }
                }
            }
            if moved {
                value = local_best.0;
                p = local_best.1;
            } else {
                step *= 0.5;
            }
        }
        if value > best.0 {
            best = (value, p);
        }
    }
    best
}

/// Estimate the noise level: the maximum of the empirical EDT over the ball
/// union, sought from every data point plus a coarse grid.
pub fn estimate_sigma(union: &BallUnion, arr: &BoundaryArrangement) -> (f64, Point2) {
    let mut starts: Vec<Point2> = union.centers().to_vec();
    let bbox = union.bounding_box();
    let gn = 32;
    for iy in 0..gn {
        for ix in 0..gn {
            starts.push(Point2::new(
                bbox.min.x + bbox.width() * (ix as f64 + 0.5) / gn as f64,
                bbox.min.y + bbox.height() * (iy as f64 + 0.5) / gn as f64,
            ));
        }
    }
    let contains = |y: Point2| union.contains(y);
    maximize_edt(arr, &contains, &starts, union.epsilon() / 2.0, 1e-6)
}

/// Materialize the superlevel region `{y : contains(y), d(y, boundary) >=
/// sigma_hat - delta}` on a uniform grid over `bbox`. Membership stays exactly
/// recheckable through [`membership`].
#[allow(clippy::too_many_arguments)]
pub fn materialize_region(
    arr: &BoundaryArrangement,
    contains: &(dyn Fn(Point2) -> bool + Sync),
    bbox: Rect,
    sigma_hat: f64,
    y_hat: Point2,
    epsilon: f64,
    delta: f64,
    grid_step: f64,
) -> Result<EdtEstimate> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidInput("delta must be >= 0".into()));
    }
    if !(grid_step > 0.0) {
        return Err(Error::InvalidInput("grid_step must be > 0".into()));
    }
    let nx = (bbox.width() / grid_step).ceil() as usize + 1;
    let ny = (bbox.height() / grid_step).ceil() as usize + 1;
    let threshold = sigma_hat - delta;
    // Rows are independent; results are concatenated in grid order, so the
    // outcome is deterministic regardless of scheduling.
    let region_points: Vec<Point2> = (0..ny)
        .into_par_iter()
        .map(|iy| {
            let mut row = Vec::new();
            let y = bbox.min.y + iy as f64 * grid_step;
            for ix in 0..nx {
                let p = Point2::new(bbox.min.x + ix as f64 * grid_step, y);
                if contains(p) && arr.distance(p) >= threshold {
                    row.push(p);
                }
            }
            row
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    if region_points.is_empty() {
        return Err(Error::EmptyEdtRegion);
    }
    Ok(EdtEstimate {
        sigma_hat,
        y_hat,
        delta,
        epsilon,
        grid_step,
        region_points,
    })
}

/// Full EDT stage on an estimated support: estimate sigma, then materialize
/// the region at the given threshold offset and resolution.
pub fn edt_region(
    union: &BallUnion,
    arr: &BoundaryArrangement,
    delta: f64,
    grid_step: f64,
) -> Result<EdtEstimate> {
    let (sigma_hat, y_hat) = estimate_sigma(union, arr);
    let contains = |y: Point2| union.contains(y);
    materialize_region(
        arr,
        &contains,
        union.bounding_box(),
        sigma_hat,
        y_hat,
        union.epsilon(),
        delta,
        grid_step,
    )
}

/// Exact membership recheck for a point against an EDT estimate.
pub fn membership(
    arr: &BoundaryArrangement,
    contains: &dyn Fn(Point2) -> bool,
    est: &EdtEstimate,
    y: Point2,
) -> bool {
    contains(y) && arr.distance(y) >= est.sigma_hat - est.delta
}

/// Comparison of the empirical EDT against the true model EDT.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdtCheckReport {
    /// `max |empirical - true|` over the sampled points.
    pub sup_difference: f64,
    /// Hausdorff distance between fine samplings of the true and estimated
    /// boundaries.
    pub measured_boundary_dh: f64,
}

/// Check `sup_y |empirical(y) - true(y)|` over the given sample points
/// against the measured boundary error (the former is bounded by the latter).
pub fn edt_lipschitz_check(
    arr: &BoundaryArrangement,
    model: &SupportModel,
    samples: &[Point2],
    boundary_spacing: f64,
) -> Result<EdtCheckReport> {
    if samples.is_empty() {
        return Err(Error::EmptySet);
    }
    let sup_difference = samples
        .iter()
        .map(|&y| (arr.distance(y) - model.true_edt(y)).abs())
        .fold(0.0, f64::max);
    let truth = model.boundary_samples(boundary_spacing);
    let est = arr.sample_all(boundary_spacing);
    let measured_boundary_dh = crate::geom::hausdorff_distance(&truth, &est)?;
    Ok(EdtCheckReport {
        sup_difference,
        measured_boundary_dh,
    })
}

/// Max violation of 1-Lipschitz continuity of the empirical EDT over point
/// pairs (nonpositive when the property holds).
pub fn lipschitz_violation(arr: &BoundaryArrangement, pairs: &[(Point2, Point2)]) -> f64 {
    pairs
        .iter()
        .map(|&(a, b)| (arr.distance(a) - arr.distance(b)).abs() - a.dist(b))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Arc;
    use crate::support_est::boundary;

    fn annulus_arrangement() -> BoundaryArrangement {
        BoundaryArrangement::from_loops(vec![
            vec![Arc::full(Point2::new(0.0, 0.0), 1.2)],
            vec![Arc::full(Point2::new(0.0, 0.0), 0.8)],
        ])
    }

    fn annulus_contains(y: Point2) -> bool {
        let r = y.norm();
        (0.8..=1.2).contains(&r)
    }

    #[test]
    fn single_ball_sigma_is_epsilon_at_center() {
        let union = BallUnion::build(&[Point2::new(0.3, 0.1)], 0.25).expect("ok");
        let arr = boundary(&union).expect("ok");
        let (sigma_hat, y_hat) = estimate_sigma(&union, &arr);
        assert!((sigma_hat - 0.25).abs() < 1e-5, "sigma_hat {sigma_hat}");
        assert!(y_hat.dist(Point2::new(0.3, 0.1)) < 1e-4);
    }

    #[test]
    fn synthetic_annulus_sigma_and_maximizer() {
        let arr = annulus_arrangement();
        let mut starts = Vec::new();
        for k in 0..64 {
            starts.push(Point2::from_angle(k as f64 / 64.0 * crate::geom::TAU) * 0.85);
        }
        let (sigma_hat, y_hat) = maximize_edt(&arr, &annulus_contains, &starts, 0.1, 1e-7);
        assert!((sigma_hat - 0.2).abs() < 1e-4, "sigma_hat {sigma_hat}");
        assert!((y_hat.norm() - 1.0).abs() < 1e-4, "maximizer radius {}", y_hat.norm());
    }

    #[test]
    fn annulus_region_hugs_the_ridge() {
        let arr = annulus_arrangement();
        // Grid aligned so that ridge points (radius 1) land on grid nodes.
        let bbox = Rect::new(Point2::new(-1.2, -1.2), Point2::new(1.2, 1.2));
        let (sigma_hat, y_hat) = maximize_edt(
            &arr,
            &annulus_contains,
            &[Point2::new(0.9, 0.0), Point2::new(-1.1, 0.0)],
            0.1,
            1e-9,
        );
        let est = materialize_region(
            &arr,
            &annulus_contains,
            bbox,
            sigma_hat,
            y_hat,
            0.05,
            0.0,
            0.05,
        )
        .expect("nonempty at aligned grid");
        for p in &est.region_points {
            assert!(
                (p.norm() - 1.0).abs() <= est.grid_step + 1e-9,
                "region point off ridge: {:?}",
                p
            );
        }
    }

    #[test]
    fn membership_matches_direct_recomputation() {
        let arr = annulus_arrangement();
        let est = EdtEstimate {
            sigma_hat: 0.2,
            y_hat: Point2::new(1.0, 0.0),
            delta: 0.05,
            epsilon: 0.05,
            grid_step: 0.02,
            region_points: vec![],
        };
        let mut state = 3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let y = Point2::new(next() * 2.6 - 1.3, next() * 2.6 - 1.3);
            let direct = annulus_contains(y) && arr.distance(y) >= est.sigma_hat - est.delta;
            assert_eq!(membership(&arr, &annulus_contains, &est, y), direct);
        }
    }

    #[test]
    fn dilated_boundary_bounds_sup_difference() {
        // Estimated boundary = true boundary dilated by exactly t: the sup
        // difference of the distance transforms is at most t.
        let t = 0.03;
        let outer = BoundaryArrangement::from_loops(vec![
            vec![Arc::full(Point2::new(0.0, 0.0), 1.2 + t)],
            vec![Arc::full(Point2::new(0.0, 0.0), 0.8 - t)],
        ]);
        let reference = annulus_arrangement();
        let mut sup = 0.0f64;
        for k in 0..2000 {
            let r = 0.7 + 0.6 * (k as f64 / 2000.0);
            let y = Point2::from_angle(k as f64) * r;
            sup = sup.max((outer.distance(y) - reference.distance(y)).abs());
        }
        assert!(sup <= t + 1e-9, "sup difference {sup} vs dilation {t}");
    }

    #[test]
    fn lipschitz_property_on_random_pairs() {
        let arr = annulus_arrangement();
        let mut state = 13u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let pairs: Vec<(Point2, Point2)> = (0..1000)
            .map(|_| {
                (
                    Point2::new(next() * 3.0 - 1.5, next() * 3.0 - 1.5),
                    Point2::new(next() * 3.0 - 1.5, next() * 3.0 - 1.5),
                )
            })
            .collect();
        assert!(lipschitz_violation(&arr, &pairs) <= 1e-12);
    }
}
