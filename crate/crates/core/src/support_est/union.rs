//! The ball union: data points, radius, spatial hash, connected components.

use crate::error::{Error, Result};
use crate::geom::{Point2, PointGrid, Rect};
use serde::{Deserialize, Serialize};

/// How the ball radius is chosen.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum EpsilonMethod {
    /// The maximal nearest-neighbor distance over the sample. The practical
    /// default.
    NnMax,
    /// `C * (log n / n)^(1/(2+alpha))`.
    RateFormula { c: f64, alpha: f64 },
}

/// Default constant for the rate formula, slightly above sqrt(8/pi).
pub const RATE_FORMULA_DEFAULT_C: f64 = 1.6;

/// Largest nearest-neighbor distance over the point set.
pub fn max_nearest_neighbor_distance(points: &[Point2]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidInput(
            "nearest-neighbor radius needs n >= 2".into(),
        ));
    }
    let grid = PointGrid::new(points.to_vec());
    let mut worst = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        let (_, d) = grid
            .nearest_excluding(*p, Some(i))
            .expect("at least two points");
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Ball radius by the chosen method.
pub fn select_epsilon(points: &[Point2], method: EpsilonMethod) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidInput("select_epsilon needs n >= 2".into()));
    }
    match method {
        EpsilonMethod::NnMax => max_nearest_neighbor_distance(points),
        EpsilonMethod::RateFormula { c, alpha } => {
            let n = points.len() as f64;
            Ok(c * (n.ln() / n).powf(1.0 / (2.0 + alpha)))
        }
    }
}

/// Union of equal-radius balls around the data points, with a spatial hash
/// (cell size epsilon) and connected components by chained overlap.
#[derive(Debug, Clone)]
pub struct BallUnion {
    centers: Vec<Point2>,
    epsilon: f64,
    grid: PointGrid,
    component: Vec<u32>,
    component_count: usize,
}

impl BallUnion {
    /// Exact duplicate centers are dropped: coincident circles coincide and
    /// would otherwise confuse the angular-cover bookkeeping.
    pub fn build(points: &[Point2], epsilon: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        if !(epsilon > 0.0) {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        let mut centers: Vec<Point2> = Vec::with_capacity(points.len());
        {
            let mut seen = std::collections::HashSet::new();
            for p in points {
                if !p.is_finite() {
                    return Err(Error::InvalidInput("non-finite data point".into()));
                }
                if seen.insert((p.x.to_bits(), p.y.to_bits())) {
                    centers.push(*p);
                }
            }
        }
        let grid = PointGrid::with_cell(centers.clone(), epsilon);

        // Union-find over strictly overlapping pairs.
        let mut parent: Vec<u32> = (0..centers.len() as u32).collect();
        fn find(parent: &mut [u32], i: u32) -> u32 {
            let mut root = i;
            while parent[root as usize] != root {
                root = parent[root as usize];
            }
            let mut cur = i;
            while parent[cur as usize] != root {
                let next = parent[cur as usize];
                parent[cur as usize] = root;
                cur = next;
            }
            root
        }
        for (i, p) in centers.iter().enumerate() {
            grid.for_each_within(*p, 2.0 * epsilon, |j, d| {
                if j > i && d < 2.0 * epsilon {
                    let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j as u32));
                    if a != b {
                        parent[a as usize] = b;
                    }
                }
            });
        }
        let mut component = vec![u32::MAX; centers.len()];
        let mut component_count = 0;
        for i in 0..centers.len() as u32 {
            let root = find(&mut parent, i);
            if component[root as usize] == u32::MAX {
                component[root as usize] = component_count as u32;
                component_count += 1;
            }
            component[i as usize] = component[root as usize];
        }

        Ok(Self {
            centers,
            epsilon,
            grid,
            component,
            component_count,
        })
    }

    pub fn centers(&self) -> &[Point2] {
        &self.centers
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn grid(&self) -> &PointGrid {
        &self.grid
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn component_of(&self, ball: usize) -> u32 {
        self.component[ball]
    }

    /// Distance from `y` to the nearest ball center.
    pub fn nearest_center_dist(&self, y: Point2) -> f64 {
        self.grid.nearest_dist(y).expect("union is nonempty")
    }

    /// Membership in the closed union.
    pub fn contains(&self, y: Point2) -> bool {
        self.nearest_center_dist(y) <= self.epsilon
    }

    /// Bounding box of the union (center bounds inflated by epsilon).
    pub fn bounding_box(&self) -> Rect {
        Rect::bounding(&self.centers)
            .expect("union is nonempty")
            .inflate(self.epsilon)
    }

    /// Balls (by index) whose center lies within `radius` of `y`.
    pub fn balls_within(&self, y: Point2, radius: f64, f: impl FnMut(usize, f64)) {
        self.grid.for_each_within(y, radius, f);
    }
}

/// Distance from `y` to the boundary of the union. Outside the union this is
/// the nearest-center distance minus epsilon; inside it is the exact minimum
/// over boundary arcs.
pub fn distance_to_boundary(
    union: &BallUnion,
    arrangement: &super::BoundaryArrangement,
    y: Point2,
) -> f64 {
    let dc = union.nearest_center_dist(y);
    if dc > union.epsilon() {
        dc - union.epsilon()
    } else {
        arrangement.distance(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::TAU;

    #[test]
    fn nn_max_on_simple_configurations() {
        let two = vec![Point2::new(0.0, 0.0), Point2::new(0.7, 0.0)];
        assert!((select_epsilon(&two, EpsilonMethod::NnMax).expect("ok") - 0.7).abs() < 1e-15);
        let three = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
        ];
        assert!((select_epsilon(&three, EpsilonMethod::NnMax).expect("ok") - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rate_formula_value() {
        let pts: Vec<Point2> = (0..1000)
            .map(|k| Point2::new(k as f64, 0.0))
            .collect();
        let eps = select_epsilon(
            &pts,
            EpsilonMethod::RateFormula {
                c: 1.0,
                alpha: 0.5,
            },
        )
        .expect("ok");
        let expected = (1000f64.ln() / 1000.0).powf(0.4);
        assert!((eps - expected).abs() < 1e-12);
        assert!((eps - 0.1367).abs() < 5e-4, "eps {eps}");
    }

    #[test]
    fn component_counting() {
        let one = BallUnion::build(&[Point2::new(0.0, 0.0)], 0.5).expect("ok");
        assert_eq!(one.component_count(), 1);

        let two_far = BallUnion::build(
            &[Point2::new(0.0, 0.0), Point2::new(3.0, 0.0)],
            1.0,
        )
        .expect("ok");
        assert_eq!(two_far.component_count(), 2);

        // 500 points on a circle with nn-max epsilon chain into one component.
        let pts: Vec<Point2> = (0..500)
            .map(|k| Point2::from_angle(k as f64 / 500.0 * TAU))
            .collect();
        let eps = select_epsilon(&pts, EpsilonMethod::NnMax).expect("ok");
        let union = BallUnion::build(&pts, eps).expect("ok");
        // Oracle: direct chained-overlap check says one component because
        // consecutive points are exactly nn-max apart (< 2 eps).
        assert_eq!(union.component_count(), 1);
    }

    #[test]
    fn contains_matches_exhaustive_oracle() {
        let mut state = 5u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let pts: Vec<Point2> = (0..400)
            .map(|_| Point2::new(next() * 2.0 - 1.0, next() * 2.0 - 1.0))
            .collect();
        let eps = 0.07;
        let union = BallUnion::build(&pts, eps).expect("ok");
        for _ in 0..1000 {
            let y = Point2::new(next() * 2.4 - 1.2, next() * 2.4 - 1.2);
            let brute = pts.iter().map(|c| c.dist(y)).fold(f64::INFINITY, f64::min) <= eps;
            assert_eq!(union.contains(y), brute);
        }
    }
}
