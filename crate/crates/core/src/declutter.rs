//! Clutter removal: a kernel density estimate over the sample, thresholded at
//! twice the uniform clutter density, approximates the Bayes classifier that
//! separates filament points from uniform background.

use crate::error::{Error, Result};
use crate::geom::{Point2, PointGrid, Rect};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bandwidth {
    /// `n^(-1/6)` times the mean marginal standard deviation.
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    Filament,
    Clutter,
}

/// Fitted declutterer: an exact-sum KDE with a compactly supported biweight
/// kernel, grid-pruned by the kernel radius, against the uniform density
/// `1/V` of the clutter region.
#[derive(Debug, Clone)]
pub struct Declutterer {
    grid: PointGrid,
    n: usize,
    bandwidth: f64,
    q0: f64,
    region: Rect,
}

impl Declutterer {
    /// Fit on all sample points. The clutter region defaults to the data
    /// bounding box inflated by 5% when not supplied.
    pub fn fit(points: &[Point2], clutter_region: Option<Rect>, bandwidth: Bandwidth) -> Result<Self> {
        if points.len() < 20 {
            return Err(Error::InvalidInput(format!(
                "declutter fit needs n >= 20, got {}",
                points.len()
            )));
        }
        let n = points.len() as f64;
        let mean = points.iter().fold(Point2::default(), |a, p| a + *p) / n;
        let var = points.iter().fold(Point2::default(), |a, p| {
            a + Point2::new((p.x - mean.x).powi(2), (p.y - mean.y).powi(2))
        }) / n;
        let sd = Point2::new(var.x.sqrt(), var.y.sqrt());
        if sd.x + sd.y <= 0.0 {
            return Err(Error::InvalidInput(
                "degenerate sample: all points identical".into(),
            ));
        }
        let h = match bandwidth {
            Bandwidth::Value(v) if v > 0.0 => v,
            Bandwidth::Value(v) => {
                return Err(Error::InvalidInput(format!("bandwidth {v} must be > 0")))
            }
            Bandwidth::Auto => n.powf(-1.0 / 6.0) * 0.5 * (sd.x + sd.y),
        };
        let region = clutter_region.unwrap_or_else(|| {
            let bbox = Rect::bounding(points).expect("nonempty");
            bbox.inflate(0.05 * bbox.diameter())
        });
        if !(region.area() > 0.0) {
            return Err(Error::InvalidInput("clutter region has zero area".into()));
        }
        Ok(Self {
            grid: PointGrid::with_cell(points.to_vec(), h),
            n: points.len(),
            bandwidth: h,
            q0: 1.0 / region.area(),
            region,
        })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn clutter_density(&self) -> f64 {
        self.q0
    }

    pub fn region(&self) -> Rect {
        self.region
    }

    /// KDE value at `y`: exact sum of biweight kernels over all points within
    /// the bandwidth radius.
    pub fn density(&self, y: Point2) -> f64 {
        let h = self.bandwidth;
        // Biweight kernel normalization: integral of (1 - u^2)^2 over the
        // unit disk is pi/3.
        let scale = 3.0 / (std::f64::consts::PI * h * h * self.n as f64);
        let mut acc = 0.0;
        self.grid.for_each_within(y, h, |_, d| {
            let u = d / h;
            let w = 1.0 - u * u;
            acc += w * w;
        });
        acc * scale
    }

    /// Threshold decision: filament where the mixture density reaches twice
    /// the uniform clutter density.
    pub fn classify(&self, y: Point2) -> Label {
        if self.density(y) >= 2.0 * self.q0 {
            Label::Filament
        } else {
            Label::Clutter
        }
    }

    pub fn classify_all(&self, points: &[Point2]) -> Vec<Label> {
        points.iter().map(|p| self.classify(*p)).collect()
    }

    /// Monte-Carlo integral of the KDE over `region` (sanity: close to 1 when
    /// the region covers the data hull plus a bandwidth).
    pub fn mc_integral(&self, region: Rect, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut acc = 0.0;
        for _ in 0..samples {
            let p = Point2::new(
                region.min.x + rng.gen::<f64>() * region.width(),
                region.min.y + rng.gen::<f64>() * region.height(),
            );
            acc += self.density(p);
        }
        acc / samples as f64 * region.area()
    }
}
