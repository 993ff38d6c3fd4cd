//! Dataset generation: points drawn as a curve position plus compact radial
//! noise, mixed with uniform background clutter.

use crate::error::{Error, Result};
use crate::geom::{Point2, Rect, TAU};
use crate::model::{thickness, FilamentCurve};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Label value marking background clutter; filament points carry their curve
/// index.
pub const CLUTTER_LABEL: i32 = -1;

/// Compact noise: planar density proportional to `(sigma - r)^beta` on the
/// disk of radius sigma. `beta = 0` is the uniform disk; larger beta decays
/// at the support edge. The induced boundary exponent is `alpha = beta + 1/2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub beta: f64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, beta: f64) -> Result<Self> {
        if !(sigma > 0.0) || !(beta >= 0.0) || !sigma.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "noise spec needs sigma > 0 and beta >= 0, got sigma={sigma}, beta={beta}"
            )));
        }
        Ok(Self { sigma, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.beta + 0.5
    }
}

const CDF_KNOTS: usize = 4096;

/// Draws radial offsets with density proportional to `r * (sigma - r)^beta`
/// (the planar density `(sigma-r)^beta` times the Jacobian), via a tabulated
/// inverse CDF with linear interpolation.
#[derive(Debug, Clone)]
pub struct NoiseSampler {
    spec: NoiseSpec,
    cdf: Vec<f64>,
}

impl NoiseSampler {
    pub fn new(spec: NoiseSpec) -> Self {
        let mut cdf = Vec::with_capacity(CDF_KNOTS);
        let mut acc = 0.0;
        let h = spec.sigma / (CDF_KNOTS - 1) as f64;
        let density = |r: f64| r * (spec.sigma - r).max(0.0).powf(spec.beta);
        cdf.push(0.0);
        for k in 1..CDF_KNOTS {
            let r0 = (k - 1) as f64 * h;
            let r1 = k as f64 * h;
            acc += 0.5 * (density(r0) + density(r1)) * h;
            cdf.push(acc);
        }
        let total = *cdf.last().expect("nonempty");
        for v in &mut cdf {
            *v /= total;
        }
        Self { spec, cdf }
    }

    pub fn spec(&self) -> NoiseSpec {
        self.spec
    }

    /// One planar offset: radius by inverse CDF, angle uniform.
    pub fn draw(&self, rng: &mut impl Rng) -> Point2 {
        let u: f64 = rng.gen();
        let radius = self.inverse_cdf(u);
        let theta: f64 = rng.gen::<f64>() * TAU;
        Point2::from_angle(theta) * radius
    }

    pub fn inverse_cdf(&self, u: f64) -> f64 {
        let h = self.spec.sigma / (CDF_KNOTS - 1) as f64;
        let i = self.cdf.partition_point(|&c| c < u);
        if i == 0 {
            return 0.0;
        }
        if i >= CDF_KNOTS {
            return self.spec.sigma;
        }
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
        ((i - 1) as f64 + t) * h
    }
}

/// Convenience wrapper matching the one-shot operation shape.
pub fn draw_noise(spec: NoiseSpec, rng: &mut impl Rng) -> Point2 {
    NoiseSampler::new(spec).draw(rng)
}

/// Arclength position density H on `[0,1]`: uniform, or the bounded
/// perturbation `h(u) = 1 + a*cos(2*pi*u)` with `|a| <= 0.5`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ArclengthDensity {
    Uniform,
    Cosine { a: f64 },
}

impl ArclengthDensity {
    pub fn validate(&self) -> Result<()> {
        match self {
            ArclengthDensity::Uniform => Ok(()),
            ArclengthDensity::Cosine { a } => {
                if a.abs() <= 0.5 {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!(
                        "cosine arclength density needs |a| <= 0.5, got {a}"
                    )))
                }
            }
        }
    }

    pub fn draw(&self, rng: &mut impl Rng) -> f64 {
        let v: f64 = rng.gen();
        match *self {
            ArclengthDensity::Uniform => v,
            ArclengthDensity::Cosine { a } => {
                // Invert F(u) = u + a*sin(2*pi*u)/(2*pi), strictly increasing
                // for |a| <= 0.5.
                let f = |u: f64| u + a * (TAU * u).sin() / TAU;
                let mut lo = 0.0;
                let mut hi = 1.0;
                for _ in 0..52 {
                    let mid = 0.5 * (lo + hi);
                    if f(mid) < v {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

/// Full sampling configuration for one dataset.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    /// Curves with mixture weights (weights must sum to 1).
    pub curves: Vec<(FilamentCurve, f64)>,
    pub h: ArclengthDensity,
    pub noise: NoiseSpec,
    pub n: usize,
    /// Filament fraction; points are clutter with probability `1 - eta`.
    pub eta: f64,
    pub clutter_region: Rect,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn single_curve(curve: FilamentCurve, noise: NoiseSpec, n: usize, seed: u64) -> Self {
        Self {
            curves: vec![(curve, 1.0)],
            h: ArclengthDensity::Uniform,
            noise,
            n,
            eta: 1.0,
            clutter_region: Rect::new(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0)),
            seed,
        }
    }
}

/// A drawn dataset with per-point provenance.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub points: Vec<Point2>,
    /// Curve index, or [`CLUTTER_LABEL`] for background points.
    pub labels: Vec<i32>,
    pub seed: u64,
}

impl LabeledSample {
    pub fn filament_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l != CLUTTER_LABEL).count()
    }
}

/// Draw `n` labeled points: with probability eta a curve point (curve by
/// weight, arclength by H, offset by the radial noise), otherwise uniform
/// clutter. Deterministic given the seed.
pub fn sample(config: &SamplerConfig) -> Result<LabeledSample> {
    if config.curves.is_empty() {
        return Err(Error::InvalidInput("no curves configured".into()));
    }
    if !(0.0..=1.0).contains(&config.eta) {
        return Err(Error::InvalidInput(format!("eta {} not in [0,1]", config.eta)));
    }
    let weight_sum: f64 = config.curves.iter().map(|(_, w)| w).sum();
    if (weight_sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "curve weights sum to {weight_sum}, expected 1"
        )));
    }
    config.h.validate()?;
    for (curve, _) in &config.curves {
        let report = thickness(curve)?;
        if config.noise.sigma >= report.delta {
            return Err(Error::ThicknessViolated {
                sigma: config.noise.sigma,
                delta: report.delta,
            });
        }
    }

    let noise = NoiseSampler::new(config.noise);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut points = Vec::with_capacity(config.n);
    let mut labels = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let from_filament = config.eta >= 1.0 || rng.gen::<f64>() < config.eta;
        if from_filament {
            let pick: f64 = if config.curves.len() == 1 {
                0.0
            } else {
                rng.gen()
            };
            let mut acc = 0.0;
            let mut idx = config.curves.len() - 1;
            for (i, (_, w)) in config.curves.iter().enumerate() {
                acc += w;
                if pick < acc {
                    idx = i;
                    break;
                }
            }
            let u = config.h.draw(&mut rng);
            let base = config.curves[idx].0.eval(u);
            points.push(base + noise.draw(&mut rng));
            labels.push(idx as i32);
        } else {
            let x = config.clutter_region.min.x + rng.gen::<f64>() * config.clutter_region.width();
            let y = config.clutter_region.min.y + rng.gen::<f64>() * config.clutter_region.height();
            points.push(Point2::new(x, y));
            labels.push(CLUTTER_LABEL);
        }
    }
    Ok(LabeledSample {
        points,
        labels,
        seed: config.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_curve, CurveFamily, SupportModel};

    fn unit_circle() -> FilamentCurve {
        build_curve(
            &CurveFamily::Circle {
                radius: 1.0,
                center: [0.0, 0.0],
            },
            512,
        )
        .expect("builds")
    }

    #[test]
    fn noise_support_is_the_sigma_disk() {
        let spec = NoiseSpec::new(0.17, 1.3).expect("valid");
        let sampler = NoiseSampler::new(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5000 {
            assert!(sampler.draw(&mut rng).norm() <= 0.17 + 1e-12);
        }
    }

    #[test]
    fn uniform_disk_radial_cdf_for_beta_zero() {
        // beta = 0: radial CDF is (r/sigma)^2; KS statistic < 0.02 at n=1e4.
        let sigma = 0.5;
        let sampler = NoiseSampler::new(NoiseSpec::new(sigma, 0.0).expect("valid"));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000;
        let mut radii: Vec<f64> = (0..n).map(|_| sampler.draw(&mut rng).norm()).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let ks = radii
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let emp = (i + 1) as f64 / n as f64;
                let theory = (r / sigma).powi(2);
                (emp - theory).abs()
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.02, "KS statistic {ks}");
    }

    #[test]
    fn beta_two_matches_quadrature_cdf() {
        let sigma = 0.1;
        let beta = 2.0;
        let sampler = NoiseSampler::new(NoiseSpec::new(sigma, beta).expect("valid"));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10_000;
        let mut radii: Vec<f64> = (0..n).map(|_| sampler.draw(&mut rng).norm()).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        // Fine trapezoid quadrature of r*(sigma-r)^2, independent of the
        // sampler's table resolution.
        let grid = 100_001;
        let h = sigma / (grid - 1) as f64;
        let mut cum = vec![0.0];
        for k in 1..grid {
            let r0 = (k - 1) as f64 * h;
            let r1 = k as f64 * h;
            let f0 = r0 * (sigma - r0).powf(beta);
            let f1 = r1 * (sigma - r1).powf(beta);
            cum.push(cum[k - 1] + 0.5 * (f0 + f1) * h);
        }
        let total = *cum.last().expect("nonempty");
        let theory_cdf = |r: f64| {
            let x = ((r / h).floor() as usize).min(grid - 2);
            let frac = r / h - x as f64;
            (cum[x] + frac * (cum[x + 1] - cum[x])) / total
        };
        let ks = radii
            .iter()
            .enumerate()
            .map(|(i, r)| ((i + 1) as f64 / n as f64 - theory_cdf(*r)).abs())
            .fold(0.0, f64::max);
        assert!(ks < 0.02, "KS statistic {ks}");
    }

    #[test]
    fn eta_one_has_no_clutter_and_points_stay_in_support() {
        let curve = unit_circle();
        let noise = NoiseSpec::new(0.2, 0.0).expect("valid");
        let config = SamplerConfig::single_curve(curve.clone(), noise, 2000, 5);
        let drawn = sample(&config).expect("ok");
        assert_eq!(drawn.filament_count(), 2000);
        let model = SupportModel::new(curve, 0.2).expect("valid");
        for p in &drawn.points {
            assert!(model.contains(*p));
        }
    }

    #[test]
    fn identical_seeds_are_bit_exact() {
        let curve = unit_circle();
        let noise = NoiseSpec::new(0.1, 1.0).expect("valid");
        let mut config = SamplerConfig::single_curve(curve, noise, 500, 99);
        config.eta = 0.7;
        let a = sample(&config).expect("ok");
        let b = sample(&config).expect("ok");
        assert_eq!(a.points.len(), b.points.len());
        for (p, q) in a.points.iter().zip(b.points.iter()) {
            assert_eq!(p.x.to_bits(), q.x.to_bits());
            assert_eq!(p.y.to_bits(), q.y.to_bits());
        }
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn thickness_violation_rejected() {
        let curve = unit_circle();
        let noise = NoiseSpec::new(1.5, 0.0).expect("valid");
        let config = SamplerConfig::single_curve(curve, noise, 100, 1);
        assert!(matches!(
            sample(&config),
            Err(Error::ThicknessViolated { .. })
        ));
    }

    #[test]
    fn uniform_arclength_positions_pass_chi_square() {
        // Map sampled points back to their nearest arclength position and
        // check a chi-square uniformity statistic at the 1% level.
        let curve = unit_circle();
        let noise = NoiseSpec::new(0.05, 0.0).expect("valid");
        let config = SamplerConfig::single_curve(curve.clone(), noise, 10_000, 123);
        let drawn = sample(&config).expect("ok");
        let bins = 20;
        let mut counts = vec![0usize; bins];
        for p in &drawn.points {
            let (_, u) = curve.nearest(*p);
            counts[((u * bins as f64) as usize).min(bins - 1)] += 1;
        }
        let expected = drawn.points.len() as f64 / bins as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 99% quantile of chi-square with 19 dof.
        assert!(chi2 < 36.19, "chi-square {chi2}");
    }

    #[test]
    fn boundary_exponent_scaling_for_uniform_disk() {
        // Fraction of points within t of the support boundary scales like
        // t^(alpha + 1) = t^(3/2) for beta = 0; check the log-log slope over
        // t in [0.01*sigma, 0.3*sigma].
        let curve = unit_circle();
        let sigma = 0.2;
        let noise = NoiseSpec::new(sigma, 0.0).expect("valid");
        let config = SamplerConfig::single_curve(curve.clone(), noise, 100_000, 31);
        let drawn = sample(&config).expect("ok");
        let model = SupportModel::new(curve, sigma).expect("valid");
        let edts: Vec<f64> = drawn.points.iter().map(|p| model.true_edt(*p)).collect();
        let ts: Vec<f64> = (0..8)
            .map(|k| 0.01 * sigma * (30f64).powf(k as f64 / 7.0))
            .collect();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &t in &ts {
            let count = edts.iter().filter(|&&d| d <= t).count();
            if count > 0 {
                xs.push(t.ln());
                ys.push((count as f64 / edts.len() as f64).ln());
            }
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let slope = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!(
            (slope - 1.5).abs() < 0.2,
            "boundary mass slope {slope}, expected 1.5 +- 0.2"
        );
    }
}
