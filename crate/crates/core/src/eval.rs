//! Quantitative evaluation: Hausdorff reports against ground truth, the
//! replication harness running the full pipeline, convergence-rate slope
//! fitting, confusion matrices, and multi-filament matching.

use crate::declutter::Label;
use crate::edt::{estimate_sigma, materialize_region, EdtEstimate};
use crate::error::{Error, Result};
use crate::extract::{extract_curve, ExtractMode, ExtractParams, Topology};
use crate::geom::{directed_hausdorff, hausdorff_distance, Point2};
use crate::medial::{complete, medial_fit, split_closed};
use crate::model::{build_curve, CurveFamily, FilamentCurve, SupportModel, DEFAULT_RESOLUTION};
use crate::sampler::{sample, NoiseSpec, SamplerConfig};
use crate::support_est::{build_boundary, max_nearest_neighbor_distance};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Hausdorff distance with both directed components, so sandwich-style bounds
/// can be tested separately.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DistanceReport {
    pub hausdorff: f64,
    pub truth_to_estimate: f64,
    pub estimate_to_truth: f64,
}

/// Distances between fine samplings of the truth curve and an estimate point
/// set, at the given sampling spacing.
pub fn hausdorff_report(
    truth: &FilamentCurve,
    estimate: &[Point2],
    sampling: f64,
) -> Result<DistanceReport> {
    if estimate.is_empty() {
        return Err(Error::EmptySet);
    }
    let count = (truth.arclength() / sampling).ceil().max(8.0) as usize;
    let truth_pts = truth.sample_uniform(count);
    let (t2e, _) = directed_hausdorff(&truth_pts, estimate)?;
    let (e2t, _) = directed_hausdorff(estimate, &truth_pts)?;
    Ok(DistanceReport {
        hausdorff: t2e.max(e2t),
        truth_to_estimate: t2e,
        estimate_to_truth: e2t,
    })
}

/// Standard 2x2 confusion counts for filament-vs-clutter decisions.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn filament_recall(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fn_).max(1) as f64
    }

    pub fn clutter_recall(&self) -> f64 {
        self.tn as f64 / (self.tn + self.fp).max(1) as f64
    }

    pub fn total(&self) -> usize {
        self.tp + self.fn_ + self.fp + self.tn
    }
}

/// Counts with "filament" as the positive class.
pub fn confusion(truth_filament: &[bool], predicted: &[Label]) -> Result<ConfusionMatrix> {
    if truth_filament.len() != predicted.len() {
        return Err(Error::LengthMismatch(truth_filament.len(), predicted.len()));
    }
    let mut m = ConfusionMatrix::default();
    for (&t, &p) in truth_filament.iter().zip(predicted) {
        match (t, p == Label::Filament) {
            (true, true) => m.tp += 1,
            (true, false) => m.fn_ += 1,
            (false, true) => m.fp += 1,
            (false, false) => m.tn += 1,
        }
    }
    Ok(m)
}

/// Ordinary least squares fit `y = slope * x + intercept`.
pub fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// One model family + noise setting for experiments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentModel {
    pub family: CurveFamily,
    pub sigma: f64,
    pub beta: f64,
}

impl ExperimentModel {
    pub fn build_support(&self) -> Result<SupportModel> {
        let curve = build_curve(&self.family, DEFAULT_RESOLUTION)?;
        SupportModel::new(curve, self.sigma)
    }
}

/// Tuning knobs for a pipeline replication.
#[derive(Debug, Clone, Copy)]
pub struct ReplicationOptions {
    /// Threshold offset as a multiple of epsilon (default 2).
    pub delta_factor: f64,
    /// Region grid step as a multiple of epsilon (default 1/4).
    pub grid_step_factor: f64,
    pub relax: bool,
    /// Boundary-error measurement spacing as a multiple of epsilon.
    pub boundary_spacing_factor: f64,
    /// Number of truth-curve samples used for inclusion checks.
    pub curve_samples: usize,
    /// Run the medial stage (closed curves only).
    pub with_medial: bool,
    /// Run curve extraction.
    pub with_extract: bool,
}

impl Default for ReplicationOptions {
    fn default() -> Self {
        Self {
            delta_factor: 2.0,
            grid_step_factor: 0.25,
            relax: true,
            boundary_spacing_factor: 1.0 / 20.0,
            curve_samples: 1000,
            with_medial: true,
            with_extract: true,
        }
    }
}

/// Everything measured on one simulated replication.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplicationOutcome {
    pub n: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub sigma_hat: f64,
    /// Distance from the EDT maximizer to the filament.
    pub y_hat_to_curve: f64,
    /// Hausdorff distance between fine samplings of the true and estimated
    /// boundaries.
    pub measured_boundary_dh: f64,
    /// Closed case: the larger per-side boundary error under the best
    /// outer/inner matching.
    pub measured_side_dh: Option<f64>,
    /// Truth samples failing exact region membership (sandwich lower side).
    pub region_misses: usize,
    /// Max distance from region points to the filament (sandwich upper side).
    pub region_to_curve_max: f64,
    pub dh_region: f64,
    pub extract: Option<ExtractOutcome>,
    pub extract_error: Option<String>,
    pub medial: Option<MedialOutcome>,
    pub medial_error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractOutcome {
    pub dh: f64,
    pub topology_closed: bool,
    pub winding_ok: bool,
    pub simple: bool,
    /// Open case: distances from the estimated endpoints to the true curve
    /// endpoints (after best matching).
    pub endpoint_errors: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MedialOutcome {
    /// Max over fitted midpoints of the distance to the filament.
    pub midpoint_max_dist: f64,
    /// Directed distance from the filament sampling to the midpoint set.
    pub coverage_directed: f64,
    /// Hausdorff distance of the completed curve to the filament (closed
    /// completions that self-intersect report None).
    pub dh_completed: Option<f64>,
}

/// Run the full pipeline once: sample, estimate the support boundary,
/// estimate sigma, materialize the EDT region, optionally extract a curve and
/// fit the medial estimator, measuring everything against the true model.
pub fn run_replication(
    model: &SupportModel,
    beta: f64,
    n: usize,
    seed: u64,
    opts: &ReplicationOptions,
) -> Result<ReplicationOutcome> {
    let noise = NoiseSpec::new(model.sigma(), beta)?;
    let config = SamplerConfig::single_curve(model.curve().clone(), noise, n, seed);
    let drawn = sample(&config)?;
    let epsilon = max_nearest_neighbor_distance(&drawn.points)?;
    let (union, arr) = build_boundary(&drawn.points, epsilon)?;

    let spacing = epsilon * opts.boundary_spacing_factor;
    let truth_boundary = model.boundary_samples(spacing);
    let est_boundary = arr.sample_all(spacing);
    let measured_boundary_dh = hausdorff_distance(&truth_boundary, &est_boundary)?;

    let (sigma_hat, y_hat) = estimate_sigma(&union, &arr);
    let y_hat_to_curve = model.curve().nearest(y_hat).0;

    let contains = |y: Point2| union.contains(y);
    let delta = opts.delta_factor * epsilon;
    let grid_step = opts.grid_step_factor * epsilon;
    let region = materialize_region(
        &arr,
        &contains,
        union.bounding_box(),
        sigma_hat,
        y_hat,
        epsilon,
        delta,
        grid_step,
    )?;

    let curve = model.curve();
    let truth_pts = curve.sample_uniform(opts.curve_samples);
    let region_misses = truth_pts
        .iter()
        .filter(|p| !crate::edt::membership(&arr, &contains, &region, **p))
        .count();
    let region_to_curve_max = region
        .region_points
        .iter()
        .map(|p| curve.nearest(*p).0)
        .fold(0.0, f64::max);
    let (t2r, _) = directed_hausdorff(&truth_pts, &region.region_points)?;
    let dh_region = t2r.max(region_to_curve_max);

    let mut outcome = ReplicationOutcome {
        n,
        seed,
        epsilon,
        sigma_hat,
        y_hat_to_curve,
        measured_boundary_dh,
        measured_side_dh: None,
        region_misses,
        region_to_curve_max,
        dh_region,
        extract: None,
        extract_error: None,
        medial: None,
        medial_error: None,
    };

    if opts.with_extract {
        match run_extract_stage(model, &arr, &region, &contains, opts) {
            Ok(e) => outcome.extract = Some(e),
            Err(e) => outcome.extract_error = Some(e.to_string()),
        }
    }

    if opts.with_medial && curve.is_closed() {
        match run_medial_stage(model, &arr, &mut outcome, spacing) {
            Ok(m) => outcome.medial = Some(m),
            Err(e) => outcome.medial_error = Some(e.to_string()),
        }
    }

    Ok(outcome)
}

fn run_extract_stage(
    model: &SupportModel,
    arr: &crate::support_est::BoundaryArrangement,
    region: &EdtEstimate,
    contains: &(dyn Fn(Point2) -> bool + Sync),
    opts: &ReplicationOptions,
) -> Result<ExtractOutcome> {
    let member = |y: Point2| crate::edt::membership(arr, &contains, region, y);
    let curve = model.curve();
    let closed = curve.is_closed();
    let mode = if closed {
        ExtractMode::Closed
    } else {
        ExtractMode::Open
    };
    // Interior point of the tube hole for the winding diagnostic: the inner
    // loop of a clean closed-tube arrangement surrounds it.
    let hole_point = if closed {
        split_closed(arr).ok().map(|split| {
            let samples = split.side1.sample(split.side1.length() / 64.0);
            samples.iter().fold(Point2::default(), |a, p| a + *p) / samples.len() as f64
        })
    } else {
        None
    };
    let params = ExtractParams {
        relax: opts.relax,
        hole_point,
        ..Default::default()
    };
    let extracted = extract_curve(region, &member, mode, &params)?;
    let dh = hausdorff_report(curve, &extracted.path.sample(region.grid_step), region.grid_step)?;
    let endpoint_errors = extracted.endpoints.map(|(a, b)| {
        let f0 = curve.start();
        let f1 = curve.end();
        let direct = (a.dist(f0), b.dist(f1));
        let swapped = (a.dist(f1), b.dist(f0));
        if direct.0.max(direct.1) <= swapped.0.max(swapped.1) {
            direct
        } else {
            swapped
        }
    });
    Ok(ExtractOutcome {
        dh: dh.hausdorff,
        topology_closed: extracted.topology == Topology::Closed,
        winding_ok: extracted
            .diagnostics
            .winding
            .map_or(!closed, |w| w.abs() == 1),
        simple: extracted.path.is_simple(),
        endpoint_errors,
    })
}

fn run_medial_stage(
    model: &SupportModel,
    arr: &crate::support_est::BoundaryArrangement,
    outcome: &mut ReplicationOutcome,
    spacing: f64,
) -> Result<MedialOutcome> {
    let split = split_closed(arr)?;
    // Per-side boundary errors under the best outer/inner matching.
    let (side0_true, side1_true) = model.boundary_sides();
    let sample_side = |chain: &crate::medial::ArcChain| chain.sample(spacing);
    let est0 = sample_side(&split.side0);
    let est1 = sample_side(&split.side1);
    let pairing_a = hausdorff_distance(side0_true, &est0)?
        .max(hausdorff_distance(side1_true, &est1)?);
    let pairing_b = hausdorff_distance(side0_true, &est1)?
        .max(hausdorff_distance(side1_true, &est0)?);
    outcome.measured_side_dh = Some(pairing_a.min(pairing_b));

    let fit = medial_fit(&split, outcome.epsilon / 4.0)?;
    let curve = model.curve();
    let midpoints = fit.midpoints();
    let midpoint_max_dist = midpoints
        .iter()
        .map(|p| curve.nearest(*p).0)
        .fold(0.0, f64::max);
    let truth_pts = curve.sample_uniform(1000);
    let (coverage_directed, _) = directed_hausdorff(&truth_pts, &midpoints)?;
    let dh_completed = complete(&fit).ok().and_then(|poly| {
        hausdorff_report(curve, &poly.sample(outcome.epsilon / 8.0), outcome.epsilon / 8.0)
            .ok()
            .map(|r| r.hausdorff)
    });
    Ok(MedialOutcome {
        midpoint_max_dist,
        coverage_directed,
        dh_completed,
    })
}

/// Which estimator's error a rate experiment tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    EdtRegion,
    EdtExtract,
    /// Directed coverage error of the raw midpoint set.
    MedialRaw,
    MedialCompleted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateExperimentConfig {
    pub model: ExperimentModel,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub estimator: EstimatorKind,
    pub base_seed: u64,
}

/// A fitted convergence-rate report. `fitted_slope` regresses `log(median
/// d_H)` on `log(log n / n)`; the theoretical value is `1/(2+alpha)`.
/// `slope_vs_rate` rescales to the regression on `log r_n` (theoretical 1).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateReport {
    pub n_grid: Vec<usize>,
    pub dh_medians: Vec<f64>,
    pub alpha: f64,
    pub fitted_slope: f64,
    pub intercept: f64,
    pub slope_vs_rate: f64,
    pub theoretical_slope: f64,
    pub failures: usize,
}

pub fn median(values: &mut Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Fit a rate report from per-n medians (exposed for synthetic regression
/// checks).
pub fn fit_rate_from_medians(n_grid: &[usize], medians: &[f64], alpha: f64) -> RateReport {
    let xs: Vec<f64> = n_grid
        .iter()
        .map(|&n| ((n as f64).ln() / n as f64).ln())
        .collect();
    let ys: Vec<f64> = medians.iter().map(|d| d.ln()).collect();
    let (slope, intercept) = ols(&xs, &ys);
    RateReport {
        n_grid: n_grid.to_vec(),
        dh_medians: medians.to_vec(),
        alpha,
        fitted_slope: slope,
        intercept,
        slope_vs_rate: slope * (2.0 + alpha),
        theoretical_slope: 1.0 / (2.0 + alpha),
        failures: 0,
    }
}

/// Run the full pipeline over an n-grid with seeded replications and regress
/// the median error on the theoretical rate. Per-replication errors count as
/// failures; more than 20% at any n aborts with diagnostics.
pub fn fit_rate(cfg: &RateExperimentConfig) -> Result<RateReport> {
    if cfg.n_grid.len() < 3 {
        return Err(Error::InvalidInput("rate fit needs >= 3 grid points".into()));
    }
    if cfg.replications < 10 {
        return Err(Error::InvalidInput("rate fit needs >= 10 replications".into()));
    }
    let support = cfg.model.build_support()?;
    let opts = ReplicationOptions {
        with_medial: matches!(
            cfg.estimator,
            EstimatorKind::MedialRaw | EstimatorKind::MedialCompleted
        ),
        with_extract: matches!(cfg.estimator, EstimatorKind::EdtExtract),
        ..Default::default()
    };
    let mut medians = Vec::new();
    let mut total_failures = 0usize;
    for &n in &cfg.n_grid {
        let results: Vec<std::result::Result<f64, String>> = (0..cfg.replications)
            .into_par_iter()
            .map(|rep| {
                let seed = cfg
                    .base_seed
                    .wrapping_add(n as u64)
                    .wrapping_mul(0x9e37_79b9)
                    .wrapping_add(rep as u64);
                let outcome = run_replication(&support, cfg.model.beta, n, seed, &opts)
                    .map_err(|e| e.to_string())?;
                let value = match cfg.estimator {
                    EstimatorKind::EdtRegion => Some(outcome.dh_region),
                    EstimatorKind::EdtExtract => outcome.extract.as_ref().map(|e| e.dh),
                    EstimatorKind::MedialRaw => {
                        outcome.medial.as_ref().map(|m| m.coverage_directed)
                    }
                    EstimatorKind::MedialCompleted => {
                        outcome.medial.as_ref().and_then(|m| m.dh_completed)
                    }
                };
                value.ok_or_else(|| {
                    outcome
                        .extract_error
                        .or(outcome.medial_error)
                        .unwrap_or_else(|| "estimator stage produced no value".into())
                })
            })
            .collect();
        let mut values: Vec<f64> = Vec::new();
        let mut first_error = String::new();
        for r in results {
            match r {
                Ok(v) => values.push(v),
                Err(e) => {
                    if first_error.is_empty() {
                        first_error = e;
                    }
                    total_failures += 1;
                }
            }
        }
        let failed = cfg.replications - values.len();
        if (failed as f64) > 0.2 * cfg.replications as f64 {
            return Err(Error::TooManyFailures {
                n,
                failed,
                total: cfg.replications,
                first: first_error,
            });
        }
        medians.push(median(&mut values));
    }
    let mut report = fit_rate_from_medians(&cfg.n_grid, &medians, cfg.model.beta + 0.5);
    report.failures = total_failures;
    Ok(report)
}

/// Per-component matching of estimated point clusters to true curves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiFilamentReport {
    /// `(component index, curve index, hausdorff distance)` greedy matches.
    pub matches: Vec<(usize, usize, f64)>,
    pub max_matched_dh: f64,
    pub unmatched_components: Vec<usize>,
    pub unmatched_curves: Vec<usize>,
    /// Count mismatch between components and curves (reported, not fatal).
    pub count_mismatch: bool,
    /// Coverage of the well-separated portion of the union of curves:
    /// directed distance from the 2-sigma-separated samples to the pooled
    /// estimate, and the symmetric Hausdorff value for reference.
    pub gamma0_directed: f64,
    pub gamma0_hausdorff: f64,
}

/// Greedy matching by Hausdorff distance, plus evaluation against the
/// well-separated subset of the curves (points whose 2-sigma ball meets only
/// their own curve).
pub fn multi_filament_eval(
    truths: &[FilamentCurve],
    components: &[Vec<Point2>],
    sigma: f64,
) -> Result<MultiFilamentReport> {
    if truths.is_empty() || components.is_empty() {
        return Err(Error::EmptySet);
    }
    let curve_samples: Vec<Vec<Point2>> = truths.iter().map(|c| c.sample_uniform(1000)).collect();
    let mut pairs = Vec::new();
    for (ci, comp) in components.iter().enumerate() {
        for (ki, samples) in curve_samples.iter().enumerate() {
            if comp.is_empty() {
                continue;
            }
            pairs.push((hausdorff_distance(comp, samples)?, ci, ki));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut used_c = vec![false; components.len()];
    let mut used_k = vec![false; truths.len()];
    let mut matches = Vec::new();
    for (d, ci, ki) in pairs {
        if !used_c[ci] && !used_k[ki] {
            used_c[ci] = true;
            used_k[ki] = true;
            matches.push((ci, ki, d));
        }
    }
    let max_matched_dh = matches.iter().map(|m| m.2).fold(0.0, f64::max);
    let unmatched_components: Vec<usize> =
        (0..components.len()).filter(|&i| !used_c[i]).collect();
    let unmatched_curves: Vec<usize> = (0..truths.len()).filter(|&i| !used_k[i]).collect();

    // Well-separated subset: curve samples whose 2-sigma ball misses every
    // other curve's sampling.
    let mut gamma0 = Vec::new();
    for (ki, samples) in curve_samples.iter().enumerate() {
        for p in samples {
            let mut separated = true;
            'outer: for (kj, others) in curve_samples.iter().enumerate() {
                if kj == ki {
                    continue;
                }
                for q in others {
                    if p.dist(*q) <= 2.0 * sigma {
                        separated = false;
                        break 'outer;
                    }
                }
            }
            if separated {
                gamma0.push(*p);
            }
        }
    }
    let pooled: Vec<Point2> = components.iter().flatten().copied().collect();
    let (gamma0_directed, gamma0_hausdorff) = if gamma0.is_empty() || pooled.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        let (d, _) = directed_hausdorff(&gamma0, &pooled)?;
        (d, hausdorff_distance(&gamma0, &pooled)?)
    };

    Ok(MultiFilamentReport {
        count_mismatch: components.len() != truths.len()
            || !unmatched_components.is_empty()
            || !unmatched_curves.is_empty(),
        matches,
        max_matched_dh,
        unmatched_components,
        unmatched_curves,
        gamma0_directed,
        gamma0_hausdorff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::TAU;

    #[test]
    fn hausdorff_report_on_exact_sampling_is_tiny() {
        let curve = build_curve(
            &CurveFamily::Circle {
                radius: 1.0,
                center: [0.0, 0.0],
            },
            512,
        )
        .expect("ok");
        let est = curve.sample_uniform(2000);
        let report = hausdorff_report(&curve, &est, 0.01).expect("ok");
        assert!(report.hausdorff <= 0.01, "dh {}", report.hausdorff);
        // Directed parts are each at most the symmetric value, which is their
        // max, exactly.
        assert_eq!(
            report.hausdorff,
            report.truth_to_estimate.max(report.estimate_to_truth)
        );
    }

    #[test]
    fn offset_set_has_one_sided_distance() {
        let curve = build_curve(
            &CurveFamily::Circle {
                radius: 1.0,
                center: [0.0, 0.0],
            },
            512,
        )
        .expect("ok");
        let t = 0.07;
        let est: Vec<Point2> = (0..4000)
            .map(|k| Point2::from_angle(k as f64 / 4000.0 * TAU) * (1.0 + t))
            .collect();
        let report = hausdorff_report(&curve, &est, 0.005).expect("ok");
        assert!((report.truth_to_estimate - t).abs() < 0.005);
        assert!((report.estimate_to_truth - t).abs() < 0.005);
    }

    #[test]
    fn confusion_counts() {
        let truth = vec![true, true, false, false];
        let pred = vec![
            Label::Filament,
            Label::Filament,
            Label::Filament,
            Label::Clutter,
        ];
        let m = confusion(&truth, &pred).expect("ok");
        assert_eq!((m.tp, m.fn_, m.fp, m.tn), (2, 0, 1, 1));
        let all_clutter = vec![Label::Clutter; 4];
        let m2 = confusion(&truth, &all_clutter).expect("ok");
        assert_eq!(m2.tp, 0);
        assert!(confusion(&truth[..2], &pred).is_err());
    }

    #[test]
    fn exact_power_law_recovers_slope_and_intercept() {
        let n_grid = vec![500usize, 2000, 8000, 32000];
        let alpha = 0.5;
        let medians: Vec<f64> = n_grid
            .iter()
            .map(|&n| {
                let rn = ((n as f64).ln() / n as f64).powf(1.0 / (2.0 + alpha));
                0.5 * rn
            })
            .collect();
        let report = fit_rate_from_medians(&n_grid, &medians, alpha);
        assert!((report.slope_vs_rate - 1.0).abs() < 1e-10);
        assert!((report.fitted_slope - 0.4).abs() < 1e-10);
        assert!((report.intercept - 0.5f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn noisy_power_law_slope_stays_near_one() {
        let n_grid = vec![100usize, 1000, 10_000, 100_000, 1_000_000, 10_000_000];
        let alpha = 0.5;
        let mut state = 31u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let medians: Vec<f64> = n_grid
                .iter()
                .map(|&n| {
                    let rn = ((n as f64).ln() / n as f64).powf(1.0 / (2.0 + alpha));
                    0.5 * rn * (1.0 + 0.1 * (2.0 * next() - 1.0))
                })
                .collect();
            let report = fit_rate_from_medians(&n_grid, &medians, alpha);
            assert!(
                (report.slope_vs_rate - 1.0).abs() < 0.1,
                "slope {}",
                report.slope_vs_rate
            );
        }
    }

    #[test]
    fn ols_is_exact_on_lines() {
        let xs = vec![-2.0, 0.5, 3.0, 7.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.25 * x - 1.5).collect();
        let (m, b) = ols(&xs, &ys);
        assert!((m - 3.25).abs() < 1e-12 && (b + 1.5).abs() < 1e-12);
    }

    #[test]
    fn separated_circles_match_one_to_one() {
        let c1 = build_curve(
            &CurveFamily::Circle {
                radius: 0.3,
                center: [-0.5, 0.0],
            },
            256,
        )
        .expect("ok");
        let c2 = build_curve(
            &CurveFamily::Circle {
                radius: 0.3,
                center: [0.6, 0.0],
            },
            256,
        )
        .expect("ok");
        let comp1: Vec<Point2> = c1.sample_uniform(400);
        let comp2: Vec<Point2> = c2.sample_uniform(400);
        let report =
            multi_filament_eval(&[c1, c2], &[comp2.clone(), comp1.clone()], 0.05).expect("ok");
        assert_eq!(report.matches.len(), 2);
        assert!(!report.count_mismatch);
        assert!(report.max_matched_dh < 0.05);
        // Permutation invariance of the matching outcome.
        let report_swapped = multi_filament_eval(
            &[
                build_curve(
                    &CurveFamily::Circle {
                        radius: 0.3,
                        center: [0.6, 0.0],
                    },
                    256,
                )
                .expect("ok"),
                build_curve(
                    &CurveFamily::Circle {
                        radius: 0.3,
                        center: [-0.5, 0.0],
                    },
                    256,
                )
                .expect("ok"),
            ],
            &[comp2, comp1],
            0.05,
        )
        .expect("ok");
        assert!((report_swapped.max_matched_dh - report.max_matched_dh).abs() < 1e-12);
    }

    #[test]
    fn duplicated_curve_is_flagged() {
        let c = build_curve(
            &CurveFamily::Circle {
                radius: 0.3,
                center: [0.0, 0.0],
            },
            256,
        )
        .expect("ok");
        let pts = c.sample_uniform(300);
        let report = multi_filament_eval(&[c.clone(), c], &[pts], 0.05).expect("ok");
        assert!(report.count_mismatch);
        assert_eq!(report.unmatched_curves.len(), 1);
    }

    #[test]
    fn intersecting_curves_gamma0_is_covered() {
        // Two crossing segments; estimates cover both curves fully, so the
        // separated subset is covered even though the crossing region is
        // ambiguous.
        let s1 = build_curve(
            &CurveFamily::Segment {
                from: [-0.8, -0.8],
                to: [0.8, 0.8],
            },
            256,
        )
        .expect("ok");
        let s2 = build_curve(
            &CurveFamily::Segment {
                from: [-0.8, 0.8],
                to: [0.8, -0.8],
            },
            256,
        )
        .expect("ok");
        let sigma = 0.1;
        let est1 = s1.sample_uniform(500);
        let est2 = s2.sample_uniform(500);
        let report = multi_filament_eval(&[s1, s2], &[est1, est2], sigma).expect("ok");
        assert!(report.gamma0_directed < 0.01, "gamma0 coverage {}", report.gamma0_directed);
    }
}
