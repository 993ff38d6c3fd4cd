//! Shared stage plumbing between subcommands: building curves from config,
//! the support/EDT stages, and per-component views of the estimated support.

use crate::config::PipelineConfig;
use anyhow::{anyhow, Context, Result};
use filament_core::edt::{estimate_sigma, materialize_region, EdtEstimate};
use filament_core::geom::{Point2, Rect};
use filament_core::model::{build_curve, FilamentCurve};
use filament_core::sampler::{LabeledSample, NoiseSpec, SamplerConfig};
use filament_core::support_est::{
    build_boundary, select_epsilon, BallUnion, BoundaryArrangement, EpsilonMethod,
};

pub fn build_curves(cfg: &PipelineConfig) -> Result<Vec<(FilamentCurve, f64)>> {
    let weights = cfg.curve_weights();
    let total: f64 = weights.iter().sum();
    anyhow::ensure!(total > 0.0, "curve weights must sum to a positive value");
    cfg.model
        .curves
        .iter()
        .zip(weights)
        .map(|(spec, w)| {
            let curve = build_curve(&spec.family, cfg.model.resolution)
                .context("building model curve")?;
            Ok((curve, w / total))
        })
        .collect()
}

pub fn sampler_config(cfg: &PipelineConfig, seed: Option<u64>) -> Result<SamplerConfig> {
    let r = cfg.sampler.clutter_region;
    Ok(SamplerConfig {
        curves: build_curves(cfg)?,
        h: cfg.sampler.h,
        noise: NoiseSpec::new(cfg.noise.sigma, cfg.noise.beta)
            .map_err(|e| anyhow!("{e}"))?,
        n: cfg.sampler.n,
        eta: cfg.sampler.eta,
        clutter_region: Rect::new(Point2::new(r[0], r[1]), Point2::new(r[2], r[3])),
        seed: seed.unwrap_or(cfg.sampler.seed),
    })
}

pub fn simulate(cfg: &PipelineConfig, seed: Option<u64>) -> Result<LabeledSample> {
    let sc = sampler_config(cfg, seed)?;
    filament_core::sampler::sample(&sc).map_err(|e| anyhow!("{e}"))
}

pub struct SupportStage {
    pub epsilon: f64,
    pub union: BallUnion,
    pub arrangement: BoundaryArrangement,
}

pub fn support_stage(points: &[Point2], cfg: &PipelineConfig) -> Result<SupportStage> {
    let epsilon = match cfg.support.epsilon {
        Some(e) => e,
        None => {
            let method = match cfg.support.epsilon_method.as_str() {
                "nn-max" => EpsilonMethod::NnMax,
                _ => EpsilonMethod::RateFormula {
                    c: cfg.support.c,
                    alpha: cfg.noise.beta + 0.5,
                },
            };
            select_epsilon(points, method).map_err(|e| anyhow!("{e}"))?
        }
    };
    let (union, arrangement) =
        build_boundary(points, epsilon).map_err(|e| anyhow!("support boundary: {e}"))?;
    Ok(SupportStage {
        epsilon,
        union,
        arrangement,
    })
}

pub fn edt_stage(stage: &SupportStage, cfg: &PipelineConfig) -> Result<EdtEstimate> {
    let (sigma_hat, y_hat) = estimate_sigma(&stage.union, &stage.arrangement);
    let contains = |y: Point2| stage.union.contains(y);
    materialize_region(
        &stage.arrangement,
        &contains,
        stage.union.bounding_box(),
        sigma_hat,
        y_hat,
        stage.epsilon,
        cfg.edt.delta_factor * stage.epsilon,
        cfg.edt.grid_step_factor * stage.epsilon,
    )
    .map_err(|e| anyhow!("EDT region: {e}"))
}

/// A connected component of the estimated support, with its boundary loops
/// and its slice of the EDT region.
pub struct ComponentView {
    pub component: u32,
    pub arrangement: BoundaryArrangement,
    pub region: EdtEstimate,
}

/// Split the arrangement and region by ball-union component. The component's
/// cut anchor (`y_hat`) is its deepest region point.
pub fn component_views(
    stage: &SupportStage,
    region: &EdtEstimate,
) -> Result<Vec<ComponentView>> {
    let count = stage.union.component_count();
    let mut loops_by_comp: Vec<Vec<Vec<filament_core::geom::Arc>>> = vec![Vec::new(); count];
    for (li, lp) in stage.arrangement.loops().iter().enumerate() {
        let arcs = lp
            .arc_indices
            .iter()
            .map(|&i| stage.arrangement.arcs()[i].arc)
            .collect();
        loops_by_comp[lp.component as usize].push(arcs);
        let _ = li;
    }
    let mut points_by_comp: Vec<Vec<Point2>> = vec![Vec::new(); count];
    for &p in &region.region_points {
        let (idx, _) = stage
            .union
            .grid()
            .nearest_excluding(p, None)
            .ok_or_else(|| anyhow!("empty union"))?;
        points_by_comp[stage.union.component_of(idx) as usize].push(p);
    }
    let mut views = Vec::new();
    for c in 0..count {
        if loops_by_comp[c].is_empty() || points_by_comp[c].is_empty() {
            continue;
        }
        let arrangement = BoundaryArrangement::from_loops(std::mem::take(&mut loops_by_comp[c]));
        let pts = std::mem::take(&mut points_by_comp[c]);
        let y_hat = *pts
            .iter()
            .max_by(|a, b| {
                arrangement
                    .distance(**a)
                    .total_cmp(&arrangement.distance(**b))
            })
            .expect("nonempty");
        views.push(ComponentView {
            component: c as u32,
            arrangement,
            region: EdtEstimate {
                sigma_hat: region.sigma_hat,
                y_hat,
                delta: region.delta,
                epsilon: region.epsilon,
                grid_step: region.grid_step,
                region_points: pts,
            },
        });
    }
    Ok(views)
}
