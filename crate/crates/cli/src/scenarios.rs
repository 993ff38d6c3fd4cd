//! Built-in example scenarios: the demo datasets the `reproduce-example`
//! subcommand regenerates end to end.

use crate::config::{CurveSpec, PipelineConfig};
use filament_core::model::CurveFamily;

/// Example 1: a closed curve and a well-separated open curve, two thirds
/// filament points and one third uniform clutter.
fn example_one() -> PipelineConfig {
    let mut cfg = PipelineConfig::default();
    cfg.model.curves = vec![
        CurveSpec {
            family: CurveFamily::Circle {
                radius: 0.45,
                center: [-0.35, 0.4],
            },
            weight: Some(0.5),
        },
        CurveSpec {
            family: CurveFamily::SineArc {
                from: [-0.85, -0.55],
                to: [0.85, -0.3],
                amplitude: 0.2,
                cycles: 1.0,
            },
            weight: Some(0.5),
        },
    ];
    cfg.noise.sigma = 0.05;
    cfg.noise.beta = 0.0;
    cfg.sampler.n = 1500;
    cfg.sampler.eta = 2.0 / 3.0;
    cfg.sampler.seed = 11;
    // The rule-of-thumb bandwidth over-smooths at this clutter level; a
    // bandwidth near the tube diameter separates better.
    cfg.declutter.bandwidth = Some(0.06);
    cfg
}

/// Example 2: an intersecting pair (closed curve crossed by an open one).
fn example_two() -> PipelineConfig {
    let mut cfg = example_one();
    cfg.model.curves = vec![
        CurveSpec {
            family: CurveFamily::Circle {
                radius: 0.5,
                center: [0.0, 0.0],
            },
            weight: Some(0.5),
        },
        CurveSpec {
            family: CurveFamily::SineArc {
                from: [-0.9, -0.45],
                to: [0.9, 0.45],
                amplitude: 0.25,
                cycles: 1.0,
            },
            weight: Some(0.5),
        },
    ];
    cfg.sampler.seed = 22;
    cfg
}

/// Example 3: twelve open filaments with several intersections, 80 points
/// each plus 350 clutter points.
fn example_three() -> PipelineConfig {
    let mut cfg = PipelineConfig::default();
    let mut curves = Vec::new();
    // Six gentle arcs running left-right, six running bottom-top.
    for k in 0..6 {
        let y = -0.75 + 0.3 * k as f64;
        curves.push(CurveSpec {
            family: CurveFamily::SineArc {
                from: [-0.9, y],
                to: [0.9, y + 0.08],
                amplitude: 0.12,
                cycles: 1.0,
            },
            weight: None,
        });
        let x = -0.75 + 0.3 * k as f64;
        curves.push(CurveSpec {
            family: CurveFamily::SineArc {
                from: [x, -0.9],
                to: [x + 0.08, 0.9],
                amplitude: 0.12,
                cycles: 1.0,
            },
            weight: None,
        });
    }
    cfg.model.curves = curves;
    cfg.noise.sigma = 0.035;
    cfg.noise.beta = 0.0;
    cfg.sampler.n = 1310;
    cfg.sampler.eta = 960.0 / 1310.0;
    cfg.sampler.seed = 33;
    cfg.declutter.bandwidth = Some(0.05);
    cfg
}

pub fn example_config(k: usize) -> Option<PipelineConfig> {
    match k {
        1 => Some(example_one()),
        2 => Some(example_two()),
        3 => Some(example_three()),
        _ => None,
    }
}
