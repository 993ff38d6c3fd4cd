//! `filament`: command-line pipeline for planar filament estimation.

mod config;
mod pipeline;
mod scenarios;
mod svg;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use config::PipelineConfig;
use filament_core::declutter::{Bandwidth, Declutterer, Label};
use filament_core::edt::EdtEstimate;
use filament_core::eval::{
    confusion, fit_rate, hausdorff_report, EstimatorKind, ExperimentModel, RateExperimentConfig,
};
use filament_core::extract::{extract_curve, ExtractMode, ExtractParams, Topology};
use filament_core::geom::Point2;
use filament_core::io::{fmt_f64, read_points_csv, write_curve_csv, write_points_csv};
use filament_core::medial::{
    medial_fit, split_closed, split_open, split_outer_vs_rest, EndpointSplitConfig, MedialEstimate,
};
use filament_core::sampler::CLUTTER_LABEL;
use pipeline::{component_views, edt_stage, simulate, support_stage, SupportStage};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use svg::Layer;

#[derive(Parser)]
#[command(
    name = "filament",
    about = "Filament estimation for planar point processes",
    version
)]
struct Cli {
    /// JSON pipeline configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the sampler seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a dataset from the configured model and write points.csv.
    Simulate,
    /// Classify points as filament or clutter; writes decluttered.csv,
    /// filament.csv and declutter_report.json.
    Declutter {
        #[arg(long)]
        input: PathBuf,
    },
    /// Estimate the support boundary and the EDT superlevel region.
    EstimateEdt {
        #[arg(long)]
        input: PathBuf,
    },
    /// Fit the medial estimator (midpoints between boundary sides).
    EstimateMedial {
        #[arg(long)]
        input: PathBuf,
    },
    /// Extract ordered curves from the EDT region.
    Extract {
        #[arg(long)]
        input: PathBuf,
        /// Override extract.mode from the config.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Compare an estimate CSV against the configured true curves.
    Evaluate {
        #[arg(long)]
        estimate: PathBuf,
        /// Sampling spacing for the truth curves.
        #[arg(long, default_value_t = 0.005)]
        sampling: f64,
    },
    /// Run the convergence-rate experiment from the eval section.
    RateExperiment,
    /// Render CSV point sets / curves (and an arrangement JSON) to SVG.
    Render {
        #[arg(long = "points")]
        points: Vec<PathBuf>,
        #[arg(long = "curve")]
        curves: Vec<PathBuf>,
        #[arg(long)]
        arrangement: Option<PathBuf>,
        #[arg(long, default_value = "figure.svg")]
        file: String,
    },
    /// Regenerate a built-in example end to end (1, 2, or 3).
    ReproduceExample {
        k: usize,
    },
}

fn main() {
    if let Ok(threads) = std::env::var("FILAMENT_LAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn load_config(cli: &Cli) -> Result<PipelineConfig> {
    match &cli.config {
        Some(path) => PipelineConfig::load(path),
        None => Ok(PipelineConfig::default()),
    }
}

fn run(cli: Cli) -> Result<()> {
    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating output directory {}", cli.out.display()))?;
    match &cli.command {
        Command::Simulate => {
            let cfg = load_config(&cli)?;
            cmd_simulate(&cfg, &cli).context("simulate stage")
        }
        Command::Declutter { input } => {
            let cfg = load_config(&cli)?;
            cmd_declutter(&cfg, &cli, input).context("declutter stage")
        }
        Command::EstimateEdt { input } => {
            let cfg = load_config(&cli)?;
            cmd_estimate_edt(&cfg, &cli, input).map(|_| ()).context("estimate-edt stage")
        }
        Command::EstimateMedial { input } => {
            let cfg = load_config(&cli)?;
            cmd_estimate_medial(&cfg, &cli, input).context("estimate-medial stage")
        }
        Command::Extract { input, mode } => {
            let mut cfg = load_config(&cli)?;
            if let Some(m) = mode {
                cfg.extract.mode = m.clone();
                cfg.validate().map_err(|e| anyhow!("{e}"))?;
            }
            cmd_extract(&cfg, &cli, input).map(|_| ()).context("extract stage")
        }
        Command::Evaluate { estimate, sampling } => {
            let cfg = load_config(&cli)?;
            cmd_evaluate(&cfg, &cli, estimate, *sampling).context("evaluate stage")
        }
        Command::RateExperiment => {
            let cfg = load_config(&cli)?;
            cmd_rate_experiment(&cfg, &cli).context("rate-experiment stage")
        }
        Command::Render {
            points,
            curves,
            arrangement,
            file,
        } => cmd_render(&cli, points, curves, arrangement.as_deref(), file).context("render stage"),
        Command::ReproduceExample { k } => {
            let cfg = scenarios::example_config(*k)
                .ok_or_else(|| anyhow!("example index must be 1, 2, or 3, got {k}"))?;
            cmd_reproduce(&cfg, &cli, *k).with_context(|| format!("reproduce-example {k}"))
        }
    }
}

fn cmd_simulate(cfg: &PipelineConfig, cli: &Cli) -> Result<()> {
    let sample = simulate(cfg, cli.seed)?;
    let path = cli.out.join("points.csv");
    write_points_csv(&path, &sample.points, Some(&sample.labels))?;
    std::fs::write(
        cli.out.join("config.json"),
        serde_json::to_string_pretty(cfg)?,
    )?;
    println!("simulate: wrote {} points to {}", sample.points.len(), path.display());
    Ok(())
}

fn cmd_declutter(cfg: &PipelineConfig, cli: &Cli, input: &Path) -> Result<()> {
    let (points, labels) = read_points_csv(input)?;
    let r = cfg.sampler.clutter_region;
    let region = filament_core::geom::Rect::new(Point2::new(r[0], r[1]), Point2::new(r[2], r[3]));
    let bandwidth = cfg
        .declutter
        .bandwidth
        .map_or(Bandwidth::Auto, Bandwidth::Value);
    let decl = Declutterer::fit(&points, Some(region), bandwidth).map_err(|e| anyhow!("{e}"))?;
    let predicted = decl.classify_all(&points);

    let mut w = std::io::BufWriter::new(std::fs::File::create(cli.out.join("decluttered.csv"))?);
    writeln!(w, "x,y,label,predicted")?;
    for ((p, l), pred) in points.iter().zip(&labels).zip(&predicted) {
        let flag = i32::from(*pred == Label::Filament);
        writeln!(w, "{},{},{},{}", fmt_f64(p.x), fmt_f64(p.y), l, flag)?;
    }
    drop(w);

    let kept: Vec<Point2> = points
        .iter()
        .zip(&predicted)
        .filter(|(_, pred)| **pred == Label::Filament)
        .map(|(p, _)| *p)
        .collect();
    let kept_labels: Vec<i32> = labels
        .iter()
        .zip(&predicted)
        .filter(|(_, pred)| **pred == Label::Filament)
        .map(|(l, _)| *l)
        .collect();
    write_points_csv(&cli.out.join("filament.csv"), &kept, Some(&kept_labels))?;

    // When provenance labels are present, report the confusion matrix.
    let truth: Vec<bool> = labels.iter().map(|&l| l != CLUTTER_LABEL).collect();
    let matrix = confusion(&truth, &predicted).map_err(|e| anyhow!("{e}"))?;
    let report = serde_json::json!({
        "bandwidth": decl.bandwidth(),
        "clutter_density": decl.clutter_density(),
        "confusion": matrix,
        "filament_recall": matrix.filament_recall(),
        "clutter_recall": matrix.clutter_recall(),
        "kept": kept.len(),
        "total": points.len(),
    });
    std::fs::write(
        cli.out.join("declutter_report.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    println!(
        "declutter: kept {}/{} points (bandwidth {:.5})",
        kept.len(),
        points.len(),
        decl.bandwidth()
    );
    Ok(())
}

fn cmd_estimate_edt(
    cfg: &PipelineConfig,
    cli: &Cli,
    input: &Path,
) -> Result<(SupportStage, EdtEstimate)> {
    let (points, _) = read_points_csv(input)?;
    let stage = support_stage(&points, cfg)?;
    let region = edt_stage(&stage, cfg)?;
    write_curve_csv(&cli.out.join("region.csv"), &region.region_points)?;
    let meta = serde_json::json!({
        "sigma_hat": region.sigma_hat,
        "y_hat": [region.y_hat.x, region.y_hat.y],
        "delta": region.delta,
        "epsilon": region.epsilon,
        "grid_step": region.grid_step,
        "region_points": region.region_points.len(),
        "boundary_loops": stage.arrangement.loops().len(),
        "components": stage.union.component_count(),
    });
    std::fs::write(cli.out.join("edt.json"), serde_json::to_string_pretty(&meta)?)?;
    std::fs::write(
        cli.out.join("arrangement.json"),
        serde_json::to_string_pretty(&stage.arrangement.to_json())?,
    )?;
    println!(
        "estimate-edt: epsilon {:.5}, sigma_hat {:.5}, {} region points",
        region.epsilon,
        region.sigma_hat,
        region.region_points.len()
    );
    Ok((stage, region))
}

/// Fit the medial estimator per support component. Closed components split
/// into outer/inner loops; single-loop components are open tubes whose caps
/// are removed around endpoints estimated by open extraction.
fn medial_per_component(
    cfg: &PipelineConfig,
    stage: &SupportStage,
    region: &EdtEstimate,
) -> Result<Vec<(u32, MedialEstimate)>> {
    let views = component_views(stage, region)?;
    let contains = |y: Point2| stage.union.contains(y);
    let member =
        |y: Point2| filament_core::edt::membership(&stage.arrangement, &contains, region, y);
    let mut out = Vec::new();
    for view in views {
        let loops = view.arrangement.loops().len();
        let split = if loops >= 2 {
            split_outer_vs_rest(&view.arrangement).map_err(|e| anyhow!("{e}"))?
        } else {
            let params = ExtractParams {
                xi: Some(cfg.extract.xi_factor * region.epsilon),
                eta_gap: Some(cfg.extract.eta_gap_factor * region.epsilon),
                relax: cfg.extract.relax,
                hitting_time_refinement: cfg.extract.hitting_time_refinement,
                ..Default::default()
            };
            let open = extract_curve(&view.region, &member, ExtractMode::Open, &params)
                .map_err(|e| anyhow!("endpoint extraction: {e}"))?;
            let (x0, x1) = open.endpoints.expect("open extraction carries endpoints");
            let split_cfg = EndpointSplitConfig {
                c: cfg.medial.c,
                sigma_hat: region.sigma_hat,
                epsilon: region.epsilon,
            };
            split_open(&view.arrangement, x0, x1, &split_cfg).map_err(|e| anyhow!("{e}"))?
        };
        let spacing = cfg.medial.spacing_factor * region.epsilon;
        let fit = medial_fit(&split, spacing).map_err(|e| anyhow!("{e}"))?;
        out.push((view.component, fit));
    }
    Ok(out)
}

fn cmd_estimate_medial(cfg: &PipelineConfig, cli: &Cli, input: &Path) -> Result<()> {
    let (stage, region) = cmd_estimate_edt(cfg, cli, input)?;
    let fits = medial_per_component(cfg, &stage, &region)?;

    let mut w = std::io::BufWriter::new(std::fs::File::create(cli.out.join("medial.csv"))?);
    writeln!(w, "component,y_x,y_y,yhat_x,yhat_y,mid_x,mid_y")?;
    let mut segment_layers = Vec::new();
    let mut midpoints_all = Vec::new();
    for (comp, fit) in &fits {
        for s in &fit.samples {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                comp,
                fmt_f64(s.on_side0.x),
                fmt_f64(s.on_side0.y),
                fmt_f64(s.on_side1.x),
                fmt_f64(s.on_side1.y),
                fmt_f64(s.midpoint.x),
                fmt_f64(s.midpoint.y)
            )?;
            segment_layers.push(Layer::Polyline {
                points: vec![s.on_side0, s.on_side1],
                closed: false,
                stroke: "#bbbbbb".into(),
                width: 0.002,
            });
            midpoints_all.push(s.midpoint);
        }
        if fit.closed {
            if let Ok(poly) = filament_core::medial::complete(fit) {
                write_curve_csv(
                    &cli.out.join(format!("completed_{comp}.csv")),
                    poly.vertices(),
                )?;
            }
        }
    }
    drop(w);
    let mut layers = segment_layers;
    layers.push(Layer::Points {
        points: midpoints_all,
        radius: 0.006,
        fill: "#cc2222".into(),
    });
    svg::render_svg(&layers, &cli.out.join("medial.svg"))?;
    println!("estimate-medial: fitted {} component(s)", fits.len());
    Ok(())
}

fn cmd_extract(
    cfg: &PipelineConfig,
    cli: &Cli,
    input: &Path,
) -> Result<Vec<(u32, Topology, Vec<Point2>)>> {
    let (stage, region) = cmd_estimate_edt(cfg, cli, input)?;
    let views = component_views(&stage, &region)?;
    let contains = |y: Point2| stage.union.contains(y);
    let member =
        |y: Point2| filament_core::edt::membership(&stage.arrangement, &contains, &region, y);
    let mode = match cfg.extract.mode.as_str() {
        "open" => ExtractMode::Open,
        "closed" => ExtractMode::Closed,
        _ => ExtractMode::General,
    };
    let mut results = Vec::new();
    let mut diagnostics = Vec::new();
    for view in &views {
        let hole_point = split_closed(&view.arrangement).ok().map(|split| {
            let pts = split.side1.sample(split.side1.length() / 64.0);
            pts.iter().fold(Point2::default(), |a, p| a + *p) / pts.len() as f64
        });
        let params = ExtractParams {
            xi: Some(cfg.extract.xi_factor * region.epsilon),
            eta_gap: Some(cfg.extract.eta_gap_factor * region.epsilon),
            relax: cfg.extract.relax,
            hitting_time_refinement: cfg.extract.hitting_time_refinement,
            hole_point,
            ..Default::default()
        };
        let curve = extract_curve(&view.region, &member, mode, &params)
            .map_err(|e| anyhow!("component {}: {e}", view.component))?;
        write_curve_csv(
            &cli.out.join(format!("curve_{}.csv", view.component)),
            curve.path.vertices(),
        )?;
        diagnostics.push(serde_json::json!({
            "component": view.component,
            "topology": match curve.topology { Topology::Open => "open", Topology::Closed => "closed" },
            "path_length": curve.diagnostics.path_length,
            "winding": curve.diagnostics.winding,
            "relax_iterations": curve.diagnostics.relax_iterations,
            "net_nodes": curve.diagnostics.net_nodes,
            "endpoints": curve.endpoints.map(|(a, b)| [[a.x, a.y], [b.x, b.y]]),
        }));
        results.push((
            view.component,
            curve.topology,
            curve.path.vertices().to_vec(),
        ));
    }
    std::fs::write(
        cli.out.join("extract.json"),
        serde_json::to_string_pretty(&serde_json::Value::Array(diagnostics))?,
    )?;
    println!("extract: {} curve(s)", results.len());
    Ok(results)
}

fn cmd_evaluate(cfg: &PipelineConfig, cli: &Cli, estimate: &Path, sampling: f64) -> Result<()> {
    let (points, _) = read_points_csv(estimate)?;
    anyhow::ensure!(!points.is_empty(), "estimate file is empty");
    let curves = pipeline::build_curves(cfg)?;
    let mut per_curve = Vec::new();
    for (i, (curve, _)) in curves.iter().enumerate() {
        let report = hausdorff_report(curve, &points, sampling).map_err(|e| anyhow!("{e}"))?;
        per_curve.push(serde_json::json!({
            "curve": i,
            "hausdorff": report.hausdorff,
            "truth_to_estimate": report.truth_to_estimate,
            "estimate_to_truth": report.estimate_to_truth,
        }));
    }
    // Pooled view: estimate against the union of all curve samplings.
    let mut pooled_truth = Vec::new();
    for (curve, _) in &curves {
        let count = (curve.arclength() / sampling).ceil().max(8.0) as usize;
        pooled_truth.extend(curve.sample_uniform(count));
    }
    let (t2e, _) = filament_core::geom::directed_hausdorff(&pooled_truth, &points)
        .map_err(|e| anyhow!("{e}"))?;
    let (e2t, _) = filament_core::geom::directed_hausdorff(&points, &pooled_truth)
        .map_err(|e| anyhow!("{e}"))?;
    let report = serde_json::json!({
        "per_curve": per_curve,
        "pooled": {
            "hausdorff": t2e.max(e2t),
            "truth_to_estimate": t2e,
            "estimate_to_truth": e2t,
        },
    });
    let path = cli.out.join("evaluation.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report)?)?;
    println!("evaluate: wrote {}", path.display());
    Ok(())
}

fn cmd_rate_experiment(cfg: &PipelineConfig, cli: &Cli) -> Result<()> {
    let estimator = match cfg.eval.estimator.as_str() {
        "edt-region" => EstimatorKind::EdtRegion,
        "edt-extract" => EstimatorKind::EdtExtract,
        "medial-raw" => EstimatorKind::MedialRaw,
        _ => EstimatorKind::MedialCompleted,
    };
    let rc = RateExperimentConfig {
        model: ExperimentModel {
            family: cfg.model.curves[0].family.clone(),
            sigma: cfg.noise.sigma,
            beta: cfg.noise.beta,
        },
        n_grid: cfg.eval.n_grid.clone(),
        replications: cfg.eval.replications,
        estimator,
        base_seed: cfg.eval.base_seed,
    };
    let report = fit_rate(&rc).map_err(|e| anyhow!("{e}"))?;
    std::fs::write(
        cli.out.join("rate.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    let mut w = std::io::BufWriter::new(std::fs::File::create(cli.out.join("rate.csv"))?);
    writeln!(w, "n,median_dh,rate")?;
    for (n, dh) in report.n_grid.iter().zip(&report.dh_medians) {
        let rn = ((*n as f64).ln() / *n as f64).powf(1.0 / (2.0 + report.alpha));
        writeln!(w, "{},{},{}", n, fmt_f64(*dh), fmt_f64(rn))?;
    }
    drop(w);
    // Log-log plot: median errors against log(log n / n) with the fitted line.
    let pts: Vec<Point2> = report
        .n_grid
        .iter()
        .zip(&report.dh_medians)
        .map(|(&n, &d)| Point2::new(((n as f64).ln() / n as f64).ln(), d.ln()))
        .collect();
    let fit_line: Vec<Point2> = {
        let x0 = pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let x1 = pts.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        vec![
            Point2::new(x0, report.fitted_slope * x0 + report.intercept),
            Point2::new(x1, report.fitted_slope * x1 + report.intercept),
        ]
    };
    svg::render_svg(
        &[
            Layer::Polyline {
                points: fit_line,
                closed: false,
                stroke: "#888888".into(),
                width: 0.02,
            },
            Layer::Points {
                points: pts,
                radius: 0.05,
                fill: "#2244cc".into(),
            },
        ],
        &cli.out.join("rate.svg"),
    )?;
    println!(
        "rate-experiment: fitted slope {:.3} (theoretical {:.3}), {} failures",
        report.fitted_slope, report.theoretical_slope, report.failures
    );
    Ok(())
}

fn cmd_render(
    cli: &Cli,
    points: &[PathBuf],
    curves: &[PathBuf],
    arrangement: Option<&Path>,
    file: &str,
) -> Result<()> {
    let palette = ["#222222", "#cc2222", "#2244cc", "#22aa66", "#aa22aa"];
    let mut layers = Vec::new();
    for (i, path) in points.iter().enumerate() {
        let (pts, _) = read_points_csv(path)?;
        layers.push(Layer::Points {
            points: pts,
            radius: 0.006,
            fill: palette[i % palette.len()].into(),
        });
    }
    for (i, path) in curves.iter().enumerate() {
        let (pts, _) = read_points_csv(path)?;
        layers.push(Layer::Polyline {
            points: pts,
            closed: false,
            stroke: palette[(i + 1) % palette.len()].into(),
            width: 0.004,
        });
    }
    if let Some(path) = arrangement {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        layers.extend(arrangement_layers(&value)?);
    }
    anyhow::ensure!(!layers.is_empty(), "render needs at least one input layer");
    svg::render_svg(&layers, &cli.out.join(file))?;
    println!("render: wrote {}", cli.out.join(file).display());
    Ok(())
}

/// Rebuild arc layers from an exported arrangement JSON.
fn arrangement_layers(value: &serde_json::Value) -> Result<Vec<Layer>> {
    let arcs: Vec<filament_core::support_est::BoundaryArc> =
        serde_json::from_value(value.get("arcs").cloned().unwrap_or_default())
            .context("arrangement JSON: arcs")?;
    let loops = value
        .get("loops")
        .and_then(|l| l.as_array())
        .ok_or_else(|| anyhow!("arrangement JSON: loops missing"))?;
    let mut layers = Vec::new();
    for lp in loops {
        let indices: Vec<usize> =
            serde_json::from_value(lp.get("arcs").cloned().unwrap_or_default())?;
        let chain: Vec<filament_core::geom::Arc> =
            indices.iter().map(|&i| arcs[i].arc).collect();
        if chain.is_empty() {
            continue;
        }
        let rebuilt = filament_core::support_est::BoundaryArrangement::from_loops(vec![chain]);
        let mut extent = Vec::new();
        for ba in rebuilt.arcs() {
            extent.push(ba.arc.center + Point2::new(ba.arc.radius, ba.arc.radius));
            extent.push(ba.arc.center - Point2::new(ba.arc.radius, ba.arc.radius));
        }
        layers.push(Layer::Path {
            d: rebuilt.loop_svg_path(0),
            stroke: "#22aa66".into(),
            width: 0.004,
            extent,
        });
    }
    Ok(layers)
}

fn cmd_reproduce(cfg: &PipelineConfig, cli: &Cli, k: usize) -> Result<()> {
    let out = &cli.out;
    // Truth panel: curves plus their tube boundaries.
    let curves = pipeline::build_curves(cfg)?;
    let mut truth_layers = Vec::new();
    for (curve, _) in &curves {
        truth_layers.push(Layer::Polyline {
            points: curve.vertices().to_vec(),
            closed: curve.is_closed(),
            stroke: "#222222".into(),
            width: 0.005,
        });
        if let Ok(model) =
            filament_core::model::SupportModel::new(curve.clone(), cfg.noise.sigma)
        {
            truth_layers.push(Layer::Points {
                points: model.boundary_samples(0.02),
                radius: 0.003,
                fill: "#99bbdd".into(),
            });
        }
    }
    svg::render_svg(&truth_layers, &out.join("truth.svg"))?;

    // Data panel.
    let sample = simulate(cfg, cli.seed)?;
    write_points_csv(&out.join("points.csv"), &sample.points, Some(&sample.labels))?;
    svg::render_svg(
        &[Layer::Points {
            points: sample.points.clone(),
            radius: 0.006,
            fill: "#222222".into(),
        }],
        &out.join("data.svg"),
    )?;

    // Declutter panels.
    cmd_declutter(cfg, cli, &out.join("points.csv"))?;
    let (decl_pts, decl_labels) = read_points_csv(&out.join("filament.csv"))?;
    let (all_pts, _) = read_points_csv(&out.join("points.csv"))?;
    let kept: std::collections::HashSet<(u64, u64)> = decl_pts
        .iter()
        .map(|p| (p.x.to_bits(), p.y.to_bits()))
        .collect();
    let marked_clutter: Vec<Point2> = all_pts
        .iter()
        .filter(|p| !kept.contains(&(p.x.to_bits(), p.y.to_bits())))
        .copied()
        .collect();
    svg::render_svg(
        &[Layer::Points {
            points: marked_clutter,
            radius: 0.006,
            fill: "#bb6622".into(),
        }],
        &out.join("clutter_split.svg"),
    )?;
    svg::render_svg(
        &[Layer::Points {
            points: decl_pts.clone(),
            radius: 0.006,
            fill: "#222222".into(),
        }],
        &out.join("decluttered.svg"),
    )?;
    let _ = decl_labels;

    // EDT panel from the decluttered points.
    let (stage, region) = cmd_estimate_edt(cfg, cli, &out.join("filament.csv"))?;
    let mut edt_layers = vec![Layer::Points {
        points: region.region_points.clone(),
        radius: 0.004,
        fill: "#cc2222".into(),
    }];
    for li in 0..stage.arrangement.loops().len() {
        let mut extent = Vec::new();
        for &ai in &stage.arrangement.loops()[li].arc_indices {
            let arc = stage.arrangement.arcs()[ai].arc;
            extent.push(arc.center + Point2::new(arc.radius, arc.radius));
            extent.push(arc.center - Point2::new(arc.radius, arc.radius));
        }
        edt_layers.push(Layer::Path {
            d: stage.arrangement.loop_svg_path(li),
            stroke: "#99bbdd".into(),
            width: 0.003,
            extent,
        });
    }
    svg::render_svg(&edt_layers, &out.join("edt.svg"))?;

    // Medial panel.
    match cmd_estimate_medial(cfg, cli, &out.join("filament.csv")) {
        Ok(()) => {}
        Err(e) => {
            // Intersecting examples can defeat the per-component split; the
            // panel is then omitted but the pipeline continues.
            eprintln!("note: medial stage incomplete for example {k}: {e:#}");
        }
    }

    // Extracted-curve panel.
    match cmd_extract(cfg, cli, &out.join("filament.csv")) {
        Ok(results) => {
            let mut layers = vec![Layer::Points {
                points: sample.points.clone(),
                radius: 0.004,
                fill: "#cccccc".into(),
            }];
            for (i, (_, topology, vertices)) in results.iter().enumerate() {
                layers.push(Layer::Polyline {
                    points: vertices.clone(),
                    closed: *topology == Topology::Closed,
                    stroke: ["#cc2222", "#2244cc", "#22aa66"][i % 3].into(),
                    width: 0.008,
                });
            }
            svg::render_svg(&layers, &out.join("extracted.svg"))?;
        }
        Err(e) => eprintln!("note: extraction incomplete for example {k}: {e:#}"),
    }

    println!("reproduce-example {k}: artifacts in {}", out.display());
    Ok(())
}
