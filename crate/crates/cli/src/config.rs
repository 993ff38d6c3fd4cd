//! JSON pipeline configuration. Every stage's tuning lives here with the
//! library defaults; unknown keys are rejected so typos surface as schema
//! diagnostics.

use anyhow::{bail, Context, Result};
use filament_core::model::CurveFamily;
use filament_core::sampler::ArclengthDensity;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub model: ModelSection,
    pub noise: NoiseSection,
    pub sampler: SamplerSection,
    pub support: SupportSection,
    pub edt: EdtSection,
    pub medial: MedialSection,
    pub extract: ExtractSection,
    pub declutter: DeclutterSection,
    pub eval: EvalSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    /// Curves with mixture weights; weights default to uniform.
    pub curves: Vec<CurveSpec>,
    /// Polyline resolution per curve.
    pub resolution: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(flatten)]
    pub family: CurveFamily,
    #[serde(default)]
    pub weight: Option<f64>,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            curves: vec![CurveSpec {
                family: CurveFamily::Circle {
                    radius: 1.0,
                    center: [0.0, 0.0],
                },
                weight: None,
            }],
            resolution: 512,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    pub sigma: f64,
    pub beta: f64,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            sigma: 0.2,
            beta: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplerSection {
    pub n: usize,
    /// Filament fraction; 1 means no clutter.
    pub eta: f64,
    pub seed: u64,
    /// Arclength density over [0,1].
    pub h: ArclengthDensity,
    /// Clutter rectangle `[xmin, ymin, xmax, ymax]`.
    pub clutter_region: [f64; 4],
}

impl Default for SamplerSection {
    fn default() -> Self {
        Self {
            n: 2000,
            eta: 1.0,
            seed: 0,
            h: ArclengthDensity::Uniform,
            clutter_region: [-1.0, -1.0, 1.0, 1.0],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct SupportSection {
    /// "nn-max" or "rate-formula".
    pub epsilon_method: String,
    /// Constant for the rate formula.
    pub c: f64,
    /// Explicit radius override; bypasses the method when set.
    pub epsilon: Option<f64>,
}

impl Default for SupportSection {
    fn default() -> Self {
        Self {
            epsilon_method: "nn-max".into(),
            c: 1.6,
            epsilon: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EdtSection {
    /// Threshold offset as a multiple of epsilon.
    pub delta_factor: f64,
    /// Region grid step as a multiple of epsilon.
    pub grid_step_factor: f64,
}

impl Default for EdtSection {
    fn default() -> Self {
        Self {
            delta_factor: 2.0,
            grid_step_factor: 0.25,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MedialSection {
    /// Side-0 sampling spacing as a multiple of epsilon.
    pub spacing_factor: f64,
    /// Cap slack constant for the open-curve split.
    pub c: f64,
}

impl Default for MedialSection {
    fn default() -> Self {
        Self {
            spacing_factor: 0.25,
            c: 17.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct ExtractSection {
    /// "open", "closed", or "general".
    pub mode: String,
    /// Net spacing as a multiple of epsilon.
    pub xi_factor: f64,
    /// Cut dilation as a multiple of epsilon.
    pub eta_gap_factor: f64,
    pub relax: bool,
    pub hitting_time_refinement: bool,
}

impl Default for ExtractSection {
    fn default() -> Self {
        Self {
            mode: "general".into(),
            xi_factor: 0.125,
            eta_gap_factor: 0.1,
            relax: true,
            hitting_time_refinement: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeclutterSection {
    /// Kernel bandwidth; null selects the n^(-1/6) rule of thumb.
    pub bandwidth: Option<f64>,
}

impl Default for DeclutterSection {
    fn default() -> Self {
        Self { bandwidth: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct EvalSection {
    pub n_grid: Vec<usize>,
    pub replications: usize,
    /// "edt-region", "edt-extract", "medial-raw", or "medial-completed".
    pub estimator: String,
    pub base_seed: u64,
}

impl Default for EvalSection {
    fn default() -> Self {
        Self {
            n_grid: vec![500, 2000, 8000],
            replications: 10,
            estimator: "edt-extract".into(),
            base_seed: 1,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: PipelineConfig = serde_json::from_str(&text)
            .with_context(|| format!("config schema error in {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.model.curves.is_empty() {
            bail!("model.curves must not be empty");
        }
        if !(self.noise.sigma > 0.0) {
            bail!("noise.sigma must be > 0, got {}", self.noise.sigma);
        }
        if self.noise.beta < 0.0 {
            bail!("noise.beta must be >= 0, got {}", self.noise.beta);
        }
        if !(0.0..=1.0).contains(&self.sampler.eta) {
            bail!("sampler.eta must lie in [0,1], got {}", self.sampler.eta);
        }
        let r = &self.sampler.clutter_region;
        if !(r[0] < r[2] && r[1] < r[3]) {
            bail!("sampler.clutter_region must be [xmin, ymin, xmax, ymax] with positive extent");
        }
        match self.support.epsilon_method.as_str() {
            "nn-max" | "rate-formula" => {}
            other => bail!("support.epsilon-method must be nn-max or rate-formula, got '{other}'"),
        }
        match self.extract.mode.as_str() {
            "open" | "closed" | "general" => {}
            other => bail!("extract.mode must be open, closed, or general, got '{other}'"),
        }
        match self.eval.estimator.as_str() {
            "edt-region" | "edt-extract" | "medial-raw" | "medial-completed" => {}
            other => bail!(
                "eval.estimator must be edt-region, edt-extract, medial-raw, or medial-completed, got '{other}'"
            ),
        }
        if self.edt.delta_factor < 0.0 || self.edt.grid_step_factor <= 0.0 {
            bail!("edt factors must be positive (delta may be zero)");
        }
        if self.medial.c < 1.0 {
            bail!("medial.c must be >= 1, got {}", self.medial.c);
        }
        if !(self.extract.xi_factor > 0.0 && self.extract.xi_factor < 0.25) {
            bail!(
                "extract.xi-factor must lie in (0, 0.25), got {}",
                self.extract.xi_factor
            );
        }
        Ok(())
    }

    /// Mixture weights, defaulting to uniform over the configured curves.
    pub fn curve_weights(&self) -> Vec<f64> {
        let k = self.model.curves.len();
        let explicit: Vec<Option<f64>> = self.model.curves.iter().map(|c| c.weight).collect();
        if explicit.iter().all(|w| w.is_none()) {
            return vec![1.0 / k as f64; k];
        }
        explicit
            .into_iter()
            .map(|w| w.unwrap_or(0.0))
            .collect()
    }
}
