//! Scenario configuration file.
//!
//! Every physical quantity carries its unit in the field name. Conversion to
//! SI happens once, in the accessors at the bottom of this file.

use std::f64::consts::PI;
use std::path::Path;

use braggsim_core::quantum::PairGridOptions;
use braggsim_core::tmm::design_periods;
use braggsim_core::{CollectionWindow, GratingSpec, NonlinearParams, PulseShape, PumpPulse, RingSpec};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub structure: Structure,
    pub params: ParamsConfig,
    /// Pump pulse for the pair-generation scenarios.
    pub pulse: PulseConfig,
    /// Signal window first, idler window second.
    pub windows: Vec<WindowConfig>,
    /// Microring used as the reference pair source by `jsd`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparator: Option<RingConfig>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Structure {
    Bragg(BraggConfig),
    Ring(RingConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct BraggConfig {
    pub period_nm: f64,
    /// Fraction of each period occupied by the narrow (low-index) section.
    pub duty_cycle: f64,
    pub n_periods: usize,
    pub n_lo: f64,
    pub delta_n: f64,
    #[serde(default)]
    pub lead_in_um: f64,
    #[serde(default)]
    pub lead_out_um: f64,
    /// Group-velocity dispersion, ps²/m.
    #[serde(default)]
    pub beta2_ps2_per_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub radius_um: f64,
    pub lambda_p_nm: f64,
    pub lambda_s_nm: f64,
    pub lambda_i_nm: f64,
    pub quality_factor: f64,
    pub group_index: f64,
    /// Gaussian pump width; defaults to the pump dwelling time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse_duration_ps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub gamma_per_w_m: f64,
    /// Internal (on-chip) pump power for the stimulated scenarios.
    pub pump_power_mw: f64,
    pub signal_power_mw: f64,
    /// Per-facet coupling loss; when set, rates are also reported per mW² of
    /// fiber-side pump power.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_loss_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum ShapeConfig {
    TopHat,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub shape: ShapeConfig,
    pub duration_ps: f64,
    pub peak_power_mw: f64,
    /// Defaults to the wavelength that conserves energy with the windows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_wavelength_nm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub center_nm: f64,
    pub width_ghz: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub spectrum: SpectrumSweep,
    #[serde(default)]
    pub design: DesignConfig,
    #[serde(default)]
    pub stim: StimSweep,
    #[serde(default)]
    pub spont: SpontConfig,
    #[serde(default)]
    pub pairs: PairsConfig,
    #[serde(default)]
    pub contrast: ContrastConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSweep {
    pub center_nm: f64,
    pub span_nm: f64,
    pub points: usize,
}

impl Default for SpectrumSweep {
    fn default() -> Self {
        SpectrumSweep { center_nm: 1545.5, span_nm: 8.0, points: 4001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub rejection_db: f64,
}

impl Default for DesignConfig {
    fn default() -> Self {
        DesignConfig { rejection_db: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StimSweep {
    pub start_nm: f64,
    pub stop_nm: f64,
    pub signal_nm: f64,
    pub points: usize,
}

impl Default for StimSweep {
    fn default() -> Self {
        StimSweep { start_nm: 1541.9, stop_nm: 1550.0, signal_nm: 1560.0, points: 811 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SpontConfig {
    pub signal_nm: f64,
    /// Defaults to the stopband centre of the transmission spectrum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pump_nm: Option<f64>,
    pub window_ghz: f64,
}

impl Default for SpontConfig {
    fn default() -> Self {
        SpontConfig { signal_nm: 1560.0, pump_nm: None, window_ghz: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PairsConfig {
    /// Keep the unstructured leads in the pair-generation structure.
    pub include_leads: bool,
    /// Recompute the period count for this rejection; `null` keeps
    /// `structure.n_periods`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_rejection_db: Option<f64>,
    /// Retune the period so the stopband centre sits on the pump.
    pub tune_to_pump: bool,
    pub grid_points: usize,
    pub pump_points: usize,
    pub pump_nodes: usize,
    pub window_nodes: usize,
}

impl Default for PairsConfig {
    fn default() -> Self {
        let o = PairGridOptions::default();
        PairsConfig {
            include_leads: false,
            target_rejection_db: Some(20.0),
            tune_to_pump: true,
            grid_points: o.grid_points,
            pump_points: o.pump_points,
            pump_nodes: o.pump_nodes,
            window_nodes: o.window_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ContrastConfig {
    pub delta_n_min: f64,
    pub delta_n_max: f64,
    /// Log-spaced contrasts between the bounds.
    pub points: usize,
    pub target_rejection_db: Vec<f64>,
    pub grid_points: usize,
}

impl Default for ContrastConfig {
    fn default() -> Self {
        ContrastConfig { delta_n_min: 1e-3, delta_n_max: 8e-3, points: 8, target_rejection_db: vec![20.0, 100.0], grid_points: 41 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: String,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: "out".into(), format: Format::Csv }
    }
}

pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let mut path = e.path().to_string();
        let inner = e.into_inner();
        let mut msg = inner.to_string();
        // the tagged structure block is buffered, which hides the inner path
        if path == "structure" {
            if let Some((p, m)) = structure_error(text) {
                path = format!("structure.{p}");
                msg = m;
            }
        }
        CliError::Config(format!("field `{path}` (line {}, column {}): {msg}", inner.line(), inner.column()))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Path and message of the first error inside the `structure` block.
fn structure_error(text: &str) -> Option<(String, String)> {
    let mut doc: serde_json::Value = serde_json::from_str(text).ok()?;
    let block = doc.get_mut("structure")?.as_object_mut()?;
    let tag = block.remove("type")?;
    let value = serde_json::Value::Object(block.clone());
    let err = match tag.as_str()? {
        "bragg" => serde_path_to_error::deserialize::<_, BraggConfig>(value).err()?,
        "ring" => serde_path_to_error::deserialize::<_, RingConfig>(value).err()?,
        _ => return None,
    };
    Some((err.path().to_string(), err.into_inner().to_string()))
}

pub fn schema() -> String {
    let s = schemars::schema_for!(ScenarioConfig);
    serde_json::to_string_pretty(&s).expect("schema serializes") + "\n"
}

fn cfg_err(field: &str) -> impl Fn(braggsim_core::Error) -> CliError + '_ {
    move |e| CliError::Config(format!("field `{field}`: {e}"))
}

fn nm(v: f64) -> f64 {
    v * 1e-9
}

fn ghz_to_rad(v: f64) -> f64 {
    2.0 * PI * v * 1e9
}

impl ScenarioConfig {
    /// Checks everything that can be checked without running a scenario.
    pub fn validate(&self) -> Result<(), CliError> {
        match &self.structure {
            Structure::Bragg(_) => {
                self.grating()?;
            }
            Structure::Ring(r) => {
                r.spec()?;
            }
        }
        if let Some(r) = &self.comparator {
            r.spec().map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("comparator: {m}")),
                other => other,
            })?;
        }
        self.params()?;
        if self.windows.len() != 2 {
            return Err(CliError::Config(format!("field `windows`: expected 2 windows (signal, idler), found {}", self.windows.len())));
        }
        self.windows()?;
        self.pulse()?;
        self.grid_options()?;
        let c = &self.sweep.contrast;
        if !(c.delta_n_min > 0.0 && c.delta_n_max >= c.delta_n_min) || c.points == 0 {
            return Err(CliError::Config("field `sweep.contrast`: need 0 < delta_n_min ≤ delta_n_max and points ≥ 1".into()));
        }
        Ok(())
    }

    pub fn grating(&self) -> Result<GratingSpec, CliError> {
        match &self.structure {
            Structure::Bragg(b) => b.spec(),
            Structure::Ring(_) => Err(CliError::Config("field `structure`: this scenario needs a Bragg structure".into())),
        }
    }

    pub fn ring(&self) -> Option<Result<RingSpec, CliError>> {
        match (&self.structure, &self.comparator) {
            (Structure::Ring(r), _) | (_, Some(r)) => Some(r.spec()),
            _ => None,
        }
    }

    fn ring_config(&self) -> Option<&RingConfig> {
        match (&self.structure, &self.comparator) {
            (Structure::Ring(r), _) | (_, Some(r)) => Some(r),
            _ => None,
        }
    }

    pub fn params(&self) -> Result<NonlinearParams, CliError> {
        let p = &self.params;
        let mut out = NonlinearParams::new(p.gamma_per_w_m, p.pump_power_mw * 1e-3, p.signal_power_mw * 1e-3).map_err(cfg_err("params"))?;
        out.coupling_loss_db = p.coupling_loss_db;
        out.validate().map_err(cfg_err("params.coupling_loss_db"))?;
        Ok(out)
    }

    /// Same nonlinearity with the pulse peak power as pump power.
    pub fn pair_params(&self) -> Result<NonlinearParams, CliError> {
        Ok(NonlinearParams { pump_power: self.pulse.peak_power_mw * 1e-3, ..self.params()? })
    }

    pub fn windows(&self) -> Result<(CollectionWindow, CollectionWindow), CliError> {
        let w = |i: usize| {
            let c = &self.windows[i];
            CollectionWindow::new(nm(c.center_nm), ghz_to_rad(c.width_ghz)).map_err(|e| CliError::Config(format!("field `windows[{i}]`: {e}")))
        };
        Ok((w(0)?, w(1)?))
    }

    pub fn pump_wavelength(&self) -> Result<f64, CliError> {
        if let Some(l) = self.pulse.center_wavelength_nm {
            return Ok(nm(l));
        }
        let (s, i) = self.windows()?;
        Ok(2.0 / (1.0 / s.center_wavelength + 1.0 / i.center_wavelength))
    }

    pub fn pulse(&self) -> Result<PumpPulse, CliError> {
        let p = &self.pulse;
        let shape = match p.shape {
            ShapeConfig::TopHat => PulseShape::TopHat,
            ShapeConfig::Gaussian => PulseShape::Gaussian,
        };
        PumpPulse::new(shape, p.duration_ps * 1e-12, p.peak_power_mw * 1e-3, self.pump_wavelength()?).map_err(cfg_err("pulse"))
    }

    /// Gaussian pulse on the ring pump resonance, as wide as the dwelling
    /// time unless the ring block overrides it.
    pub fn ring_pulse(&self) -> Option<Result<PumpPulse, CliError>> {
        let cfg = self.ring_config()?;
        Some(cfg.spec().and_then(|r| {
            let tau = cfg.pulse_duration_ps.map_or(r.pump_dwelling_time(), |ps| ps * 1e-12);
            PumpPulse::new(PulseShape::Gaussian, tau, self.pulse.peak_power_mw * 1e-3, r.lambda_p).map_err(cfg_err("comparator.pulse_duration_ps"))
        }))
    }

    pub fn grid_options(&self) -> Result<PairGridOptions, CliError> {
        let p = &self.sweep.pairs;
        let o = PairGridOptions {
            grid_points: p.grid_points,
            pump_points: p.pump_points,
            pump_half_span_widths: None,
            pump_nodes: p.pump_nodes,
            window_nodes: p.window_nodes,
        };
        o.validate().map_err(cfg_err("sweep.pairs"))?;
        Ok(o)
    }

    /// Grating without the period or tuning overrides, leads as configured
    /// for pair generation.
    pub fn pair_base_grating(&self) -> Result<GratingSpec, CliError> {
        let g = self.grating()?;
        if self.sweep.pairs.include_leads {
            Ok(g)
        } else {
            g.with_leads(0.0, 0.0).map_err(cfg_err("structure"))
        }
    }

    /// Structure used for pair generation.
    pub fn pair_grating(&self) -> Result<GratingSpec, CliError> {
        let mut g = self.pair_base_grating()?;
        if let Some(db) = self.sweep.pairs.target_rejection_db {
            let n = design_periods(db, g.n_lo, g.delta_n).map_err(cfg_err("sweep.pairs.target_rejection_db"))?;
            g = g.with_periods(n).map_err(cfg_err("sweep.pairs.target_rejection_db"))?;
        }
        if self.sweep.pairs.tune_to_pump {
            g = g.tuned_to(self.pump_wavelength()?).map_err(cfg_err("sweep.pairs.tune_to_pump"))?;
        }
        Ok(g)
    }

    /// Log-spaced contrasts of the contrast sweep.
    pub fn contrasts(&self, points: Option<usize>) -> Vec<f64> {
        let c = &self.sweep.contrast;
        let n = points.unwrap_or(c.points).max(1);
        if n == 1 {
            return vec![c.delta_n_min];
        }
        let ratio = c.delta_n_max / c.delta_n_min;
        (0..n).map(|i| c.delta_n_min * ratio.powf(i as f64 / (n - 1) as f64)).collect()
    }
}

impl BraggConfig {
    pub fn spec(&self) -> Result<GratingSpec, CliError> {
        GratingSpec::new(nm(self.period_nm), self.duty_cycle, self.n_periods, self.n_lo, self.delta_n)
            .and_then(|g| g.with_leads(self.lead_in_um * 1e-6, self.lead_out_um * 1e-6))
            .and_then(|g| g.with_beta2(self.beta2_ps2_per_m * 1e-24))
            .map_err(cfg_err("structure"))
    }
}

impl RingConfig {
    pub fn spec(&self) -> Result<RingSpec, CliError> {
        RingSpec::new(
            self.radius_um * 1e-6,
            nm(self.lambda_p_nm),
            nm(self.lambda_s_nm),
            nm(self.lambda_i_nm),
            self.quality_factor,
            self.group_index,
        )
        .map_err(cfg_err("ring"))
    }
}
