//! One function per subcommand. Each returns typed results; [`crate::output`]
//! turns them into files.

use braggsim_core::constants::wavelength_from_omega;
use braggsim_core::fwm::{pump_sweep, stimulated_idler, suppression_dip, StimulatedResult, SuppressionDip};
use braggsim_core::model::make_wavelength_grid;
use braggsim_core::quantum::{contrast_sweep, spont_from_stim, two_photon_state_bw, ContrastSweep, SpontRate, TwoPhotonState};
use braggsim_core::ring::two_photon_state_ring;
use braggsim_core::schmidt::{jsd_widths, principal_axis_widths, schmidt_analysis, JsdWidths, SchmidtReport};
use braggsim_core::tmm::{asymptotic_rejection_db, design_periods, stopband_report, transmission_spectrum, StopbandReport};
use braggsim_core::{CollectionWindow, Execution, SweepResult};
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::CliError;

pub struct SpectrumRun {
    pub table: SweepResult,
    pub stopband: Option<StopbandReport>,
}

pub fn spectrum(cfg: &ScenarioConfig, points: Option<usize>, exec: Execution) -> Result<SpectrumRun, CliError> {
    let g = cfg.grating()?;
    let s = &cfg.sweep.spectrum;
    let grid = make_wavelength_grid(s.center_nm * 1e-9, s.span_nm * 1e-9, points.unwrap_or(s.points))
        .map_err(|e| CliError::Config(format!("field `sweep.spectrum`: {e}")))?;
    let table = transmission_spectrum(&g, &grid, exec);
    let stopband = stopband_report(&table)?;
    Ok(SpectrumRun { table, stopband })
}

/// Stopband centre, or an error when the spectrum shows no stopband.
pub fn stopband_center(cfg: &ScenarioConfig, exec: Execution) -> Result<f64, CliError> {
    spectrum(cfg, None, exec)?
        .stopband
        .map(|s| s.center_wavelength)
        .ok_or_else(|| CliError::Domain("the configured spectrum shows no stopband (rejection < 3 dB)".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignRun {
    pub rejection_db: f64,
    pub n_lo: f64,
    pub delta_n: f64,
    pub n_periods: usize,
    pub grating_length_um: f64,
    /// Asymptotic rejection of the returned period count.
    pub achieved_rejection_db: f64,
}

pub fn design(cfg: &ScenarioConfig, rejection_db: Option<f64>) -> Result<DesignRun, CliError> {
    let g = cfg.grating()?;
    let rejection_db = rejection_db.unwrap_or(cfg.sweep.design.rejection_db);
    let n = design_periods(rejection_db, g.n_lo, g.delta_n)?;
    Ok(DesignRun {
        rejection_db,
        n_lo: g.n_lo,
        delta_n: g.delta_n,
        n_periods: n,
        grating_length_um: n as f64 * g.period * 1e6,
        achieved_rejection_db: asymptotic_rejection_db(n as f64, g.n_lo, g.delta_n),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DipSummary {
    #[serde(flatten)]
    pub dip: SuppressionDip,
    pub stopband_center_wavelength: f64,
    pub center_offset_nm: f64,
    pub stopband_rejection_db: f64,
    /// Rates per mW² of fiber-side pump power, when a coupling loss is set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_rate_per_mw2_external: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub off_band_median_per_mw2_external: Option<f64>,
}

pub struct StimSweepRun {
    pub table: SweepResult,
    pub summary: DipSummary,
}

pub fn stim_sweep(cfg: &ScenarioConfig, points: Option<usize>, exec: Execution) -> Result<StimSweepRun, CliError> {
    let g = cfg.grating()?;
    let p = cfg.params()?;
    let s = &cfg.sweep.stim;
    let table = pump_sweep(&g, &p, (s.start_nm * 1e-9, s.stop_nm * 1e-9), s.signal_nm * 1e-9, points.unwrap_or(s.points), exec)?;
    let dip = suppression_dip(&g, &table)?;
    let sb = spectrum(cfg, None, exec)?
        .stopband
        .ok_or_else(|| CliError::Domain("the configured spectrum shows no stopband (rejection < 3 dB)".into()))?;
    // rate/P_int² → rate/P_ext², with P_ext = P_int·10^{L/10}
    let external = p.coupling_loss_db.map(|db| 10f64.powf(-db / 5.0));
    Ok(StimSweepRun {
        table,
        summary: DipSummary {
            dip,
            stopband_center_wavelength: sb.center_wavelength,
            center_offset_nm: (dip.center_wavelength - sb.center_wavelength) * 1e9,
            stopband_rejection_db: sb.rejection_db_at_center,
            min_rate_per_mw2_external: external.map(|f| f * dip.min_rate_per_mw2),
            off_band_median_per_mw2_external: external.map(|f| f * dip.off_band_median_per_mw2),
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpontRun {
    pub pump_wavelength: f64,
    pub signal_wavelength: f64,
    pub stimulated: StimulatedResult,
    pub spontaneous: SpontRate,
    /// Spontaneous pair rate divided by the squared internal pump power in mW².
    pub rate_per_mw2: f64,
}

pub fn spont_rate(cfg: &ScenarioConfig, exec: Execution) -> Result<SpontRun, CliError> {
    let g = cfg.grating()?;
    let p = cfg.params()?;
    let s = &cfg.sweep.spont;
    let pump = match s.pump_nm {
        Some(l) => l * 1e-9,
        None => stopband_center(cfg, exec)?,
    };
    let window = CollectionWindow::new(s.signal_nm * 1e-9, 2.0 * std::f64::consts::PI * s.window_ghz * 1e9)
        .map_err(|e| CliError::Config(format!("field `sweep.spont`: {e}")))?;
    let stim = stimulated_idler(&g, &p, pump, s.signal_nm * 1e-9)?;
    let spont = spont_from_stim(&stim, p.signal_power, &window)?;
    let p_mw = p.pump_power * 1e3;
    Ok(SpontRun {
        pump_wavelength: pump,
        signal_wavelength: s.signal_nm * 1e-9,
        stimulated: stim,
        spontaneous: spont,
        rate_per_mw2: if p_mw > 0.0 { spont.rate / (p_mw * p_mw) } else { 0.0 },
    })
}

pub struct ContrastRun {
    pub sweeps: Vec<(f64, ContrastSweep)>,
    pub reference: ContrastReference,
}

/// Pair rates at the configured structure's own contrast for every target.
#[derive(Debug, Clone, Serialize)]
pub struct ContrastReference {
    pub delta_n: f64,
    pub target_rejection_db: Vec<f64>,
    pub n_periods: Vec<f64>,
    pub pair_rate_per_s: Vec<f64>,
    /// `(max − min)/min` over the targets.
    pub relative_spread: f64,
    pub slopes: Vec<Option<f64>>,
}

pub fn contrast(cfg: &ScenarioConfig, points: Option<usize>, exec: Execution) -> Result<ContrastRun, CliError> {
    let base = cfg.pair_base_grating()?;
    let params = cfg.pair_params()?;
    let pulse = cfg.pulse()?;
    let (sw, iw) = cfg.windows()?;
    let c = &cfg.sweep.contrast;
    let opts = braggsim_core::quantum::PairGridOptions { grid_points: c.grid_points, ..cfg.grid_options()? };
    let contrasts = cfg.contrasts(points);
    let mut sweeps = Vec::new();
    let mut rates = Vec::new();
    let mut periods = Vec::new();
    for &db in &c.target_rejection_db {
        let s = contrast_sweep(&base, db, &contrasts, &params, &pulse, &sw, &iw, &opts, exec)?;
        let r = contrast_sweep(&base, db, &[base.delta_n], &params, &pulse, &sw, &iw, &opts, exec)?;
        periods.push(r.sweep.rows[0][1]);
        rates.push(r.sweep.rows[0][3]);
        sweeps.push((db, s));
    }
    let (lo, hi) = rates.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    Ok(ContrastRun {
        reference: ContrastReference {
            delta_n: base.delta_n,
            target_rejection_db: c.target_rejection_db.clone(),
            n_periods: periods,
            pair_rate_per_s: rates,
            relative_spread: if lo > 0.0 { (hi - lo) / lo } else { 0.0 },
            slopes: sweeps.iter().map(|(_, s)| s.slope).collect(),
        },
        sweeps,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StateSummary {
    pub source: &'static str,
    pub beta_sq: f64,
    pub cw_pair_rate_per_s: f64,
    pub pump_wavelength: f64,
    pub purity: f64,
    pub schmidt_number: f64,
    pub leading_schmidt_coefficients: Vec<f64>,
    pub jsd_widths: Option<JsdWidths>,
    /// Major over minor principal-axis standard deviation.
    pub principal_axis_ratio: f64,
    pub warnings: Vec<String>,
}

pub struct StateRun {
    pub state: TwoPhotonState,
    pub schmidt: SchmidtReport,
    pub summary: StateSummary,
}

fn analyse(source: &'static str, state: TwoPhotonState, pump: f64, duration: f64) -> Result<StateRun, CliError> {
    let schmidt = schmidt_analysis(&state)?;
    let widths = jsd_widths(&state).ok();
    let (major, minor) = principal_axis_widths(&state);
    let summary = StateSummary {
        source,
        beta_sq: state.beta_sq,
        cw_pair_rate_per_s: state.beta_sq / duration,
        pump_wavelength: pump,
        purity: schmidt.purity,
        schmidt_number: schmidt.schmidt_number,
        leading_schmidt_coefficients: schmidt.schmidt_coefficients.iter().take(10).copied().collect(),
        jsd_widths: widths,
        principal_axis_ratio: major / minor,
        warnings: state.warnings.clone(),
    };
    Ok(StateRun { state, schmidt, summary })
}

/// Stimulated-emission estimate of the same rate the Bragg state predicts.
#[derive(Debug, Clone, Serialize)]
pub struct Consistency {
    pub state_rate_per_s: f64,
    pub stimulated_rate_per_s: f64,
    /// stimulated / state.
    pub ratio: f64,
}

pub struct JsdRun {
    pub bragg: Option<StateRun>,
    pub ring: Option<StateRun>,
    pub consistency: Option<Consistency>,
}

pub fn bragg_state(cfg: &ScenarioConfig, points: Option<usize>, exec: Execution) -> Result<(StateRun, Consistency), CliError> {
    let g = cfg.pair_grating()?;
    let params = cfg.pair_params()?;
    let pulse = cfg.pulse()?;
    let (sw, iw) = cfg.windows()?;
    let mut opts = cfg.grid_options()?;
    if let Some(n) = points {
        opts.grid_points = n;
    }
    let state = two_photon_state_bw(&g, &params, &pulse, &sw, &iw, &opts, exec)?;
    let stim = stimulated_idler(&g, &params, pulse.center_wavelength, sw.center_wavelength)?;
    let spont = spont_from_stim(&stim, params.signal_power, &sw)?;
    let run = analyse("bragg", state, pulse.center_wavelength, pulse.energy() / pulse.peak_power.max(f64::MIN_POSITIVE))?;
    let state_rate = run.summary.cw_pair_rate_per_s;
    let consistency = Consistency { state_rate_per_s: state_rate, stimulated_rate_per_s: spont.rate, ratio: spont.rate / state_rate };
    Ok((run, consistency))
}

pub fn ring_state(cfg: &ScenarioConfig, points: Option<usize>, exec: Execution) -> Result<Option<StateRun>, CliError> {
    let (Some(ring), Some(pulse)) = (cfg.ring(), cfg.ring_pulse()) else { return Ok(None) };
    let (ring, pulse) = (ring?, pulse?);
    let mut opts = cfg.grid_options()?;
    if let Some(n) = points {
        opts.grid_points = n;
    }
    let state = two_photon_state_ring(&ring, &cfg.pair_params()?, &pulse, &opts, exec)?;
    analyse("ring", state, pulse.center_wavelength, pulse.energy() / pulse.peak_power.max(f64::MIN_POSITIVE)).map(Some)
}

pub fn jsd(cfg: &ScenarioConfig, points: Option<usize>, exec: Execution) -> Result<JsdRun, CliError> {
    let (bragg, consistency) = match cfg.grating() {
        Ok(_) => {
            let (b, c) = bragg_state(cfg, points, exec)?;
            (Some(b), Some(c))
        }
        Err(_) => (None, None),
    };
    let ring = ring_state(cfg, points, exec)?;
    Ok(JsdRun { bragg, ring, consistency })
}

/// `lambda_signal_nm, lambda_idler_nm, jsd_normalized` triplets.
pub fn jsd_table(state: &TwoPhotonState) -> SweepResult {
    let ls: Vec<f64> = state.signal_grid.points().iter().map(|&w| wavelength_from_omega(w) * 1e9).collect();
    let li: Vec<f64> = state.idler_grid.points().iter().map(|&w| wavelength_from_omega(w) * 1e9).collect();
    let mut rows = Vec::with_capacity(ls.len() * li.len());
    for (a, &x) in ls.iter().enumerate() {
        for (b, &y) in li.iter().enumerate() {
            rows.push(vec![x, y, state.jsd_at(a, b)]);
        }
    }
    SweepResult::new(&["lambda_signal_nm", "lambda_idler_nm", "jsd_normalized"], rows)
}

/// Grid description for the JSON header of a JSD file.
#[derive(Debug, Clone, Serialize)]
pub struct GridHeader {
    pub points: usize,
    pub first_omega: f64,
    pub spacing_omega: f64,
    pub center_wavelength_nm: f64,
}

pub fn grid_header(g: &braggsim_core::FrequencyGrid) -> GridHeader {
    let center = 0.5 * (g.first() + g.last());
    GridHeader {
        points: g.len(),
        first_omega: g.first(),
        spacing_omega: g.spacing(),
        center_wavelength_nm: wavelength_from_omega(center) * 1e9,
    }
}

