//! Spontaneous four-wave mixing at first order in the nonlinearity.
//!
//! With photon-number normalized pump spectra `α` (see
//! [`crate::model::PumpPulse`]) the pair amplitude leaving the structure is
//!
//! ```text
//! K(ω₁,ω₂) = γ·ħω_c/(4π²) ∫dω α(ω)·α(ω₁+ω₂−ω)·J(ω, ω₁+ω₂−ω; ω₁, ω₂)
//! ```
//!
//! where `J` is the four-field overlap of two asymptotic-in pump fields and
//! the conjugated asymptotic-out fields of the two generated photons. The
//! pair probability per pulse is `|β|² = ∬|K|²dω₁dω₂` over the collection
//! windows, and the biphoton wave function is `φ = K/β`. For a CW pump this
//! reduces to a pair rate `(Δω/2π)·(γP|J|)²` in a window of width `Δω`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{omega_from_wavelength, HBAR};
use crate::error::{invalid, Error, Result};
use crate::fwm::{overlap4, Factor, StimulatedResult, VALIDITY_WINDOW};
use crate::interp::ChebyshevAxis;
use crate::model::{pump_spectral_amplitude, CollectionWindow, FrequencyGrid, GratingSpec, NonlinearParams, PulseShape, PumpPulse};
use crate::parallel::Execution;
use crate::sweep::SweepResult;
use crate::tmm::{design_periods, internal_fields, FieldDirection, PiecewiseField};

/// Largest `|β|²` accepted before the first-order state is considered
/// invalid.
pub const PERTURBATIVE_LIMIT: f64 = 1e-2;

/// Pair-generation probability and discretized biphoton wave function.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    pub beta_sq: f64,
    pub signal_grid: FrequencyGrid,
    pub idler_grid: FrequencyGrid,
    /// `|φ|²`, row-major (signal index major), normalized so its trapezoid
    /// double integral is 1. All zeros for the zero state.
    pub jsd: Vec<f64>,
    /// Normalized `φ` including phase, when the solver produced it.
    pub amplitude: Option<Vec<Complex64>>,
    pub warnings: Vec<String>,
}

impl TwoPhotonState {
    fn zero(signal_grid: FrequencyGrid, idler_grid: FrequencyGrid) -> Self {
        let n = signal_grid.len() * idler_grid.len();
        TwoPhotonState { beta_sq: 0.0, signal_grid, idler_grid, jsd: vec![0.0; n], amplitude: None, warnings: vec![] }
    }

    /// Builds the state from the unnormalized amplitude `K`.
    pub fn from_unnormalized(
        signal_grid: FrequencyGrid,
        idler_grid: FrequencyGrid,
        k: Vec<Complex64>,
        warnings: Vec<String>,
    ) -> Result<Self> {
        let (ns, ni) = (signal_grid.len(), idler_grid.len());
        if k.len() != ns * ni {
            return invalid("amplitude size does not match the grids");
        }
        let ws = signal_grid.trapezoid_weights();
        let wi = idler_grid.trapezoid_weights();
        let mut beta_sq = 0.0;
        for a in 0..ns {
            for b in 0..ni {
                beta_sq += ws[a] * wi[b] * k[a * ni + b].norm_sqr();
            }
        }
        if beta_sq == 0.0 {
            let mut s = Self::zero(signal_grid, idler_grid);
            s.warnings = warnings;
            return Ok(s);
        }
        if beta_sq > PERTURBATIVE_LIMIT {
            return Err(Error::OutOfDomain(format!(
                "pair probability {beta_sq:.3e} per pulse exceeds the first-order limit {PERTURBATIVE_LIMIT:e}"
            )));
        }
        let norm = beta_sq.sqrt();
        let amplitude: Vec<Complex64> = k.iter().map(|v| v / norm).collect();
        let jsd = amplitude.iter().map(|v| v.norm_sqr()).collect();
        Ok(TwoPhotonState { beta_sq, signal_grid, idler_grid, jsd, amplitude: Some(amplitude), warnings })
    }

    pub fn is_zero(&self) -> bool {
        self.beta_sq == 0.0
    }

    pub fn jsd_at(&self, signal: usize, idler: usize) -> f64 {
        self.jsd[signal * self.idler_grid.len() + idler]
    }

    /// Trapezoid double integral of the stored JSD.
    pub fn jsd_integral(&self) -> f64 {
        let ws = self.signal_grid.trapezoid_weights();
        let wi = self.idler_grid.trapezoid_weights();
        let ni = wi.len();
        let mut s = 0.0;
        for (a, wa) in ws.iter().enumerate() {
            for (b, wb) in wi.iter().enumerate() {
                s += wa * wb * self.jsd[a * ni + b];
            }
        }
        s
    }

    /// Pair rate under the CW identification `|β|²/T_eff`, with `T_eff`
    /// the pulse energy over peak power (the full duration of a top-hat).
    pub fn cw_pair_rate(&self, pulse: &PumpPulse) -> f64 {
        if pulse.peak_power == 0.0 {
            return 0.0;
        }
        self.beta_sq / (pulse.energy() / pulse.peak_power)
    }

    /// Same state with signal and idler roles exchanged.
    pub fn swapped(&self) -> TwoPhotonState {
        let (ns, ni) = (self.signal_grid.len(), self.idler_grid.len());
        let transpose = |v: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; v.len()];
            for a in 0..ns {
                for b in 0..ni {
                    out[b * ns + a] = v[a * ni + b];
                }
            }
            out
        };
        let amplitude = self.amplitude.as_ref().map(|amp| {
            let mut out = vec![Complex64::new(0.0, 0.0); amp.len()];
            for a in 0..ns {
                for b in 0..ni {
                    out[b * ns + a] = amp[a * ni + b];
                }
            }
            out
        });
        TwoPhotonState {
            beta_sq: self.beta_sq,
            signal_grid: self.idler_grid.clone(),
            idler_grid: self.signal_grid.clone(),
            jsd: transpose(&self.jsd),
            amplitude,
            warnings: self.warnings.clone(),
        }
    }
}

/// Spontaneous emission in a collection window inferred from a stimulated
/// measurement: `P_spont = ħω_i·Δω·P_stim/P_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpontRate {
    /// Pairs per second.
    pub rate: f64,
    /// `P_spont` in W.
    pub power: f64,
    /// Δω in rad/s.
    pub bandwidth: f64,
    pub idler_wavelength: f64,
}

pub fn spont_from_stim(stim: &StimulatedResult, signal_power: f64, window: &CollectionWindow) -> Result<SpontRate> {
    if !(signal_power > 0.0) {
        return invalid("stimulated-to-spontaneous conversion needs a positive seed power");
    }
    let hw = HBAR * omega_from_wavelength(stim.idler_wavelength);
    let power = hw * window.width * stim.idler_power_internal / signal_power;
    Ok(SpontRate { rate: power / hw, power, bandwidth: window.width, idler_wavelength: stim.idler_wavelength })
}

/// Discretization of the pair calculation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairGridOptions {
    /// Points per axis of the signal × idler grid.
    pub grid_points: usize,
    /// Quadrature points for the pump integral.
    pub pump_points: usize,
    /// Half-span of the pump integration domain in units of the pulse's
    /// spectral width; `None` picks 16 for top-hat and 12 for Gaussian.
    pub pump_half_span_widths: Option<f64>,
    /// Chebyshev nodes per pump argument of the overlap interpolant.
    pub pump_nodes: usize,
    /// Chebyshev nodes per photon argument of the overlap interpolant.
    pub window_nodes: usize,
}

impl Default for PairGridOptions {
    fn default() -> Self {
        PairGridOptions { grid_points: 201, pump_points: 257, pump_half_span_widths: None, pump_nodes: 9, window_nodes: 5 }
    }
}

impl PairGridOptions {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 3 || self.pump_points < 3 {
            return invalid("pair grids need at least 3 points per axis");
        }
        if self.pump_nodes < 1 || self.window_nodes < 1 {
            return invalid("overlap interpolant needs at least one node per axis");
        }
        Ok(())
    }

    fn pump_half_span(&self, pulse: &PumpPulse) -> f64 {
        let widths = self.pump_half_span_widths.unwrap_or(match pulse.shape {
            PulseShape::TopHat => 16.0,
            PulseShape::Gaussian => 12.0,
        });
        widths * pulse.spectral_width()
    }
}

/// Pump quadrature on `[ω_c − W, ω_c + W]`, checked for spectral coverage.
pub(crate) struct PumpQuadrature {
    pub carrier: f64,
    pub half_span: f64,
    pub offsets: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: Vec<Complex64>,
}

impl PumpQuadrature {
    pub fn new(pulse: &PumpPulse, opts: &PairGridOptions) -> Result<Self> {
        let carrier = pulse.carrier_omega();
        let half_span = opts.pump_half_span(pulse);
        let grid = FrequencyGrid::centered(carrier, 2.0 * half_span, opts.pump_points)?;
        let alpha = pump_spectral_amplitude(pulse, &grid)?;
        let offsets = (0..grid.len()).map(|i| (i as f64 - 0.5 * (grid.len() - 1) as f64) * grid.spacing()).collect();
        Ok(PumpQuadrature { carrier, half_span, offsets, weights: grid.trapezoid_weights(), alpha })
    }

    /// `∫dω α(ω)α(Σ−ω)·g(ω, Σ−ω)` over the pump domain, `Σ` given as an
    /// offset from `2ω_c` and both arguments of `g` as offsets from `ω_c`.
    pub fn pair_integral<F>(&self, pulse: &PumpPulse, sum_offset: f64, mut g: F) -> Complex64
    where
        F: FnMut(f64, f64) -> Complex64,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((&x, &w), &a) in self.offsets.iter().zip(&self.weights).zip(&self.alpha) {
            let y = sum_offset - x;
            if y.abs() > self.half_span {
                continue;
            }
            acc += a * pulse.amplitude(y) * g(x, y) * w;
        }
        acc
    }
}

fn check_windows(pump_omega: f64, signal: &CollectionWindow, idler: &CollectionWindow) -> Result<()> {
    signal.ensure_clear_of(pump_omega)?;
    idler.ensure_clear_of(pump_omega)?;
    let mismatch = (signal.center_omega() + idler.center_omega() - 2.0 * pump_omega).abs();
    if mismatch > 0.5 * (signal.width + idler.width) {
        return invalid(format!(
            "collection windows miss energy conservation with the pump by {mismatch:.3e} rad/s"
        ));
    }
    Ok(())
}

/// Pair state generated in the corrugated waveguide.
///
/// `params.gamma` sets the nonlinearity; the pump power is the pulse's peak
/// power. The signal/idler grids are the collection windows themselves, and
/// both windows must share one width so that `ω₁+ω₂` falls on a lattice.
pub fn two_photon_state_bw(
    spec: &GratingSpec,
    params: &NonlinearParams,
    pulse: &PumpPulse,
    signal_window: &CollectionWindow,
    idler_window: &CollectionWindow,
    opts: &PairGridOptions,
    exec: Execution,
) -> Result<TwoPhotonState> {
    params.validate()?;
    opts.validate()?;
    let wc = pulse.carrier_omega();
    check_windows(wc, signal_window, idler_window)?;
    if ((signal_window.width - idler_window.width) / signal_window.width).abs() > 1e-9 {
        return invalid("signal and idler windows must have the same width");
    }
    for w in [signal_window, idler_window] {
        let (lo, hi) = VALIDITY_WINDOW;
        if !(w.center_wavelength >= lo && w.center_wavelength <= hi) {
            return Err(Error::OutOfDomain("collection window outside the model window".into()));
        }
    }
    let sgrid = signal_window.grid(opts.grid_points)?;
    let igrid = idler_window.grid(opts.grid_points)?;
    if params.gamma == 0.0 || pulse.peak_power == 0.0 {
        return Ok(TwoPhotonState::zero(sgrid, igrid));
    }
    let pump = PumpQuadrature::new(pulse, opts)?;

    // Chebyshev interpolant of J in offsets from each axis' center.
    let (ws0, wi0) = (signal_window.center_omega(), idler_window.center_omega());
    let half_win = 0.5 * signal_window.width;
    let pax = ChebyshevAxis::new(-pump.half_span, pump.half_span, opts.pump_nodes);
    let sax = ChebyshevAxis::new(-half_win, half_win, opts.window_nodes);
    let iax = ChebyshevAxis::new(-half_win, half_win, opts.window_nodes);

    let pump_fields: Vec<PiecewiseField> = exec.map(pax.len(), |a| {
        internal_fields(spec, wc + pax.nodes()[a], FieldDirection::AsymptoticInFromLeft)
    });
    let sig_fields: Vec<PiecewiseField> = exec.map(sax.len(), |c| {
        internal_fields(spec, ws0 + sax.nodes()[c], FieldDirection::AsymptoticOutToRight)
    });
    let idl_fields: Vec<PiecewiseField> = exec.map(iax.len(), |d| {
        internal_fields(spec, wi0 + iax.nodes()[d], FieldDirection::AsymptoticOutToRight)
    });

    let (np, ns, ni) = (pax.len(), sax.len(), iax.len());
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * np + b) * ns + c) * ni + d;
    let upper: Vec<(usize, usize, usize, usize)> = (0..np)
        .flat_map(|a| (a..np).flat_map(move |b| (0..ns).flat_map(move |c| (0..ni).map(move |d| (a, b, c, d)))))
        .collect();
    let values = exec.map(upper.len(), |n| {
        let (a, b, c, d) = upper[n];
        overlap4([
            Factor::plain(&pump_fields[a]),
            Factor::plain(&pump_fields[b]),
            Factor::conj(&sig_fields[c]),
            Factor::conj(&idl_fields[d]),
        ])
    });
    let mut jnodes = vec![Complex64::new(0.0, 0.0); np * np * ns * ni];
    for (&(a, b, c, d), v) in upper.iter().zip(values) {
        jnodes[idx(a, b, c, d)] = v;
        jnodes[idx(b, a, c, d)] = v;
    }

    // G_ab(Σ) on the lattice Σ_m = ω₁₀ + ω₂₀ + m·h.
    let n = opts.grid_points;
    let h = sgrid.spacing();
    let s_off: Vec<f64> = sgrid.points().iter().map(|w| w - ws0).collect();
    let i_off: Vec<f64> = igrid.points().iter().map(|w| w - wi0).collect();
    let sum0 = (ws0 + wi0 - 2.0 * wc) + s_off[0] + i_off[0];
    let gtab = pump_basis_table(&pump, pulse, &pax, sum0, h, 2 * n - 1, exec);

    let ls: Vec<Vec<f64>> = s_off.iter().map(|&x| sax.basis(x)).collect();
    let li: Vec<Vec<f64>> = i_off.iter().map(|&x| iax.basis(x)).collect();
    // Q[i][(a,b,d)] = Σ_c J_abcd ℓ_c(ω₁ᵢ)
    let qtab: Vec<Vec<Complex64>> = exec.map(n, |i| {
        let mut q = vec![Complex64::new(0.0, 0.0); np * np * ni];
        for a in 0..np {
            for b in 0..np {
                for c in 0..ns {
                    let l = ls[i][c];
                    for d in 0..ni {
                        q[(a * np + b) * ni + d] += jnodes[idx(a, b, c, d)] * l;
                    }
                }
            }
        }
        q
    });
    let pref = params.gamma * HBAR * wc / (4.0 * PI * PI);
    let rows: Vec<Vec<Complex64>> = exec.map(n, |i| {
        (0..n)
            .map(|j| {
                let g = &gtab[i + j];
                let q = &qtab[i];
                let mut acc = Complex64::new(0.0, 0.0);
                for ab in 0..np * np {
                    let mut inner = Complex64::new(0.0, 0.0);
                    for d in 0..ni {
                        inner += q[ab * ni + d] * li[j][d];
                    }
                    acc += g[ab] * inner;
                }
                acc * pref
            })
            .collect()
    });
    let k: Vec<Complex64> = rows.into_iter().flatten().collect();
    TwoPhotonState::from_unnormalized(sgrid, igrid, k, vec![])
}

/// `G_ab(Σ_m) = ∫dω α(ω)α(Σ_m−ω)·ℓ_a(ω)·ℓ_b(Σ_m−ω)` for `m = 0..count`.
fn pump_basis_table(
    pump: &PumpQuadrature,
    pulse: &PumpPulse,
    pax: &ChebyshevAxis,
    sum0: f64,
    h: f64,
    count: usize,
    exec: Execution,
) -> Vec<Vec<Complex64>> {
    let np = pax.len();
    let bx: Vec<Vec<f64>> = pump.offsets.iter().map(|&x| pax.basis(x)).collect();
    exec.map(count, |m| {
        let sigma = sum0 + m as f64 * h;
        let mut g = vec![Complex64::new(0.0, 0.0); np * np];
        for (p, (&x, &w)) in pump.offsets.iter().zip(&pump.weights).enumerate() {
            let y = sigma - x;
            if y.abs() > pump.half_span {
                continue;
            }
            let weight = pump.alpha[p] * pulse.amplitude(y) * w;
            if weight == Complex64::new(0.0, 0.0) {
                continue;
            }
            let by = pax.basis(y);
            for a in 0..np {
                let wa = weight * bx[p][a];
                for b in 0..np {
                    g[a * np + b] += wa * by[b];
                }
            }
        }
        g
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastSweep {
    pub sweep: SweepResult,
    /// Least-squares slope of `ln(rate)` against `ln(Δn)`; `None` with fewer
    /// than two points.
    pub slope: Option<f64>,
}

pub const CONTRAST_SWEEP_COLUMNS: [&str; 4] = ["delta_n", "n_periods", "beta_sq", "pair_rate_per_s"];

/// Structure used at one contrast: period count from the asymptotic
/// stopband formula at `target_rejection_db`, period retuned so the
/// stopband is centered on the pump.
pub fn design_for_contrast(base: &GratingSpec, target_rejection_db: f64, delta_n: f64, pump_wavelength: f64) -> Result<GratingSpec> {
    let n = design_periods(target_rejection_db, base.n_lo, delta_n)?;
    base.with_delta_n(delta_n)?.with_periods(n)?.tuned_to(pump_wavelength)
}

/// Pair rate against index contrast at fixed target rejection.
#[allow(clippy::too_many_arguments)]
pub fn contrast_sweep(
    base: &GratingSpec,
    target_rejection_db: f64,
    contrasts: &[f64],
    params: &NonlinearParams,
    pulse: &PumpPulse,
    signal_window: &CollectionWindow,
    idler_window: &CollectionWindow,
    opts: &PairGridOptions,
    exec: Execution,
) -> Result<ContrastSweep> {
    if contrasts.is_empty() {
        return invalid("contrast sweep needs at least one contrast");
    }
    let mut rows = Vec::with_capacity(contrasts.len());
    for &dn in contrasts {
        let spec = design_for_contrast(base, target_rejection_db, dn, pulse.center_wavelength)?;
        let state = two_photon_state_bw(&spec, params, pulse, signal_window, idler_window, opts, exec)?;
        rows.push(vec![dn, spec.n_periods as f64, state.beta_sq, state.cw_pair_rate(pulse)]);
    }
    let slope = log_log_slope(
        &rows.iter().map(|r| r[0]).collect::<Vec<_>>(),
        &rows.iter().map(|r| r[3]).collect::<Vec<_>>(),
    );
    Ok(ContrastSweep { sweep: SweepResult::new(&CONTRAST_SWEEP_COLUMNS, rows), slope })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [1e-3, 2e-3, 4e-3, 8e-3];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-2.0)).collect();
        assert!((log_log_slope(&x, &y).unwrap() + 2.0).abs() < 1e-12);
        assert_eq!(log_log_slope(&x[..1], &y[..1]), None);
    }

    #[test]
    fn unit_stimulated_ratio_gives_photon_energy_rate() {
        let stim = StimulatedResult {
            idler_wavelength: 1560e-9,
            idler_power_internal: 1e-3,
            idler_rate: 0.0,
            per_mw2: 0.0,
            undepleted_strained: false,
        };
        let w = CollectionWindow::new(1560e-9, 2.0 * PI * 10e9).unwrap();
        let s = spont_from_stim(&stim, 1e-3, &w).unwrap();
        assert!((s.power - 8.0e-9).abs() < 0.005 * 8.0e-9, "{}", s.power);
        assert!((s.rate - 2.0 * PI * 10e9).abs() < 1e-3);
        assert!(spont_from_stim(&stim, 0.0, &w).is_err());
        let zero = StimulatedResult { idler_power_internal: 0.0, ..stim };
        assert_eq!(spont_from_stim(&zero, 1e-3, &w).unwrap().rate, 0.0);
    }
}
