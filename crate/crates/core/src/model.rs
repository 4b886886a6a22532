//! Domain types shared by every solver: structure descriptions, pump
//! envelopes, collection windows and frequency grids.
//!
//! All quantities are SI (m, s, rad/s, W) unless a name says otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{omega_from_wavelength, wavelength_from_omega, C, HBAR};
use crate::error::{invalid, Error, Result};

/// Reference wavelength about which the optional group-velocity dispersion
/// term is expanded.
pub const DISPERSION_REFERENCE_WAVELENGTH: f64 = 1550e-9;

/// Periodically corrugated waveguide.
///
/// Each period is a narrow segment (index `n_lo`, length `duty_cycle·period`)
/// followed by a wide segment (index `n_lo + delta_n`, the rest of the
/// period). The unstructured leads on either side are wide waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GratingSpec {
    pub period: f64,
    pub duty_cycle: f64,
    pub n_periods: usize,
    pub n_lo: f64,
    pub delta_n: f64,
    pub lead_in_length: f64,
    pub lead_out_length: f64,
    /// Group-velocity dispersion β₂ (s²/m) shared by both segment types.
    #[serde(default)]
    pub beta2: f64,
}

impl GratingSpec {
    pub fn new(
        period: f64,
        duty_cycle: f64,
        n_periods: usize,
        n_lo: f64,
        delta_n: f64,
    ) -> Result<Self> {
        let spec = GratingSpec {
            period,
            duty_cycle,
            n_periods,
            n_lo,
            delta_n,
            lead_in_length: 0.0,
            lead_out_length: 0.0,
            beta2: 0.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_leads(mut self, lead_in: f64, lead_out: f64) -> Result<Self> {
        self.lead_in_length = lead_in;
        self.lead_out_length = lead_out;
        self.validate()?;
        Ok(self)
    }

    pub fn with_delta_n(mut self, delta_n: f64) -> Result<Self> {
        self.delta_n = delta_n;
        self.validate()?;
        Ok(self)
    }

    pub fn with_periods(mut self, n_periods: usize) -> Result<Self> {
        self.n_periods = n_periods;
        self.validate()?;
        Ok(self)
    }

    pub fn with_beta2(mut self, beta2: f64) -> Result<Self> {
        self.beta2 = beta2;
        self.validate()?;
        Ok(self)
    }

    /// Same structure with the period rescaled so the first-order Bragg
    /// wavelength `2·n_avg·Λ` lands on `lambda`.
    pub fn tuned_to(mut self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return invalid("tuning wavelength must be positive");
        }
        self.period = lambda / (2.0 * self.mean_index());
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0) {
            return invalid(format!("period must be positive, got {}", self.period));
        }
        if !(self.duty_cycle > 0.0 && self.duty_cycle < 1.0) {
            return invalid(format!("duty cycle must lie in (0, 1), got {}", self.duty_cycle));
        }
        if self.n_periods == 0 {
            return invalid("grating needs at least one period");
        }
        if !(self.n_lo > 1.0) {
            return invalid(format!("n_lo must exceed 1, got {}", self.n_lo));
        }
        if !self.delta_n.is_finite() || self.delta_n.abs() / self.n_lo > 0.1 {
            return invalid(format!(
                "index contrast {} is not a small perturbation of n_lo = {}",
                self.delta_n, self.n_lo
            ));
        }
        if !(self.n_lo + self.delta_n > 1.0) {
            return invalid("wide-segment index must exceed 1");
        }
        if !(self.lead_in_length >= 0.0 && self.lead_out_length >= 0.0) {
            return invalid("lead lengths must be non-negative");
        }
        if !self.beta2.is_finite() {
            return invalid("beta2 must be finite");
        }
        Ok(())
    }

    /// Index of the wide (unperturbed) waveguide, also used for the leads.
    #[inline]
    pub fn n_hi(&self) -> f64 {
        self.n_lo + self.delta_n
    }

    #[inline]
    pub fn narrow_length(&self) -> f64 {
        self.duty_cycle * self.period
    }

    #[inline]
    pub fn wide_length(&self) -> f64 {
        (1.0 - self.duty_cycle) * self.period
    }

    pub fn mean_index(&self) -> f64 {
        self.duty_cycle * self.n_lo + (1.0 - self.duty_cycle) * self.n_hi()
    }

    pub fn grating_length(&self) -> f64 {
        self.n_periods as f64 * self.period
    }

    pub fn total_length(&self) -> f64 {
        self.lead_in_length + self.grating_length() + self.lead_out_length
    }

    pub fn bragg_wavelength(&self) -> f64 {
        2.0 * self.mean_index() * self.period
    }

    /// Propagation constant in a segment of index `n`.
    #[inline]
    pub fn wavenumber(&self, n: f64, omega: f64) -> f64 {
        let k = n * omega / C;
        if self.beta2 == 0.0 {
            k
        } else {
            let d = omega - omega_from_wavelength(DISPERSION_REFERENCE_WAVELENGTH);
            k + 0.5 * self.beta2 * d * d
        }
    }
}

/// Side-coupled microring used as the reference pair source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingSpec {
    pub radius: f64,
    pub lambda_p: f64,
    pub lambda_s: f64,
    pub lambda_i: f64,
    pub q_p: f64,
    pub q_s: f64,
    pub q_i: f64,
    pub group_index: f64,
}

impl RingSpec {
    /// Ring with one loaded quality factor shared by the three resonances.
    pub fn new(
        radius: f64,
        lambda_p: f64,
        lambda_s: f64,
        lambda_i: f64,
        quality_factor: f64,
        group_index: f64,
    ) -> Result<Self> {
        let ring = RingSpec {
            radius,
            lambda_p,
            lambda_s,
            lambda_i,
            q_p: quality_factor,
            q_s: quality_factor,
            q_i: quality_factor,
            group_index,
        };
        ring.validate()?;
        Ok(ring)
    }

    pub fn with_quality_factor(mut self, q: f64) -> Result<Self> {
        self.q_p = q;
        self.q_s = q;
        self.q_i = q;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return invalid("ring radius must be positive");
        }
        for (name, l) in [("pump", self.lambda_p), ("signal", self.lambda_s), ("idler", self.lambda_i)] {
            if !(l > 0.0) {
                return invalid(format!("{name} resonance wavelength must be positive"));
            }
        }
        for q in [self.q_p, self.q_s, self.q_i] {
            if !(q > 0.0) {
                return invalid("quality factors must be positive");
            }
        }
        if !(self.group_index >= 1.0) {
            return invalid("group index must be at least 1");
        }
        Ok(())
    }

    pub fn circumference(&self) -> f64 {
        2.0 * PI * self.radius
    }

    pub fn round_trip_time(&self) -> f64 {
        self.group_index * self.circumference() / C
    }

    /// Free spectral range in rad/s.
    pub fn fsr_omega(&self) -> f64 {
        2.0 * PI / self.round_trip_time()
    }

    /// Photon (energy) lifetime `Q/ω₀ = Qλ/(2πc)` of a resonance.
    pub fn dwelling_time(lambda: f64, q: f64) -> f64 {
        q * lambda / (2.0 * PI * C)
    }

    pub fn pump_dwelling_time(&self) -> f64 {
        Self::dwelling_time(self.lambda_p, self.q_p)
    }

    pub fn omegas(&self) -> (f64, f64, f64) {
        (
            omega_from_wavelength(self.lambda_p),
            omega_from_wavelength(self.lambda_s),
            omega_from_wavelength(self.lambda_i),
        )
    }

    /// Mismatch `2ω_P − ω_S − ω_I` measured in pump linewidths `ω_P/Q_P`.
    pub fn energy_mismatch_linewidths(&self) -> f64 {
        let (wp, ws, wi) = self.omegas();
        (2.0 * wp - ws - wi) / (wp / self.q_p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    TopHat,
    Gaussian,
}

/// Pump envelope.
///
/// `duration` is the full width for [`PulseShape::TopHat`] and the 1/e
/// intensity half-duration `τ` of `P(t) = P₀·exp(−t²/τ²)` for
/// [`PulseShape::Gaussian`].
///
/// Spectral amplitudes are photon-number normalized: with the power
/// normalized envelope `Ã(δ) = ∫A(t)e^{iδt}dt` and carrier `ω_c`,
/// `α(δ) = Ã(δ)/√(ħω_c)`, so `∫|α|²dω/2π` is the number of pump photons
/// in the pulse. Every nonlinear solver in the crate uses this convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpPulse {
    pub shape: PulseShape,
    pub duration: f64,
    pub peak_power: f64,
    pub center_wavelength: f64,
}

impl PumpPulse {
    pub fn new(shape: PulseShape, duration: f64, peak_power: f64, center_wavelength: f64) -> Result<Self> {
        if !(duration > 0.0) {
            return invalid("pulse duration must be positive");
        }
        if !(peak_power >= 0.0) {
            return invalid("peak power must be non-negative");
        }
        if !(center_wavelength > 0.0) {
            return invalid("pulse wavelength must be positive");
        }
        Ok(PumpPulse { shape, duration, peak_power, center_wavelength })
    }

    pub fn with_peak_power(mut self, p: f64) -> Self {
        self.peak_power = p;
        self
    }

    pub fn with_center_wavelength(mut self, lambda: f64) -> Self {
        self.center_wavelength = lambda;
        self
    }

    pub fn carrier_omega(&self) -> f64 {
        omega_from_wavelength(self.center_wavelength)
    }

    /// Pulse energy in J.
    pub fn energy(&self) -> f64 {
        match self.shape {
            PulseShape::TopHat => self.peak_power * self.duration,
            PulseShape::Gaussian => self.peak_power * self.duration * PI.sqrt(),
        }
    }

    pub fn photon_number(&self) -> f64 {
        self.energy() / (HBAR * self.carrier_omega())
    }

    /// Characteristic spectral width in rad/s: the first null `2π/T` for a
    /// top-hat, `1/τ` for a Gaussian.
    pub fn spectral_width(&self) -> f64 {
        match self.shape {
            PulseShape::TopHat => 2.0 * PI / self.duration,
            PulseShape::Gaussian => 1.0 / self.duration,
        }
    }

    /// Power-normalized spectral amplitude `Ã(δ)` (units √W·s) at detuning
    /// `δ = ω − ω_c`.
    pub fn field_spectrum(&self, detuning: f64) -> f64 {
        let a0 = self.peak_power.sqrt();
        match self.shape {
            PulseShape::TopHat => {
                let x = 0.5 * detuning * self.duration;
                let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
                a0 * self.duration * sinc
            }
            PulseShape::Gaussian => {
                let t = self.duration;
                a0 * t * (2.0 * PI).sqrt() * (-0.5 * detuning * detuning * t * t).exp()
            }
        }
    }

    /// Photon-number normalized amplitude `α(δ)`.
    pub fn amplitude(&self, detuning: f64) -> Complex64 {
        Complex64::new(self.field_spectrum(detuning) / (HBAR * self.carrier_omega()).sqrt(), 0.0)
    }
}

/// Sample `α(ω)` on `grid`, refusing grids that lose more than 1% of the
/// pulse's photon number.
pub fn pump_spectral_amplitude(pulse: &PumpPulse, grid: &FrequencyGrid) -> Result<Vec<Complex64>> {
    let wc = pulse.carrier_omega();
    let needed = 20.0 * pulse.spectral_width();
    if grid.span() < needed {
        return Err(Error::Coverage(format!(
            "grid spans {:.3e} rad/s but the pulse needs at least {:.3e} rad/s (20 spectral widths)",
            grid.span(),
            needed
        )));
    }
    let alpha: Vec<Complex64> = grid.points().iter().map(|&w| pulse.amplitude(w - wc)).collect();
    if pulse.peak_power > 0.0 {
        let captured: f64 = grid
            .trapezoid_weights()
            .iter()
            .zip(&alpha)
            .map(|(w, a)| w * a.norm_sqr())
            .sum::<f64>()
            / (2.0 * PI);
        let deficit = (captured - pulse.photon_number()).abs() / pulse.photon_number();
        if deficit > 0.01 {
            return Err(Error::Coverage(format!(
                "grid captures the pulse norm only to {:.2}%",
                100.0 * deficit
            )));
        }
    }
    Ok(alpha)
}

/// Spectral interval in which one photon of a pair is collected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollectionWindow {
    pub center_wavelength: f64,
    /// Full width Δω in rad/s.
    pub width: f64,
}

impl CollectionWindow {
    pub fn new(center_wavelength: f64, width: f64) -> Result<Self> {
        if !(center_wavelength > 0.0) {
            return invalid("window wavelength must be positive");
        }
        if !(width > 0.0) {
            return invalid("window width must be positive");
        }
        Ok(CollectionWindow { center_wavelength, width })
    }

    pub fn center_omega(&self) -> f64 {
        omega_from_wavelength(self.center_wavelength)
    }

    pub fn contains(&self, omega: f64) -> bool {
        (omega - self.center_omega()).abs() <= 0.5 * self.width
    }

    /// Errors if the pump carrier falls inside the window.
    pub fn ensure_clear_of(&self, pump_omega: f64) -> Result<()> {
        if self.contains(pump_omega) {
            return invalid(format!(
                "collection window at {:.4} nm overlaps the pump line",
                self.center_wavelength * 1e9
            ));
        }
        Ok(())
    }

    pub fn grid(&self, n_points: usize) -> Result<FrequencyGrid> {
        FrequencyGrid::centered(self.center_omega(), self.width, n_points)
    }
}

/// Uniform, strictly increasing angular-frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    spacing: f64,
}

impl FrequencyGrid {
    pub fn uniform(start: f64, stop: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return invalid(format!("a grid needs at least 2 points, got {n_points}"));
        }
        if !(stop > start) || !start.is_finite() || !stop.is_finite() {
            return invalid("grid bounds must be finite and increasing");
        }
        let spacing = (stop - start) / (n_points - 1) as f64;
        let points = (0..n_points).map(|i| start + spacing * i as f64).collect();
        Ok(FrequencyGrid { points, spacing })
    }

    /// `n_points` samples of full width `width` centered exactly on `center`.
    pub fn centered(center: f64, width: f64, n_points: usize) -> Result<Self> {
        if !(width > 0.0) {
            return invalid("grid width must be positive");
        }
        if n_points < 2 {
            return invalid(format!("a grid needs at least 2 points, got {n_points}"));
        }
        let spacing = width / (n_points - 1) as f64;
        let mid = (n_points - 1) as f64 / 2.0;
        let points = (0..n_points).map(|i| center + (i as f64 - mid) * spacing).collect();
        Ok(FrequencyGrid { points, spacing })
    }

    /// Wraps explicit samples after checking monotonicity and uniformity.
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return invalid("a grid needs at least 2 points");
        }
        let spacing = (points[points.len() - 1] - points[0]) / (points.len() - 1) as f64;
        if !(spacing > 0.0) {
            return invalid("grid must be strictly increasing");
        }
        for (i, w) in points.windows(2).enumerate() {
            let d = w[1] - w[0];
            if !(d > 0.0) {
                return invalid(format!("grid not strictly increasing at index {i}"));
            }
            // 1e-9 relative uniformity, measured against the absolute frequency
            // so that rounding in ω itself is not mistaken for non-uniformity.
            if (d - spacing).abs() > 1e-9 * spacing.max(1e-9 * w[0].abs()) {
                return invalid(format!("grid spacing not uniform at index {i}"));
            }
        }
        Ok(FrequencyGrid { points, spacing })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn span(&self) -> f64 {
        self.last() - self.first()
    }

    pub fn wavelengths(&self) -> Vec<f64> {
        self.points.iter().map(|&w| wavelength_from_omega(w)).collect()
    }

    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.points.len();
        (0..n)
            .map(|i| if i == 0 || i == n - 1 { 0.5 * self.spacing } else { self.spacing })
            .collect()
    }
}

/// Grid uniform in angular frequency, centered on `ω(center)` and spanning
/// the angular-frequency extent of `[center − span/2, center + span/2]`.
pub fn make_wavelength_grid(center: f64, span: f64, n_points: usize) -> Result<FrequencyGrid> {
    if !(center > 0.0) {
        return invalid("center wavelength must be positive");
    }
    if !(span > 0.0) || span >= 2.0 * center {
        return invalid(format!("wavelength span must be positive and below 2·center, got {span}"));
    }
    if n_points < 2 {
        return invalid(format!("a grid needs at least 2 points, got {n_points}"));
    }
    let width = omega_from_wavelength(center - 0.5 * span) - omega_from_wavelength(center + 0.5 * span);
    FrequencyGrid::centered(omega_from_wavelength(center), width, n_points)
}

/// Powers inside the chip plus the optional per-facet loss used to map them
/// to fiber-side values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearParams {
    /// γ in 1/(W·m).
    pub gamma: f64,
    pub pump_power: f64,
    pub signal_power: f64,
    pub coupling_loss_db: Option<f64>,
}

impl NonlinearParams {
    pub fn new(gamma: f64, pump_power: f64, signal_power: f64) -> Result<Self> {
        let p = NonlinearParams { gamma, pump_power, signal_power, coupling_loss_db: None };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return invalid("gamma must be non-negative");
        }
        if !(self.pump_power >= 0.0 && self.signal_power >= 0.0) {
            return invalid("powers must be non-negative");
        }
        if let Some(db) = self.coupling_loss_db {
            if !(db >= 0.0) {
                return invalid("coupling loss must be a non-negative dB value");
            }
        }
        Ok(())
    }

    /// Fiber-side power needed to deliver `internal` watts into the chip.
    pub fn external_power(&self, internal: f64) -> f64 {
        match self.coupling_loss_db {
            Some(db) => internal * 10f64.powf(db / 10.0),
            None => internal,
        }
    }
}
