//! Classical stimulated four-wave mixing in the corrugated waveguide.
//!
//! Pump and seed enter through the input facet as asymptotic-in fields; the
//! idler is projected on the asymptotic-out mode of the output facet. With
//! unit-amplitude field profiles the overlap
//! `J = ∫ f_p² f_s* f_i* dz` carries all structural dependence and
//! `P_i = (γP_p)²·P_s·|J|²` in the undepleted-pump limit.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{omega_from_wavelength, photon_energy, to_db, wavelength_from_omega};
use crate::error::{Error, Result};
use crate::model::{GratingSpec, NonlinearParams};
use crate::parallel::Execution;
use crate::sweep::SweepResult;
use crate::tmm::{internal_fields, transmission, FieldDirection, FieldSegment, PiecewiseField};

/// Wavelength range (m) in which the constant-index model is trusted.
pub const VALIDITY_WINDOW: (f64, f64) = (1500e-9, 1600e-9);

/// One factor of an overlap integrand, optionally complex conjugated.
#[derive(Debug, Clone, Copy)]
pub struct Factor<'a> {
    pub field: &'a PiecewiseField,
    pub conj: bool,
}

impl<'a> Factor<'a> {
    pub fn plain(field: &'a PiecewiseField) -> Self {
        Factor { field, conj: false }
    }

    pub fn conj(field: &'a PiecewiseField) -> Self {
        Factor { field, conj: true }
    }
}

#[derive(Clone, Copy)]
struct Term {
    coef: Complex64,
    half: f64,
    phase: Complex64,
}

#[inline]
fn terms(seg: &FieldSegment, conj: bool) -> [Term; 2] {
    let half = 0.5 * seg.k * seg.length();
    let h = Complex64::from_polar(1.0, half);
    if conj {
        [
            Term { coef: seg.a_fwd.conj(), half: -half, phase: h.conj() },
            Term { coef: seg.a_bwd.conj(), half, phase: h },
        ]
    } else {
        [
            Term { coef: seg.a_fwd, half, phase: h },
            Term { coef: seg.a_bwd, half: -half, phase: h.conj() },
        ]
    }
}

/// `∫₀^d e^{iqζ}dζ` given `half = qd/2` and `phase = e^{i·half}`.
#[inline]
fn integral_from_phase(d: f64, half: f64, phase: Complex64) -> Complex64 {
    let sinc = if half.abs() < 1e-4 { 1.0 - half * half / 6.0 } else { phase.im / half };
    phase * (d * sinc)
}

/// Exact integral over the structure of the product of four fields built on
/// the same section layout.
///
/// Within a section each factor is a sum of two plane waves, so the
/// integrand is a sum of 16 exponentials integrated in closed form.
pub fn overlap4(factors: [Factor<'_>; 4]) -> Complex64 {
    let n = factors[0].field.segments.len();
    debug_assert!(factors.iter().all(|f| f.field.segments.len() == n));
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let seg0 = &factors[0].field.segments[j];
        let d = seg0.length();
        let t0 = terms(seg0, factors[0].conj);
        let t1 = terms(&factors[1].field.segments[j], factors[1].conj);
        let t2 = terms(&factors[2].field.segments[j], factors[2].conj);
        let t3 = terms(&factors[3].field.segments[j], factors[3].conj);
        let mut acc = Complex64::new(0.0, 0.0);
        for a in &t0 {
            for b in &t1 {
                let cab = a.coef * b.coef;
                let hab = a.half + b.half;
                let pab = a.phase * b.phase;
                for c in &t2 {
                    let cabc = cab * c.coef;
                    let habc = hab + c.half;
                    let pabc = pab * c.phase;
                    for e in &t3 {
                        acc += cabc * e.coef * integral_from_phase(d, habc + e.half, pabc * e.phase);
                    }
                }
            }
        }
        total += acc;
    }
    total
}

fn check_wavelength(name: &str, lambda: f64) -> Result<()> {
    let (lo, hi) = VALIDITY_WINDOW;
    if !(lambda >= lo && lambda <= hi) {
        return Err(Error::OutOfDomain(format!(
            "{name} wavelength {:.3} nm lies outside the {:.0}–{:.0} nm model window",
            lambda * 1e9,
            lo * 1e9,
            hi * 1e9
        )));
    }
    Ok(())
}

/// Idler angular frequency fixed by energy conservation, `2ω_p − ω_s`.
pub fn idler_omega(lambda_p: f64, lambda_s: f64) -> f64 {
    2.0 * omega_from_wavelength(lambda_p) - omega_from_wavelength(lambda_s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FwmOverlap {
    /// J in metres.
    pub value: Complex64,
    pub pump_wavelength: f64,
    pub signal_wavelength: f64,
    pub idler_wavelength: f64,
    pub total_length: f64,
}

impl FwmOverlap {
    /// `|J|²/L²`, the efficiency relative to a uniform phase-matched guide of
    /// the same length.
    pub fn relative_efficiency(&self) -> f64 {
        self.value.norm_sqr() / (self.total_length * self.total_length)
    }
}

/// The three fields entering the stimulated overlap.
pub struct StimulatedFields {
    pub pump: PiecewiseField,
    pub signal: PiecewiseField,
    pub idler_out: PiecewiseField,
}

pub fn stimulated_fields(spec: &GratingSpec, lambda_p: f64, lambda_s: f64) -> Result<StimulatedFields> {
    check_wavelength("pump", lambda_p)?;
    check_wavelength("signal", lambda_s)?;
    let wi = idler_omega(lambda_p, lambda_s);
    check_wavelength("idler", wavelength_from_omega(wi))?;
    Ok(StimulatedFields {
        pump: internal_fields(spec, omega_from_wavelength(lambda_p), FieldDirection::AsymptoticInFromLeft),
        signal: internal_fields(spec, omega_from_wavelength(lambda_s), FieldDirection::AsymptoticInFromLeft),
        idler_out: internal_fields(spec, wi, FieldDirection::AsymptoticOutToRight),
    })
}

pub fn overlap_integral(spec: &GratingSpec, lambda_p: f64, lambda_s: f64) -> Result<FwmOverlap> {
    let f = stimulated_fields(spec, lambda_p, lambda_s)?;
    let value = overlap4([
        Factor::plain(&f.pump),
        Factor::plain(&f.pump),
        Factor::conj(&f.signal),
        Factor::conj(&f.idler_out),
    ]);
    let total_length = spec.total_length();
    debug_assert!(value.norm() <= 10.0 * total_length);
    Ok(FwmOverlap {
        value,
        pump_wavelength: lambda_p,
        signal_wavelength: lambda_s,
        idler_wavelength: wavelength_from_omega(f.idler_out.omega),
        total_length,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StimulatedResult {
    pub idler_wavelength: f64,
    /// Idler power leaving the output facet, inside the chip (W).
    pub idler_power_internal: f64,
    /// Photons per second, `P_i/ħω_i`.
    pub idler_rate: f64,
    /// Idler rate divided by the squared internal pump power in mW².
    pub per_mw2: f64,
    /// Set when `γ·P_p·L ≥ 0.1` and the undepleted-pump treatment is strained.
    pub undepleted_strained: bool,
}

pub fn stimulated_from_overlap(overlap: &FwmOverlap, params: &NonlinearParams) -> StimulatedResult {
    let gp = params.gamma * params.pump_power;
    let idler_power_internal = gp * gp * params.signal_power * overlap.value.norm_sqr();
    let idler_rate = idler_power_internal / photon_energy(omega_from_wavelength(overlap.idler_wavelength));
    let p_mw = params.pump_power * 1e3;
    StimulatedResult {
        idler_wavelength: overlap.idler_wavelength,
        idler_power_internal,
        idler_rate,
        per_mw2: if p_mw > 0.0 { idler_rate / (p_mw * p_mw) } else { 0.0 },
        undepleted_strained: gp * overlap.total_length >= 0.1,
    }
}

pub fn stimulated_idler(
    spec: &GratingSpec,
    params: &NonlinearParams,
    lambda_p: f64,
    lambda_s: f64,
) -> Result<StimulatedResult> {
    params.validate()?;
    let overlap = overlap_integral(spec, lambda_p, lambda_s)?;
    Ok(stimulated_from_overlap(&overlap, params))
}

pub const PUMP_SWEEP_COLUMNS: [&str; 3] = ["pump_wavelength_nm", "idler_rate_per_s_per_mw2", "idler_power_w"];

/// Idler output against pump wavelength at a fixed seed wavelength.
pub fn pump_sweep(
    spec: &GratingSpec,
    params: &NonlinearParams,
    pump_range: (f64, f64),
    lambda_s: f64,
    n_points: usize,
    exec: Execution,
) -> Result<SweepResult> {
    let (start, stop) = pump_range;
    if n_points < 2 || !(stop > start) {
        return Err(Error::InvalidArgument("pump sweep needs n_points ≥ 2 and start < stop".into()));
    }
    check_wavelength("pump", start)?;
    check_wavelength("pump", stop)?;
    params.validate()?;
    let step = (stop - start) / (n_points - 1) as f64;
    let rows = exec.map(n_points, |i| {
        let lp = start + step * i as f64;
        stimulated_idler(spec, params, lp, lambda_s)
            .map(|r| vec![lp * 1e9, r.per_mw2, r.idler_power_internal])
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::new(&PUMP_SWEEP_COLUMNS, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuppressionDip {
    pub center_wavelength: f64,
    pub min_rate_per_mw2: f64,
    pub off_band_median_per_mw2: f64,
    pub depth_db: f64,
}

/// Locates the FWM suppression dip of a [`pump_sweep`]. Off-band points are
/// those where the pump itself loses less than 1 dB in the structure.
pub fn suppression_dip(spec: &GratingSpec, sweep: &SweepResult) -> Result<SuppressionDip> {
    let lam = sweep.column("pump_wavelength_nm")?;
    let rate = sweep.column("idler_rate_per_s_per_mw2")?;
    let (imin, &min) = rate
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::InvalidArgument("empty sweep".into()))?;
    let mut off: Vec<f64> = lam
        .iter()
        .zip(&rate)
        .filter(|(l, _)| to_db(transmission(spec, omega_from_wavelength(**l * 1e-9))) > -1.0)
        .map(|(_, r)| *r)
        .collect();
    if off.is_empty() {
        return Err(Error::InvalidArgument("sweep has no off-band points".into()));
    }
    off.sort_by(f64::total_cmp);
    let median = if off.len() % 2 == 1 {
        off[off.len() / 2]
    } else {
        0.5 * (off[off.len() / 2 - 1] + off[off.len() / 2])
    };
    Ok(SuppressionDip {
        center_wavelength: lam[imin] * 1e-9,
        min_rate_per_mw2: min,
        off_band_median_per_mw2: median,
        depth_db: to_db(median / min),
    })
}
