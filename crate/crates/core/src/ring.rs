//! Side-coupled microring pair source.
//!
//! Each resonance enters through its intracavity field enhancement, the
//! ratio of ring field to bus field for a critically coupled all-pass ring:
//!
//! ```text
//! F(ω) = (2/(τ·T_rt))^{1/2} / (1/τ − i(ω − ω₀)),   τ = 2Q/ω₀
//! ```
//!
//! `τ` is the amplitude decay time (twice the dwelling time `Q/ω₀`) and
//! `T_rt` the round-trip time. At critical coupling the bus feeds the ring
//! at half the total energy decay rate, so the power build-up is
//! `|F(ω₀)|² = 2τ/T_rt = 4Q/(ω₀T_rt)` and `|F|²` is a Lorentzian of full
//! width `ω₀/Q`. The same factor
//! describes how a photon generated in the ring escapes to the bus, so the
//! ring overlap is `J = L·F_P(ω)F_P(ω')F_S(ω₁)F_I(ω₂)` with `L` the
//! circumference.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::HBAR;
use crate::error::Result;
use crate::model::{FrequencyGrid, NonlinearParams, PumpPulse, RingSpec};
use crate::parallel::Execution;
use crate::quantum::{PairGridOptions, PumpQuadrature, TwoPhotonState};

/// Lorentzian field-enhancement line shape of one resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub omega0: f64,
    pub quality_factor: f64,
    pub round_trip_time: f64,
}

impl Resonance {
    pub fn amplitude_decay_time(&self) -> f64 {
        2.0 * self.quality_factor / self.omega0
    }

    /// Full width at half maximum of `|F|²`, `ω₀/Q`.
    pub fn linewidth(&self) -> f64 {
        self.omega0 / self.quality_factor
    }

    pub fn enhancement(&self, omega: f64) -> Complex64 {
        let tau = self.amplitude_decay_time();
        let num = (2.0 / (tau * self.round_trip_time)).sqrt();
        Complex64::new(num, 0.0) / Complex64::new(1.0 / tau, -(omega - self.omega0))
    }
}

impl RingSpec {
    pub fn resonances(&self) -> [Resonance; 3] {
        let (wp, ws, wi) = self.omegas();
        let t = self.round_trip_time();
        [
            Resonance { omega0: wp, quality_factor: self.q_p, round_trip_time: t },
            Resonance { omega0: ws, quality_factor: self.q_s, round_trip_time: t },
            Resonance { omega0: wi, quality_factor: self.q_i, round_trip_time: t },
        ]
    }
}

/// Half-width of the default signal/idler grids in linewidths.
pub const RING_GRID_HALF_WIDTH_LINEWIDTHS: f64 = 6.0;

/// Pair state generated in the ring. Signal and idler grids span
/// ±6 linewidths around their resonances with a common spacing.
pub fn two_photon_state_ring(
    ring: &RingSpec,
    params: &NonlinearParams,
    pulse: &PumpPulse,
    opts: &PairGridOptions,
    exec: Execution,
) -> Result<TwoPhotonState> {
    ring.validate()?;
    params.validate()?;
    opts.validate()?;
    let [rp, rs, ri] = ring.resonances();
    let mut warnings = Vec::new();
    let mismatch = ring.energy_mismatch_linewidths();
    if mismatch.abs() > 10.0 {
        warnings.push(format!(
            "resonance triplet misses 2ω_P = ω_S + ω_I by {mismatch:.1} pump linewidths"
        ));
    }
    let width = 2.0 * RING_GRID_HALF_WIDTH_LINEWIDTHS * 0.5 * (rs.linewidth() + ri.linewidth());
    let sgrid = FrequencyGrid::centered(rs.omega0, width, opts.grid_points)?;
    let igrid = FrequencyGrid::centered(ri.omega0, width, opts.grid_points)?;
    if params.gamma == 0.0 || pulse.peak_power == 0.0 {
        return TwoPhotonState::from_unnormalized(
            sgrid.clone(),
            igrid.clone(),
            vec![Complex64::new(0.0, 0.0); sgrid.len() * igrid.len()],
            warnings,
        );
    }
    // the pump quadrature must also resolve the pump resonance
    let mut pump = PumpQuadrature::new(pulse, opts)?;
    let step = 2.0 * pump.half_span / (opts.pump_points - 1) as f64;
    let needed = rp.linewidth() / 8.0;
    if step > needed {
        let points = (2.0 * pump.half_span / needed).ceil() as usize + 1;
        pump = PumpQuadrature::new(pulse, &PairGridOptions { pump_points: points | 1, ..*opts })?;
    }
    let wc = pump.carrier;
    let n = opts.grid_points;
    let h = sgrid.spacing();
    let sum0 = sgrid.first() + igrid.first() - 2.0 * wc;
    let gtab: Vec<Complex64> = exec.map(2 * n - 1, |m| {
        pump.pair_integral(pulse, sum0 + m as f64 * h, |x, y| rp.enhancement(wc + x) * rp.enhancement(wc + y))
    });
    let fs: Vec<Complex64> = sgrid.points().iter().map(|&w| rs.enhancement(w)).collect();
    let fi: Vec<Complex64> = igrid.points().iter().map(|&w| ri.enhancement(w)).collect();
    let pref = params.gamma * HBAR * wc * ring.circumference() / (4.0 * PI * PI);
    let k: Vec<Complex64> = (0..n)
        .flat_map(|i| {
            let (fs, fi, gtab) = (&fs, &fi, &gtab);
            (0..n).map(move |j| pref * fs[i] * fi[j] * gtab[i + j])
        })
        .collect();
    TwoPhotonState::from_unnormalized(sgrid, igrid, k, warnings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enhancement_peak_and_width() {
        let r = Resonance { omega0: 1.2e15, quality_factor: 4e4, round_trip_time: 0.8e-12 };
        let peak = r.enhancement(r.omega0).norm_sqr();
        let build_up = 4.0 * r.quality_factor / (r.omega0 * r.round_trip_time);
        assert!((peak - build_up).abs() < 1e-9 * peak);
        let half = r.enhancement(r.omega0 + 0.5 * r.linewidth()).norm_sqr();
        assert!((half / peak - 0.5).abs() < 1e-12);
    }
}
