//! 2×2 transfer matrices for the corrugated waveguide.
//!
//! Inside a homogeneous section starting at `z₀` the field is
//! `A(z) = a⁺·e^{ik(z−z₀)} + a⁻·e^{−ik(z−z₀)}`. A [`TransferMatrix`] maps the
//! amplitude pair on the right of a stack to the pair on its left:
//! `(a⁺, a⁻)_left = M·(a⁺, a⁻)_right`. For incidence from the left only,
//! `t = 1/m11` and `r = m21/m11`.

use std::ops::Mul;

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{to_db, wavelength_from_omega};
use crate::error::{invalid, Error, Result};
use crate::model::{FrequencyGrid, GratingSpec};
use crate::parallel::Execution;
use crate::segments::{layout, Section};
use crate::sweep::SweepResult;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix { m11: ONE, m12: ZERO, m21: ZERO, m22: ONE };

    /// Propagation through a homogeneous section of length `d`.
    pub fn propagation(k: f64, d: f64) -> Self {
        let e = Complex64::from_polar(1.0, k * d);
        TransferMatrix { m11: e.conj(), m12: ZERO, m21: ZERO, m22: e }
    }

    /// Step from a medium with wavenumber `k_left` into one with `k_right`,
    /// from continuity of `A` and `dA/dz`. Its determinant is `k_right/k_left`.
    pub fn interface(k_left: f64, k_right: f64) -> Self {
        let rho = k_right / k_left;
        let p = Complex64::new(0.5 * (1.0 + rho), 0.0);
        let m = Complex64::new(0.5 * (1.0 - rho), 0.0);
        TransferMatrix { m11: p, m12: m, m21: m, m22: p }
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        TransferMatrix { m11: self.m22 / d, m12: -self.m12 / d, m21: -self.m21 / d, m22: self.m11 / d }
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [self.m11 * v[0] + self.m12 * v[1], self.m21 * v[0] + self.m22 * v[1]]
    }

    /// `selfⁿ` by repeated squaring.
    pub fn pow(&self, mut n: usize) -> Self {
        let mut base = *self;
        let mut acc = TransferMatrix::IDENTITY;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            (self.m11 - other.m11).norm(),
            (self.m12 - other.m12).norm(),
            (self.m21 - other.m21).norm(),
            (self.m22 - other.m22).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn transmission(&self) -> f64 {
        1.0 / self.m11.norm_sqr()
    }

    pub fn reflectance(&self) -> f64 {
        (self.m21 / self.m11).norm_sqr()
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, o: TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            m11: self.m11 * o.m11 + self.m12 * o.m21,
            m12: self.m11 * o.m12 + self.m12 * o.m22,
            m21: self.m21 * o.m11 + self.m22 * o.m21,
            m22: self.m21 * o.m12 + self.m22 * o.m22,
        }
    }
}

/// Product of matrices in propagation order (input facet first).
pub fn cascade(cells: &[TransferMatrix]) -> Result<TransferMatrix> {
    let (first, rest) = cells
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("cannot cascade an empty list".into()))?;
    Ok(rest.iter().fold(*first, |acc, m| acc * *m))
}

/// One period referenced to the wide waveguide on both sides:
/// step into the narrow segment, cross it, step back out, cross the wide one.
pub fn unit_cell_matrix(spec: &GratingSpec, omega: f64) -> TransferMatrix {
    let k_lo = spec.wavenumber(spec.n_lo, omega);
    let k_hi = spec.wavenumber(spec.n_hi(), omega);
    TransferMatrix::interface(k_hi, k_lo)
        * TransferMatrix::propagation(k_lo, spec.narrow_length())
        * TransferMatrix::interface(k_lo, k_hi)
        * TransferMatrix::propagation(k_hi, spec.wide_length())
}

/// How the `N` identical cells are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CascadeMethod {
    #[default]
    Exponentiation,
    /// Plain left-to-right product, kept as a numerical cross-check.
    Naive,
}

/// Whole structure including leads.
pub fn structure_matrix(spec: &GratingSpec, omega: f64, method: CascadeMethod) -> TransferMatrix {
    let cell = unit_cell_matrix(spec, omega);
    let body = match method {
        CascadeMethod::Exponentiation => cell.pow(spec.n_periods),
        CascadeMethod::Naive => (0..spec.n_periods).fold(TransferMatrix::IDENTITY, |acc, _| acc * cell),
    };
    let k_hi = spec.wavenumber(spec.n_hi(), omega);
    TransferMatrix::propagation(k_hi, spec.lead_in_length)
        * body
        * TransferMatrix::propagation(k_hi, spec.lead_out_length)
}

/// Power transmission `1/|m11|²` at one frequency.
pub fn transmission(spec: &GratingSpec, omega: f64) -> f64 {
    structure_matrix(spec, omega, CascadeMethod::Exponentiation).transmission()
}

pub const SPECTRUM_COLUMNS: [&str; 3] = ["wavelength_nm", "transmission", "transmission_db"];

/// `T(λ)` over the grid, rows ordered by increasing wavelength.
pub fn transmission_spectrum(spec: &GratingSpec, grid: &FrequencyGrid, exec: Execution) -> SweepResult {
    let pts = grid.points();
    let n = pts.len();
    let rows = exec.map(n, |i| {
        let w = pts[n - 1 - i];
        let t = transmission(spec, w);
        vec![wavelength_from_omega(w) * 1e9, t, to_db(t)]
    });
    SweepResult::new(&SPECTRUM_COLUMNS, rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StopbandReport {
    pub center_wavelength: f64,
    pub rejection_db_at_center: f64,
    /// Width of the contiguous region around the center with more than 10 dB
    /// rejection; zero if the dip never reaches 10 dB.
    pub bandwidth_at_10db: f64,
}

/// Locates the deepest transmission dip. Returns `Ok(None)` when no point
/// falls below −3 dB.
pub fn stopband_report(spectrum: &SweepResult) -> Result<Option<StopbandReport>> {
    let lam = spectrum.column("wavelength_nm")?;
    let t = spectrum.column("transmission")?;
    if lam.len() < 2 {
        return invalid("spectrum needs at least two samples");
    }
    let db: Vec<f64> = t.iter().map(|&x| -to_db(x)).collect();
    let (imin, &rej) = db
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    if rej < 3.0 {
        return Ok(None);
    }
    let threshold = 10.0;
    let bandwidth = if rej < threshold {
        0.0
    } else {
        let crossing = |j_in: usize, j_out: usize| {
            let f = (db[j_in] - threshold) / (db[j_in] - db[j_out]);
            lam[j_in] + f * (lam[j_out] - lam[j_in])
        };
        let mut lo = imin;
        while lo > 0 && db[lo - 1] >= threshold {
            lo -= 1;
        }
        let left = if lo == 0 { lam[0] } else { crossing(lo, lo - 1) };
        let mut hi = imin;
        while hi + 1 < db.len() && db[hi + 1] >= threshold {
            hi += 1;
        }
        let right = if hi + 1 == db.len() { lam[hi] } else { crossing(hi, hi + 1) };
        (right - left).abs() * 1e-9
    };
    Ok(Some(StopbandReport {
        center_wavelength: lam[imin] * 1e-9,
        rejection_db_at_center: rej,
        bandwidth_at_10db: bandwidth,
    }))
}

/// Rejection in dB of `N` periods from the asymptotic stopband formula
/// `T = 4·(1 + Δn/n)^{−2N}`.
pub fn asymptotic_rejection_db(n_periods: f64, n_lo: f64, delta_n: f64) -> f64 {
    2.0 * n_periods * to_db(1.0 + delta_n / n_lo) - to_db(4.0)
}

/// Smallest period count whose asymptotic rejection reaches `rejection_db`.
pub fn design_periods(rejection_db: f64, n_lo: f64, delta_n: f64) -> Result<usize> {
    let floor = to_db(4.0);
    if !(rejection_db > floor) {
        return Err(Error::OutOfDomain(format!(
            "rejection {rejection_db} dB is at or below 10·log10(4) = {floor:.3} dB, \
             where the asymptotic stopband formula has no positive solution"
        )));
    }
    if !(delta_n > 0.0) || !(n_lo > 1.0) {
        return invalid("design needs delta_n > 0 and n_lo > 1");
    }
    let exact = (rejection_db - floor) / (2.0 * to_db(1.0 + delta_n / n_lo));
    let mut n = exact.ceil().max(1.0) as usize;
    // guard against ceil landing one short through rounding in `exact`
    while asymptotic_rejection_db(n as f64, n_lo, delta_n) < rejection_db {
        n += 1;
    }
    Ok(n)
}

/// Coupled-mode coupling constant of the first Bragg order for a
/// rectangular index profile: `κ = π·n₁/λ_B` with fundamental Fourier
/// amplitude `n₁ = (2/π)·Δn·sin(π·duty)`.
pub fn coupled_mode_kappa(spec: &GratingSpec) -> f64 {
    let n1 = 2.0 / std::f64::consts::PI * spec.delta_n.abs() * (std::f64::consts::PI * spec.duty_cycle).sin();
    std::f64::consts::PI * n1 / spec.bragg_wavelength()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldDirection {
    /// Unit wave incident from the input facet, nothing from the output side.
    AsymptoticInFromLeft,
    /// Unit wave incident from the output facet.
    AsymptoticInFromRight,
    /// Time reverse of [`FieldDirection::AsymptoticInFromRight`]: unit wave
    /// leaving through the output facet.
    AsymptoticOutToRight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSegment {
    pub z_start: f64,
    pub z_end: f64,
    pub n_eff: f64,
    pub k: f64,
    pub a_fwd: Complex64,
    pub a_bwd: Complex64,
}

impl FieldSegment {
    pub fn length(&self) -> f64 {
        self.z_end - self.z_start
    }

    pub fn value(&self, z: f64) -> Complex64 {
        let e = Complex64::from_polar(1.0, self.k * (z - self.z_start));
        self.a_fwd * e + self.a_bwd * e.conj()
    }

    pub fn derivative(&self, z: f64) -> Complex64 {
        let e = Complex64::from_polar(1.0, self.k * (z - self.z_start));
        Complex64::new(0.0, self.k) * (self.a_fwd * e - self.a_bwd * e.conj())
    }
}

/// Monochromatic field inside the structure, one record per section.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseField {
    pub omega: f64,
    pub segments: Vec<FieldSegment>,
    /// Amplitudes `(a⁺, a⁻)` in the input medium at `z = 0`.
    pub left: [Complex64; 2],
    /// Amplitudes in the output medium at `z = L`.
    pub right: [Complex64; 2],
}

impl PiecewiseField {
    pub fn length(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.z_end)
    }

    fn locate(&self, z: f64) -> &FieldSegment {
        let i = self.segments.partition_point(|s| s.z_end < z);
        &self.segments[i.min(self.segments.len() - 1)]
    }

    pub fn value(&self, z: f64) -> Complex64 {
        self.locate(z).value(z)
    }

    pub fn conj(&self) -> PiecewiseField {
        PiecewiseField {
            omega: self.omega,
            segments: self
                .segments
                .iter()
                .map(|s| FieldSegment { a_fwd: s.a_bwd.conj(), a_bwd: s.a_fwd.conj(), ..*s })
                .collect(),
            left: [self.left[1].conj(), self.left[0].conj()],
            right: [self.right[1].conj(), self.right[0].conj()],
        }
    }

    /// Same field with every section split into `parts` equal pieces.
    pub fn subdivided(&self, parts: usize) -> PiecewiseField {
        let parts = parts.max(1);
        let mut segments = Vec::with_capacity(self.segments.len() * parts);
        for s in &self.segments {
            let d = s.length() / parts as f64;
            for p in 0..parts {
                let z0 = s.z_start + p as f64 * d;
                let e = Complex64::from_polar(1.0, s.k * (z0 - s.z_start));
                segments.push(FieldSegment {
                    z_start: z0,
                    z_end: if p + 1 == parts { s.z_end } else { z0 + d },
                    a_fwd: s.a_fwd * e,
                    a_bwd: s.a_bwd * e.conj(),
                    ..*s
                });
            }
        }
        PiecewiseField { segments, ..self.clone() }
    }
}

/// Scattering field for one boundary condition.
///
/// Each field is built from its transmitted end, where it is smallest, so
/// inside a stopband the recursion always runs in the growing direction.
pub fn internal_fields(spec: &GratingSpec, omega: f64, direction: FieldDirection) -> PiecewiseField {
    let sections = layout(spec);
    let k_ext = spec.wavenumber(spec.n_hi(), omega);
    let ks: Vec<f64> = sections.iter().map(|s| spec.wavenumber(s.index, omega)).collect();
    let m = structure_matrix(spec, omega, CascadeMethod::Exponentiation);
    let t = ONE / m.m11;

    let n = sections.len();
    let mut amps = vec![[ZERO; 2]; n];
    let (left, right);
    match direction {
        FieldDirection::AsymptoticInFromLeft => {
            right = [t, ZERO];
            let mut v = right;
            let mut k_next = k_ext;
            for j in (0..n).rev() {
                let Section { length, .. } = sections[j];
                v = (TransferMatrix::propagation(ks[j], length) * TransferMatrix::interface(ks[j], k_next)).apply(v);
                amps[j] = v;
                k_next = ks[j];
            }
            left = TransferMatrix::interface(k_ext, k_next).apply(v);
        }
        FieldDirection::AsymptoticInFromRight | FieldDirection::AsymptoticOutToRight => {
            left = [ZERO, t];
            let mut v = left;
            let mut k_prev = k_ext;
            for j in 0..n {
                v = TransferMatrix::interface(k_prev, ks[j]).inverse().apply(v);
                amps[j] = v;
                v = TransferMatrix::propagation(ks[j], sections[j].length).inverse().apply(v);
                k_prev = ks[j];
            }
            right = TransferMatrix::interface(k_prev, k_ext).inverse().apply(v);
        }
    }

    let mut z = 0.0;
    let segments = sections
        .iter()
        .zip(&ks)
        .zip(&amps)
        .map(|((s, &k), a)| {
            let seg = FieldSegment { z_start: z, z_end: z + s.length, n_eff: s.index, k, a_fwd: a[0], a_bwd: a[1] };
            z += s.length;
            seg
        })
        .collect();
    let field = PiecewiseField { omega, segments, left, right };
    if direction == FieldDirection::AsymptoticOutToRight {
        field.conj()
    } else {
        field
    }
}
