//! Schmidt decomposition and shape metrics of a discretized biphoton state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::quantum::TwoPhotonState;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtReport {
    /// Descending, with squares summing to one.
    pub schmidt_coefficients: Vec<f64>,
    /// `Σλₖ⁴`.
    pub purity: f64,
    pub schmidt_number: f64,
    /// Set when only the JSD was available and `√JSD` stood in for the
    /// amplitude; spectral phase is then ignored.
    pub from_intensity_only: bool,
}

/// Singular-value decomposition of `φ(ω₁,ω₂)·√(w₁w₂)` with trapezoid
/// weights, so the discrete Schmidt modes are orthonormal in the
/// quadrature inner product.
pub fn schmidt_analysis(state: &TwoPhotonState) -> Result<SchmidtReport> {
    if state.is_zero() || state.jsd.iter().all(|&v| v == 0.0) {
        return invalid("cannot decompose the zero state");
    }
    let ws = state.signal_grid.trapezoid_weights();
    let wi = state.idler_grid.trapezoid_weights();
    let (ns, ni) = (ws.len(), wi.len());
    let from_intensity_only = state.amplitude.is_none();
    let m = DMatrix::from_fn(ns, ni, |a, b| {
        let v = match &state.amplitude {
            Some(amp) => amp[a * ni + b],
            None => Complex64::new(state.jsd[a * ni + b].sqrt(), 0.0),
        };
        v * (ws[a] * wi[b]).sqrt()
    });
    let sv = m.singular_values();
    let mut s: Vec<f64> = sv.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    let schmidt_coefficients: Vec<f64> = s.iter().map(|x| x / norm).collect();
    let purity: f64 = schmidt_coefficients.iter().map(|l| l.powi(4)).sum();
    Ok(SchmidtReport { schmidt_coefficients, purity, schmidt_number: 1.0 / purity, from_intensity_only })
}

/// Widths of the JSD along the sum (`ω₁+ω₂`) and difference (`ω₁−ω₂`)
/// directions, from the full widths at half maximum of the projected
/// marginals. Both are expressed in the same rotated coordinate scale, so
/// `sum/difference` is the aspect ratio of the distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JsdWidths {
    pub sum_fwhm: f64,
    pub difference_fwhm: f64,
}

impl JsdWidths {
    /// Anti-diagonal over diagonal width.
    pub fn ratio(&self) -> f64 {
        self.sum_fwhm / self.difference_fwhm
    }
}

fn fwhm(values: &[f64], step: f64) -> f64 {
    let (imax, &peak) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    let half = 0.5 * peak;
    let mut lo = imax as f64;
    let mut i = imax;
    while i > 0 {
        if values[i - 1] < half {
            lo = (i - 1) as f64 + (half - values[i - 1]) / (values[i] - values[i - 1]);
            break;
        }
        i -= 1;
        lo = i as f64;
    }
    let mut hi = imax as f64;
    let mut i = imax;
    while i + 1 < values.len() {
        if values[i + 1] < half {
            hi = i as f64 + (values[i] - half) / (values[i] - values[i + 1]);
            break;
        }
        i += 1;
        hi = i as f64;
    }
    (hi - lo) * step
}

pub fn jsd_widths(state: &TwoPhotonState) -> Result<JsdWidths> {
    let (hs, hi) = (state.signal_grid.spacing(), state.idler_grid.spacing());
    if ((hs - hi) / hs).abs() > 1e-6 {
        return invalid("marginal widths need equal signal and idler spacing");
    }
    let (ns, ni) = (state.signal_grid.len(), state.idler_grid.len());
    let mut sum = vec![0.0; ns + ni - 1];
    let mut diff = vec![0.0; ns + ni - 1];
    for a in 0..ns {
        for b in 0..ni {
            let v = state.jsd[a * ni + b];
            sum[a + b] += v;
            diff[a + ni - 1 - b] += v;
        }
    }
    // bins along ω₁±ω₂ are spaced by h; rescale both by 1/√2 so the ratio is
    // the aspect ratio in the rotated frame
    let step = hs / std::f64::consts::SQRT_2;
    Ok(JsdWidths { sum_fwhm: fwhm(&sum, step), difference_fwhm: fwhm(&diff, step) })
}

/// Standard deviations of the JSD along its covariance principal axes,
/// major first.
pub fn principal_axis_widths(state: &TwoPhotonState) -> (f64, f64) {
    let ws = state.signal_grid.trapezoid_weights();
    let wi = state.idler_grid.trapezoid_weights();
    let (xs, ys) = (state.signal_grid.points(), state.idler_grid.points());
    let (x0, y0) = (xs[xs.len() / 2], ys[ys.len() / 2]);
    let ni = ys.len();
    let (mut m0, mut mx, mut my) = (0.0, 0.0, 0.0);
    for (a, &x) in xs.iter().enumerate() {
        for (b, &y) in ys.iter().enumerate() {
            let p = ws[a] * wi[b] * state.jsd[a * ni + b];
            m0 += p;
            mx += p * (x - x0);
            my += p * (y - y0);
        }
    }
    let (cx, cy) = (mx / m0, my / m0);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, &x) in xs.iter().enumerate() {
        for (b, &y) in ys.iter().enumerate() {
            let p = ws[a] * wi[b] * state.jsd[a * ni + b];
            let (dx, dy) = (x - x0 - cx, y - y0 - cy);
            sxx += p * dx * dx;
            syy += p * dy * dy;
            sxy += p * dx * dy;
        }
    }
    let (sxx, syy, sxy) = (sxx / m0, syy / m0, sxy / m0);
    let tr = 0.5 * (sxx + syy);
    let disc = (0.25 * (sxx - syy).powi(2) + sxy * sxy).sqrt();
    ((tr + disc).sqrt(), (tr - disc).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FrequencyGrid;

    fn grid(n: usize) -> FrequencyGrid {
        FrequencyGrid::centered(0.0, 10.0, n).unwrap()
    }

    #[test]
    fn separable_state_is_pure() {
        let (g1, g2) = (grid(41), grid(41));
        let k: Vec<Complex64> = g1
            .points()
            .iter()
            .flat_map(|&x| {
                g2.points().iter().map(move |&y| {
                    Complex64::from_polar((-x * x / 4.0).exp() * (1.0 + 0.1 * y).powi(2) * (-y * y / 9.0).exp(), 0.3 * y)
                })
            })
            .collect();
        let s = TwoPhotonState::from_unnormalized(g1, g2, k.iter().map(|v| v * 1e-3).collect(), vec![]).unwrap();
        let r = schmidt_analysis(&s).unwrap();
        assert!((r.purity - 1.0).abs() < 1e-9);
        let sq: f64 = r.schmidt_coefficients.iter().map(|l| l * l).sum();
        assert!((sq - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_state_is_rejected() {
        let s = TwoPhotonState::from_unnormalized(grid(5), grid(5), vec![Complex64::new(0.0, 0.0); 25], vec![]).unwrap();
        assert!(schmidt_analysis(&s).is_err());
    }

    #[test]
    fn anticorrelated_ridge_is_entangled_and_narrow() {
        let (g1, g2) = (grid(101), grid(101));
        let k: Vec<Complex64> = g1
            .points()
            .iter()
            .flat_map(|&x| g2.points().iter().map(move |&y| Complex64::new(1e-3 * (-(x + y).powi(2) / 0.05).exp(), 0.0)))
            .collect();
        let s = TwoPhotonState::from_unnormalized(g1, g2, k, vec![]).unwrap();
        assert!(schmidt_analysis(&s).unwrap().purity < 0.1);
        let w = jsd_widths(&s).unwrap();
        assert!(w.ratio() < 0.1, "{w:?}");
        let (major, minor) = principal_axis_widths(&s);
        assert!(minor / major < 0.1);
    }

    #[test]
    fn purity_is_symmetric_under_exchange() {
        let (g1, g2) = (grid(31), grid(41));
        let k: Vec<Complex64> = g1
            .points()
            .iter()
            .flat_map(|&x| g2.points().iter().map(move |&y| Complex64::new(1e-3 * (-(x + 0.5 * y).powi(2) - 0.1 * x * x).exp(), 0.0)))
            .collect();
        let s = TwoPhotonState::from_unnormalized(g1, g2, k, vec![]).unwrap();
        let a = schmidt_analysis(&s).unwrap().purity;
        let b = schmidt_analysis(&s.swapped()).unwrap().purity;
        assert!((a - b).abs() < 1e-12);
    }
}
