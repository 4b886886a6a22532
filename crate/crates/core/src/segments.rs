//! Piecewise-homogeneous description of a grating and the closed-form
//! integral of a plane-wave product over one segment.

use num_complex::Complex64;

use crate::model::GratingSpec;

/// One homogeneous section: `(length, effective index)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section {
    pub length: f64,
    pub index: f64,
}

/// Sections from the input facet to the output facet. Zero-length leads are
/// omitted; the media outside the structure are wide waveguide (`n_hi`).
pub fn layout(spec: &GratingSpec) -> Vec<Section> {
    let mut out = Vec::with_capacity(2 * spec.n_periods + 2);
    if spec.lead_in_length > 0.0 {
        out.push(Section { length: spec.lead_in_length, index: spec.n_hi() });
    }
    for _ in 0..spec.n_periods {
        out.push(Section { length: spec.narrow_length(), index: spec.n_lo });
        out.push(Section { length: spec.wide_length(), index: spec.n_hi() });
    }
    if spec.lead_out_length > 0.0 {
        out.push(Section { length: spec.lead_out_length, index: spec.n_hi() });
    }
    out
}

/// `∫₀^d e^{iqζ} dζ`, accurate for any `q·d` including `q → 0`.
#[inline]
pub fn exp_integral(q: f64, d: f64) -> Complex64 {
    let half = 0.5 * q * d;
    let sinc = if half.abs() < 1e-4 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(d * sinc, half)
}
