use braggsim_core::fwm::{overlap_integral, pump_sweep, stimulated_fields, stimulated_idler, suppression_dip};
use braggsim_core::model::make_wavelength_grid;
use braggsim_core::tmm::{coupled_mode_kappa, stopband_report, transmission_spectrum, PiecewiseField};
use braggsim_core::{Complex64, Execution, GratingSpec, NonlinearParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn paper_grating() -> GratingSpec {
    GratingSpec::new(320e-9, 0.5, 2000, 2.414, 3.4985e-3).unwrap()
}

fn paper_with_leads() -> GratingSpec {
    let lead = 0.5 * (1.6e-3 - 2000.0 * 320e-9);
    paper_grating().with_leads(lead, lead).unwrap()
}

fn paper_params() -> NonlinearParams {
    NonlinearParams::new(200.0, 1.29e-3, 1.23e-3).unwrap()
}

fn stopband_center(g: &GratingSpec) -> f64 {
    let grid = make_wavelength_grid(1546e-9, 4e-9, 2001).unwrap();
    stopband_report(&transmission_spectrum(g, &grid, Execution::Parallel)).unwrap().unwrap().center_wavelength
}

/// Adaptive Simpson on `[a, b]`.
fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

fn quadrature_overlap(pump: &PiecewiseField, signal: &PiecewiseField, idler_out: &PiecewiseField, tol: f64) -> Complex64 {
    pump.segments
        .iter()
        .enumerate()
        .map(|(j, seg)| {
            // evaluate each factor on its own section so boundaries are exact
            let f = |z: f64| {
                let p = pump.segments[j].value(z);
                p * p * signal.segments[j].value(z).conj() * idler_out.segments[j].value(z).conj()
            };
            simpson(&f, seg.z_start, seg.z_end, tol)
        })
        .sum()
}

#[test]
fn closed_form_matches_adaptive_quadrature_on_random_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    for case in 0..20 {
        let spec = GratingSpec::new(
            rng.random_range(300e-9..340e-9),
            rng.random_range(0.2..0.8),
            rng.random_range(5..60),
            rng.random_range(2.3..2.6),
            rng.random_range(1e-3..3e-2),
        )
        .unwrap()
        .with_leads(rng.random_range(0.0..20e-6), rng.random_range(0.0..20e-6))
        .unwrap();
        let lp = rng.random_range(1530e-9..1570e-9);
        let ls = rng.random_range(1535e-9..1565e-9);
        let closed = overlap_integral(&spec, lp, ls).unwrap().value;
        let f = stimulated_fields(&spec, lp, ls).unwrap();
        let numeric = quadrature_overlap(&f.pump, &f.signal, &f.idler_out, 1e-12 * spec.total_length() / f.pump.segments.len() as f64);
        let rel = (closed - numeric).norm() / closed.norm();
        assert!(rel < 1e-7, "case {case}: relative difference {rel:e}");
    }
}

#[test]
fn off_band_overlap_is_order_unity() {
    let g = paper_with_leads();
    let r = overlap_integral(&g, 1550e-9, 1560e-9).unwrap().relative_efficiency();
    assert!((0.25..=4.0).contains(&r), "{r}");
}

#[test]
fn paper_structure_near_textbook_power_off_band() {
    let g = paper_with_leads();
    let p = paper_params();
    let structured = stimulated_idler(&g, &p, 1550e-9, 1560e-9).unwrap().idler_power_internal;
    let uniform = stimulated_idler(&g.with_delta_n(0.0).unwrap(), &p, 1550e-9, 1560e-9).unwrap().idler_power_internal;
    assert!((uniform / 2.10e-10 - 1.0).abs() < 0.01);
    assert!(structured / uniform > 0.25 && structured / uniform < 4.0);
}

#[test]
fn in_band_suppression_follows_pump_decay_length() {
    // generation survives over about 1/(2κ) at the grating entrance
    let g = paper_grating();
    let center = stopband_center(&g);
    let j = overlap_integral(&g, center, 1560e-9).unwrap().value.norm();
    let estimate = 1.0 / (2.0 * coupled_mode_kappa(&g));
    let ratio_db = 20.0 * (j / estimate).log10();
    assert!(ratio_db.abs() < 1.0, "|J| = {j:e} m vs 1/(2κ) = {estimate:e} m");
}

#[test]
fn bare_grating_dip_sits_on_the_stopband() {
    let g = paper_grating();
    let sweep = pump_sweep(&g, &paper_params(), (1541.9e-9, 1550e-9), 1560e-9, 811, Execution::Parallel).unwrap();
    let dip = suppression_dip(&g, &sweep).unwrap();
    assert!((dip.center_wavelength - stopband_center(&g)).abs() < 0.1e-9, "{dip:?}");
    assert!(dip.depth_db > 10.0);
}

#[test]
fn uniform_sweep_is_flat() {
    let g = paper_with_leads().with_delta_n(0.0).unwrap();
    let sweep = pump_sweep(&g, &paper_params(), (1541.9e-9, 1550e-9), 1560e-9, 41, Execution::Sequential).unwrap();
    let p = sweep.column("idler_power_w").unwrap();
    let (lo, hi) = p.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo < 1.01);
}

#[test]
fn power_scaling_is_exact_in_structure() {
    let g = paper_with_leads();
    let p = paper_params();
    let base = stimulated_idler(&g, &p, 1546.2e-9, 1560e-9).unwrap().idler_power_internal;
    let pump2 = NonlinearParams::new(p.gamma, 2.0 * p.pump_power, p.signal_power).unwrap();
    let seed2 = NonlinearParams::new(p.gamma, p.pump_power, 2.0 * p.signal_power).unwrap();
    let a = stimulated_idler(&g, &pump2, 1546.2e-9, 1560e-9).unwrap().idler_power_internal;
    let b = stimulated_idler(&g, &seed2, 1546.2e-9, 1560e-9).unwrap().idler_power_internal;
    assert!((a / base - 4.0).abs() < 1e-12);
    assert!((b / base - 2.0).abs() < 1e-12);
}

#[test]
fn sweep_is_identical_in_both_execution_modes() {
    let g = paper_with_leads();
    let a = pump_sweep(&g, &paper_params(), (1544e-9, 1548e-9), 1560e-9, 33, Execution::Sequential).unwrap();
    let b = pump_sweep(&g, &paper_params(), (1544e-9, 1548e-9), 1560e-9, 33, Execution::Parallel).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
}
