use braggsim_core::constants::{omega_from_wavelength, to_db};
use braggsim_core::model::make_wavelength_grid;
use braggsim_core::segments::layout;
use braggsim_core::tmm::{
    coupled_mode_kappa, design_periods, internal_fields, stopband_report, structure_matrix, transmission,
    transmission_spectrum, CascadeMethod, FieldDirection, TransferMatrix,
};
use braggsim_core::{Execution, GratingSpec};
use proptest::prelude::*;

fn paper_grating() -> GratingSpec {
    GratingSpec::new(320e-9, 0.5, 2000, 2.414, 3.4985e-3).unwrap()
}

fn paper_with_leads() -> GratingSpec {
    let lead = 0.5 * (1.6e-3 - 2000.0 * 320e-9);
    paper_grating().with_leads(lead, lead).unwrap()
}

/// Stack matrix built section by section, in the given order.
fn stack_matrix(spec: &GratingSpec, omega: f64, reversed: bool) -> TransferMatrix {
    let mut sections = layout(spec);
    if reversed {
        sections.reverse();
    }
    let k_ext = spec.wavenumber(spec.n_hi(), omega);
    let mut m = TransferMatrix::IDENTITY;
    let mut k_prev = k_ext;
    for s in &sections {
        let k = spec.wavenumber(s.index, omega);
        m = m * TransferMatrix::interface(k_prev, k) * TransferMatrix::propagation(k, s.length);
        k_prev = k;
    }
    m * TransferMatrix::interface(k_prev, k_ext)
}

fn spec_strategy() -> impl Strategy<Value = GratingSpec> {
    (300e-9..340e-9f64, 0.2..0.8f64, 1usize..3000, 2.3..2.6f64, 1e-4..2e-2f64, 0.0..50e-6f64, 0.0..50e-6f64).prop_map(
        |(period, duty, n, n_lo, dn, a, b)| GratingSpec::new(period, duty, n, n_lo, dn).unwrap().with_leads(a, b).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_is_conserved(spec in spec_strategy(), lambda in 1500e-9..1600e-9f64) {
        let m = structure_matrix(&spec, omega_from_wavelength(lambda), CascadeMethod::Exponentiation);
        prop_assert!((m.transmission() + m.reflectance() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cascade_determinant_is_one(spec in spec_strategy(), lambda in 1500e-9..1600e-9f64) {
        let m = structure_matrix(&spec, omega_from_wavelength(lambda), CascadeMethod::Exponentiation);
        prop_assert!((m.det() - 1.0).norm() < 1e-9);
    }

    #[test]
    fn transmission_is_reciprocal(spec in spec_strategy(), lambda in 1500e-9..1600e-9f64) {
        let w = omega_from_wavelength(lambda);
        let forward = stack_matrix(&spec, w, false).transmission();
        let backward = stack_matrix(&spec, w, true).transmission();
        prop_assert!((forward - backward).abs() < 1e-9);
        prop_assert!((forward - transmission(&spec, w)).abs() < 1e-9);
    }
}

#[test]
fn paper_stopband() {
    let g = paper_with_leads();
    let grid = make_wavelength_grid(1545.5e-9, 8e-9, 4001).unwrap();
    let report = stopband_report(&transmission_spectrum(&g, &grid, Execution::Parallel)).unwrap().unwrap();
    assert!((report.rejection_db_at_center - 19.1).abs() <= 1.0, "{report:?}");
    assert!(report.center_wavelength > 1544e-9 && report.center_wavelength < 1547e-9);
    assert!(report.bandwidth_at_10db > 0.5e-9 && report.bandwidth_at_10db < 1.5e-9);
}

#[test]
fn leads_do_not_change_transmission() {
    let w = omega_from_wavelength(1546.1e-9);
    let bare = transmission(&paper_grating(), w);
    let leads = transmission(&paper_with_leads(), w);
    assert!((bare - leads).abs() < 1e-12);
}

#[test]
fn off_band_ripple_is_small() {
    let t = transmission(&paper_with_leads(), omega_from_wavelength(1560e-9));
    assert!((1.0 - t).abs() < 0.05, "T(1560 nm) = {t}");
}

#[test]
fn field_decays_at_coupled_mode_rate() {
    let g = paper_grating();
    let grid = make_wavelength_grid(1546e-9, 2e-9, 2001).unwrap();
    let center = stopband_report(&transmission_spectrum(&g, &grid, Execution::Sequential)).unwrap().unwrap().center_wavelength;
    let f = internal_fields(&g, omega_from_wavelength(center), FieldDirection::AsymptoticInFromLeft);
    // forward amplitude at the start of each period, away from both ends
    let fwd = |period: usize| f.segments[2 * period].a_fwd.norm();
    let (p1, p2) = (200, 800);
    let rate = (fwd(p1) / fwd(p2)).ln() / ((p2 - p1) as f64 * g.period);
    let kappa = coupled_mode_kappa(&g);
    assert!((rate / kappa - 1.0).abs() < 0.05, "decay {rate} vs κ {kappa}");
    // and the centre rejection matches cosh²(κL)
    let kl = kappa * g.grating_length();
    let t = transmission(&g, omega_from_wavelength(center));
    assert!((to_db(1.0 / t) - to_db(kl.cosh().powi(2))).abs() < 0.5);
}

#[test]
fn design_inverts_the_stopband_formula() {
    assert!((design_periods(19.14, 2.414, 3.4985e-3).unwrap() as i64 - 2000).abs() <= 1);
    assert!((design_periods(20.0, 2.414, 3.4985e-3).unwrap() as i64 - 2068).abs() <= 1);
}

#[test]
fn exponentiation_matches_naive_product_over_the_stopband() {
    let g = paper_with_leads();
    for i in 0..21 {
        let w = omega_from_wavelength(1543e-9 + i as f64 * 0.3e-9);
        let a = structure_matrix(&g, w, CascadeMethod::Exponentiation);
        let b = structure_matrix(&g, w, CascadeMethod::Naive);
        let scale = a.m11.norm();
        assert!(a.max_abs_diff(&b) < 1e-9 * scale);
    }
}

#[test]
fn spectrum_is_identical_in_both_execution_modes() {
    let g = paper_with_leads();
    let grid = make_wavelength_grid(1546e-9, 4e-9, 301).unwrap();
    let a = transmission_spectrum(&g, &grid, Execution::Sequential);
    let b = transmission_spectrum(&g, &grid, Execution::Parallel);
    assert_eq!(a.to_csv(), b.to_csv());
}
