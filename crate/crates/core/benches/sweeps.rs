use std::f64::consts::PI;
use std::hint::black_box;

use braggsim_core::fwm::pump_sweep;
use braggsim_core::model::make_wavelength_grid;
use braggsim_core::quantum::{two_photon_state_bw, PairGridOptions};
use braggsim_core::tmm::transmission_spectrum;
use braggsim_core::{CollectionWindow, Execution, GratingSpec, NonlinearParams, PulseShape, PumpPulse};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn grating() -> GratingSpec {
    let lead = 0.5 * (1.6e-3 - 2000.0 * 320e-9);
    GratingSpec::new(320e-9, 0.5, 2000, 2.414, 3.4985e-3).unwrap().with_leads(lead, lead).unwrap()
}

fn spectrum(c: &mut Criterion) {
    let g = grating();
    let grid = make_wavelength_grid(1545.5e-9, 8e-9, 4001).unwrap();
    let mut group = c.benchmark_group("transmission_spectrum_4001");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| transmission_spectrum(black_box(&g), &grid, exec))
        });
    }
    group.finish();
}

fn stimulated(c: &mut Criterion) {
    let g = grating();
    let p = NonlinearParams::new(200.0, 1.29e-3, 1.23e-3).unwrap();
    let mut group = c.benchmark_group("pump_sweep_201");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pump_sweep(black_box(&g), &p, (1541.9e-9, 1550e-9), 1560e-9, 201, exec).unwrap())
        });
    }
    group.finish();
}

fn pair_state(c: &mut Criterion) {
    let (ls, li) = (1560.05e-9, 1529.94e-9);
    let lp = 2.0 / (1.0 / ls + 1.0 / li);
    let g = GratingSpec::new(320e-9, 0.5, 2069, 2.414, 3.4985e-3).unwrap().tuned_to(lp).unwrap();
    let p = NonlinearParams::new(200.0, 1e-3, 1e-3).unwrap();
    let pulse = PumpPulse::new(PulseShape::TopHat, 1e-9, 1e-3, lp).unwrap();
    let width = 2.0 * PI * 10e9;
    let (sw, iw) = (CollectionWindow::new(ls, width).unwrap(), CollectionWindow::new(li, width).unwrap());
    let opts = PairGridOptions { grid_points: 101, ..Default::default() };
    let mut group = c.benchmark_group("bragg_pair_state_101");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| two_photon_state_bw(black_box(&g), &p, &pulse, &sw, &iw, &opts, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, spectrum, stimulated, pair_state);
criterion_main!(benches);
