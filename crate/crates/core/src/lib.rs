//! Simulation of a corrugated (Bragg) silicon waveguide filter: linear
//! transmission by transfer matrices, classical stimulated four-wave mixing,
//! and first-order spontaneous pair generation, with a side-coupled microring
//! as the comparison pair source.
//!
//! Field conventions used throughout:
//!
//! * time dependence `e^{-iωt}`; a forward wave is `e^{+ikz}`;
//! * classical amplitudes are power normalized (`|A|²` is power in W);
//! * pump spectra are photon-number normalized, see [`model::PumpPulse`].

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod fwm;
pub mod interp;
pub mod model;
pub mod parallel;
pub mod quantum;
pub mod ring;
pub mod schmidt;
pub mod segments;
pub mod sweep;
pub mod tmm;

pub use error::{Error, Result};
pub use model::{
    CollectionWindow, FrequencyGrid, GratingSpec, NonlinearParams, PulseShape, PumpPulse,
    RingSpec,
};
pub use parallel::Execution;
pub use sweep::SweepResult;

pub use num_complex::Complex64;
