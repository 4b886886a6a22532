//! CODATA 2018 exact/recommended values, quoted to 9 significant figures.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;

/// Planck constant, J·s (exact): 6.62607015e-34.
pub const H: f64 = 6.626_070_15e-34;

/// Reduced Planck constant, J·s: 1.05457182e-34.
pub const HBAR: f64 = H / (2.0 * PI);

/// Wavelength (m) to angular frequency (rad/s).
#[inline]
pub fn omega_from_wavelength(lambda: f64) -> f64 {
    2.0 * PI * C / lambda
}

/// Angular frequency (rad/s) to wavelength (m).
#[inline]
pub fn wavelength_from_omega(omega: f64) -> f64 {
    2.0 * PI * C / omega
}

/// Photon energy ħω in J.
#[inline]
pub fn photon_energy(omega: f64) -> f64 {
    HBAR * omega
}

/// 10·log10 of a power ratio.
#[inline]
pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}
