//! Normalized unit system: `λ = 1`, `c = ε0 = μ0 = 1`.

use std::f64::consts::PI;

pub const WAVELENGTH: f64 = 1.0;
pub const SPEED_OF_LIGHT: f64 = 1.0;
/// `k = 2π / λ`.
pub const WAVENUMBER: f64 = 2.0 * PI / WAVELENGTH;

/// Resonant cross section `σ0 = 3λ² / 2π`.
pub const SIGMA0: f64 = 3.0 * WAVELENGTH * WAVELENGTH / (2.0 * PI);

/// Upper limit `k² / 3πc` on focal energy density per unit incident power.
pub const BASSETT_LIMIT: f64 = WAVENUMBER * WAVENUMBER / (3.0 * PI * SPEED_OF_LIGHT);

/// Smallest accepted half-angle.
pub const MIN_HALF_ANGLE: f64 = 1e-3;
