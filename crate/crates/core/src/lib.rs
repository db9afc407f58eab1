//! Strongly focused light interacting with a single point dipole.
//!
//! Focal fields of aplanatic and dipole-wave illuminations, the resonant
//! scattering ratio `K0 = σ0 / A`, electric-dipole mode projection, and
//! transmittance/reflectance of the focused beam. Every closed form has a
//! quadrature counterpart that shares none of its algebra.
//!
//! Units: wavelength `λ = 1` (so `k = 2π`), `c = ε0 = μ0 = 1`.

pub mod error;
pub mod illumination;
pub mod multipole;
pub mod numerics;
pub mod parallel;
pub mod scattering;
pub mod transmittance;
pub mod units;
pub mod vector;

pub use error::{Error, Result};
pub use illumination::{GeometryConfig, IlluminationKind, IlluminationMode};
pub use parallel::Execution;
pub use scattering::{OscillatorParams, TlsParams};
pub use vector::ComplexVec3;
