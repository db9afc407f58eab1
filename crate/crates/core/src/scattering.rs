//! Point-oscillator and two-level-system response: cross sections and the
//! scattered dipole far field.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::units::{SIGMA0, WAVENUMBER};
use crate::vector::{ComplexVec3, Vec3};

/// Smallest `kr` at which the far-field expressions may be evaluated.
pub const FAR_FIELD_MIN_KR: f64 = 100.0;

/// Radiative linewidth `Γ` and detuning `Δ = ω_L − ω0` (same units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    gamma: f64,
    detuning: f64,
}

impl OscillatorParams {
    pub fn new(gamma: f64, detuning: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(domain(format!("linewidth must be > 0, got {gamma}")));
        }
        if detuning.is_nan() {
            return Err(domain("detuning is NaN"));
        }
        Ok(Self { gamma, detuning })
    }

    /// Unit linewidth, detuning given in units of `Γ`.
    pub fn detuned(detuning_over_gamma: f64) -> Result<Self> {
        Self::new(1.0, detuning_over_gamma)
    }

    pub fn resonant() -> Self {
        Self {
            gamma: 1.0,
            detuning: 0.0,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn detuning_over_gamma(&self) -> f64 {
        self.detuning / self.gamma
    }
}

/// Two-level system: oscillator parameters plus the Rabi frequency magnitude `|V|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TlsParams {
    pub oscillator: OscillatorParams,
    rabi: f64,
}

impl TlsParams {
    pub fn new(oscillator: OscillatorParams, rabi: f64) -> Result<Self> {
        if !(rabi.is_finite() && rabi >= 0.0) {
            return Err(domain(format!("Rabi frequency must be finite and >= 0, got {rabi}")));
        }
        Ok(Self { oscillator, rabi })
    }

    /// `V = −d12 · E_inc(O) / ħ` for a transition dipole of magnitude `dipole`
    /// at angle `angle` to a field of amplitude `field`; only `|V|` is kept.
    pub fn from_transition_dipole(
        oscillator: OscillatorParams,
        dipole: f64,
        field: f64,
        angle: f64,
        hbar: f64,
    ) -> Result<Self> {
        if hbar.is_nan() || hbar <= 0.0 {
            return Err(domain(format!("ħ must be > 0, got {hbar}")));
        }
        Self::new(oscillator, (dipole * field * angle.cos() / hbar).abs())
    }

    pub fn rabi(&self) -> f64 {
        self.rabi
    }
}

/// Lorentzian cross section `σ = σ0 Γ² / (4Δ² + Γ²)`, `σ0 = 3λ²/2π`.
pub fn cross_section(p: &OscillatorParams) -> f64 {
    SIGMA0 * lorentzian_weight(p)
}

/// Saturated cross section `σ0 Γ² / (4Δ² + Γ² + 2V²)`.
pub fn cross_section_tls(p: &TlsParams) -> f64 {
    let g = p.oscillator.gamma;
    let d = p.oscillator.detuning;
    SIGMA0 * g * g / (4.0 * d * d + g * g + 2.0 * p.rabi * p.rabi)
}

/// `L(Δ) = Γ² / (4Δ² + Γ²)`, scaling both interference and scattered power.
pub fn lorentzian_weight(p: &OscillatorParams) -> f64 {
    let (g, d) = (p.gamma, p.detuning);
    g * g / (4.0 * d * d + g * g)
}

/// Complex response `ℓ = Γ / (Γ − 2iΔ)`; `Re ℓ = |ℓ|² = L(Δ)`.
pub fn lorentzian_response(p: &OscillatorParams) -> Complex64 {
    let x = 2.0 * p.detuning / p.gamma;
    if !x.is_finite() {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(1.0, 0.0) / Complex64::new(1.0, -x)
}

/// Classical prefactor `−3Γ / (2(2Δ + iΓ))`; equals `(3/2) i` on resonance.
pub fn scattering_prefactor(p: &OscillatorParams) -> Complex64 {
    // −3Γ/(2(2Δ+iΓ)) = (3i/2) ℓ
    Complex64::new(0.0, 1.5) * lorentzian_response(p)
}

/// Coherent TLS prefactor `−3Γ(Δ − iΓ/2) / (4Δ² + Γ² + 2V²)`.
pub fn tls_prefactor(p: &TlsParams) -> Complex64 {
    let g = p.oscillator.gamma;
    let d = p.oscillator.detuning;
    if !d.is_finite() || !p.rabi.is_finite() {
        return Complex64::new(0.0, 0.0);
    }
    let den = 4.0 * d * d + g * g + 2.0 * p.rabi * p.rabi;
    Complex64::new(-3.0 * g * d, 1.5 * g * g) / den
}

/// Orientation of the driven dipole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DipoleAxis {
    X,
    Z,
}

impl DipoleAxis {
    pub fn unit(&self) -> Vec3 {
        match self {
            DipoleAxis::X => [1.0, 0.0, 0.0],
            DipoleAxis::Z => [0.0, 0.0, 1.0],
        }
    }
}

/// Lorentzian amplitude and axis of a scattered dipole wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteredField {
    pub amplitude: Complex64,
    pub polarization_axis: DipoleAxis,
}

impl ScatteredField {
    pub fn classical(p: &OscillatorParams, axis: DipoleAxis) -> Self {
        Self {
            amplitude: scattering_prefactor(p),
            polarization_axis: axis,
        }
    }

    /// Field at `kr r̂` for a scalar driving amplitude along the axis.
    pub fn evaluate(&self, e_inc_at_origin: Complex64, r_hat: Vec3, kr: f64) -> Result<ComplexVec3> {
        let e = ComplexVec3::from_real(self.polarization_axis.unit()).scale(e_inc_at_origin);
        dipole_wave(self.amplitude, e, r_hat, kr)
    }
}

fn check_far_field(r_hat: Vec3, kr: f64) -> Result<()> {
    if !(kr.is_finite() && kr >= FAR_FIELD_MIN_KR) {
        return Err(domain(format!("kr = {kr} below the far-field guard {FAR_FIELD_MIN_KR}")));
    }
    let n = (r_hat[0] * r_hat[0] + r_hat[1] * r_hat[1] + r_hat[2] * r_hat[2]).sqrt();
    if (n - 1.0).abs() > 1e-12 {
        return Err(domain(format!("r_hat has norm {n}, expected a unit vector")));
    }
    Ok(())
}

fn dipole_wave(prefactor: Complex64, e_inc: ComplexVec3, r_hat: Vec3, kr: f64) -> Result<ComplexVec3> {
    check_far_field(r_hat, kr)?;
    let radial = Complex64::from_polar(1.0 / kr, kr);
    Ok(e_inc.transverse_to(r_hat).scale(prefactor * radial))
}

/// Classical scattered field `−3Γ/(2(2Δ+iΓ)) E_inc(O) (e^{ikr}/kr) [ê − (ê·r̂) r̂]`.
pub fn scattered_far_field(
    p: &OscillatorParams,
    e_inc_at_origin: ComplexVec3,
    r_hat: Vec3,
    kr: f64,
) -> Result<ComplexVec3> {
    dipole_wave(scattering_prefactor(p), e_inc_at_origin, r_hat, kr)
}

/// Coherently scattered TLS field with the saturated prefactor.
pub fn coherent_scattered_field_tls(
    p: &TlsParams,
    e_inc_at_origin: ComplexVec3,
    r_hat: Vec3,
    kr: f64,
) -> Result<ComplexVec3> {
    dipole_wave(tls_prefactor(p), e_inc_at_origin, r_hat, kr)
}

/// Total scattered power `2c W_el(O) σ` for a focal field `E_inc(O)`.
pub fn scattered_power(p: &OscillatorParams, e_inc_at_origin: &ComplexVec3) -> f64 {
    2.0 * 0.25 * e_inc_at_origin.norm_sqr() * cross_section(p)
}

/// Scattered power of a saturated TLS, `σ_TLS 2c W_el(O)`.
pub fn scattered_power_tls(p: &TlsParams, e_inc_at_origin: &ComplexVec3) -> f64 {
    2.0 * 0.25 * e_inc_at_origin.norm_sqr() * cross_section_tls(p)
}

/// Converts a physical radius to `kr`.
pub fn kr_of(r: f64) -> f64 {
    WAVENUMBER * r
}
