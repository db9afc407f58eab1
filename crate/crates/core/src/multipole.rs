//! Electric-dipole mode projection of focused fields and the perfect-reflection
//! identity `E_sca = −Ψ` on resonance.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::illumination::{FocalSolver, GeometryConfig, IlluminationKind, IlluminationMode};
use crate::numerics::{Bundle, SpherePoint};
use crate::scattering::{scattered_far_field, scattering_prefactor, DipoleAxis, OscillatorParams, FAR_FIELD_MIN_KR};
use crate::vector::{ComplexVec3, Vec3};

/// `|N_e11(O)|`.
pub const ORIGIN_NORM: f64 = 2.0 / 3.0;

/// Gouy phase of the outgoing dipole mode relative to a free spherical wave.
pub const GOUY_PHASE: f64 = -FRAC_PI_2;

/// `kr` used when sampling far fields on the collection sphere.
pub const SAMPLE_KR: f64 = 1e4;

/// Phase attached to the outgoing branch of the dipole mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseConvention {
    pub gouy: f64,
}

impl Default for PhaseConvention {
    fn default() -> Self {
        Self { gouy: GOUY_PHASE }
    }
}

fn transverse_pattern(axis: DipoleAxis, p: &SpherePoint) -> Vec3 {
    let r = p.r_hat();
    let u = axis.unit();
    let d = u[0] * r[0] + u[1] * r[1] + u[2] * r[2];
    [u[0] - d * r[0], u[1] - d * r[1], u[2] - d * r[2]]
}

/// Electric dipole mode along `axis` under an explicit phase convention.
pub fn dipole_mode_with(
    axis: DipoleAxis,
    theta: f64,
    phi: f64,
    kr: f64,
    convention: PhaseConvention,
) -> Result<ComplexVec3> {
    if kr == 0.0 {
        return Ok(ComplexVec3::from_real(axis.unit()) * ORIGIN_NORM);
    }
    if !(kr.is_finite() && kr >= FAR_FIELD_MIN_KR) {
        return Err(domain(format!(
            "dipole mode is only available at the origin or for kr >= {FAR_FIELD_MIN_KR}, got {kr}"
        )));
    }
    if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
        return Err(domain(format!("direction (θ={theta}, φ={phi}) out of range")));
    }
    let pattern = transverse_pattern(axis, &SpherePoint::new(theta, phi));
    Ok(ComplexVec3::from_real(pattern).scale(Complex64::from_polar(1.0 / kr, kr + convention.gouy)))
}

/// `N_e11`: `(2/3) ê_x` at the origin, outgoing
/// `(cos θ cos φ ê_θ − sin φ ê_φ) e^{i(kr − π/2)}/kr` for `kr >> 1`.
pub fn n_e11(theta: f64, phi: f64, kr: f64) -> Result<ComplexVec3> {
    dipole_mode_with(DipoleAxis::X, theta, phi, kr, PhaseConvention::default())
}

/// Dipole-wave content of an illumination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleModeAmplitude {
    /// `E_inc(O) / |N(O)|`, the amplitude of the dipole mode.
    pub coefficient: Complex64,
    /// Fraction of the incident power carried by the dipole wave within the cone.
    pub content_fraction: f64,
    pub axis: DipoleAxis,
}

impl DipoleModeAmplitude {
    /// `Ψ(r) = coefficient · N(r)`.
    pub fn psi(&self, theta: f64, phi: f64, kr: f64) -> Result<ComplexVec3> {
        self.psi_with(theta, phi, kr, PhaseConvention::default())
    }

    pub fn psi_with(&self, theta: f64, phi: f64, kr: f64, convention: PhaseConvention) -> Result<ComplexVec3> {
        Ok(dipole_mode_with(self.axis, theta, phi, kr, convention)?.scale(self.coefficient))
    }
}

/// The dipole mode an illumination drives: `z` for the radially polarized wave, else `x`.
pub fn natural_axis(kind: IlluminationKind) -> DipoleAxis {
    match kind {
        IlluminationKind::DipoleZ => DipoleAxis::Z,
        _ => DipoleAxis::X,
    }
}

/// Projects the illumination onto the dipole mode along `axis`.
///
/// The content fraction is `|⟨s, n⟩|² / (⟨s, s⟩ ⟨n, n⟩)` with the L² pairing
/// `⟨a, b⟩ = ∫_cap a · conj(b) dΩ`, so a self-projection gives 1.
pub fn project_onto(
    solver: &FocalSolver,
    mode: &IlluminationMode,
    geom: &GeometryConfig,
    axis: DipoleAxis,
) -> Result<DipoleModeAmplitude> {
    let sums = solver.sphere().cap(
        |p| {
            let s = mode.kind.pattern_vector(p);
            let n = transverse_pattern(axis, p);
            let dot = |a: Vec3, b: Vec3| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            Bundle([dot(s, n), dot(s, s), dot(n, n)])
        },
        geom.alpha(),
    )?;
    let [overlap, self_s, self_n] = sums.0;
    let content_fraction = if self_s > 0.0 && self_n > 0.0 {
        (overlap * overlap / (self_s * self_n)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let e0 = solver.focal_field_at_origin(mode, geom)?;
    let coefficient = e0.dot_real(axis.unit()) / ORIGIN_NORM;
    Ok(DipoleModeAmplitude {
        coefficient,
        content_fraction,
        axis,
    })
}

/// Dipole-wave component along the illumination's natural axis.
pub fn dipole_wave_component(
    solver: &FocalSolver,
    mode: &IlluminationMode,
    geom: &GeometryConfig,
) -> Result<DipoleModeAmplitude> {
    project_onto(solver, mode, geom, natural_axis(mode.kind))
}

/// Polar/azimuthal sampling grid on the forward hemisphere.
fn forward_grid() -> Vec<(f64, f64)> {
    let (nt, np) = (24, 48);
    let mut out = Vec::with_capacity(nt * np);
    for i in 1..=nt {
        let theta = FRAC_PI_2 * i as f64 / nt as f64;
        for j in 0..np {
            out.push((theta, 2.0 * PI * j as f64 / np as f64));
        }
    }
    out
}

/// `max |E_sca + Ψ| / |Ψ|` over the forward hemisphere at `kr = 10⁴` for
/// x-dipole-wave illumination.
pub fn verify_perfect_reflection(solver: &FocalSolver, geom: &GeometryConfig, p: &OscillatorParams) -> Result<f64> {
    verify_perfect_reflection_with(solver, geom, p, PhaseConvention::default())
}

pub fn verify_perfect_reflection_with(
    solver: &FocalSolver,
    geom: &GeometryConfig,
    p: &OscillatorParams,
    convention: PhaseConvention,
) -> Result<f64> {
    let mode = IlluminationMode::dipole_x();
    let component = dipole_wave_component(solver, &mode, geom)?;
    let e0 = solver.focal_field_at_origin(&mode, geom)?;
    let mut worst: f64 = 0.0;
    let floor = 1e-12 * component.coefficient.norm() / SAMPLE_KR;
    for (theta, phi) in forward_grid() {
        let psi = component.psi_with(theta, phi, SAMPLE_KR, convention)?;
        if psi.norm() <= floor {
            continue;
        }
        let point = SpherePoint::new(theta, phi);
        let sca = scattered_far_field(p, e0, point.r_hat(), SAMPLE_KR)?;
        worst = worst.max((sca + psi).norm() / psi.norm());
    }
    Ok(worst)
}

/// Phase of the scattered wave relative to the outgoing dipole component,
/// `arg(prefactor) − gouy`, wrapped to `(−π, π]`.
pub fn relative_phase(p: &OscillatorParams, convention: PhaseConvention) -> f64 {
    let lorentz = scattering_prefactor(p).arg();
    let mut d = lorentz - convention.gouy;
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::illumination::outgoing_far_field;
    use crate::transmittance::k0_closed_form;

    fn hemisphere() -> GeometryConfig {
        GeometryConfig::symmetric(FRAC_PI_2).unwrap()
    }

    #[test]
    fn mode_examples() {
        let o = n_e11(0.3, 1.0, 0.0).unwrap();
        assert!((o.x() - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-16);
        assert!(o.y().norm() == 0.0 && o.z().norm() == 0.0);
        let v = n_e11(0.0, 0.0, 100.0).unwrap();
        let f = crate::vector::SphericalFrame::new(0.0, 0.0);
        let c = f.components(&v);
        let expected = Complex64::from_polar(1.0 / 100.0, 100.0 - FRAC_PI_2);
        assert!((c.theta - expected).norm() < 1e-16);
        assert!(c.phi.norm() < 1e-18);
        assert!(n_e11(FRAC_PI_2, 0.0, 1e3).unwrap().norm() < 1e-18);
        assert!(n_e11(0.1, 0.1, 5.0).is_err());
    }

    #[test]
    fn content_fractions() {
        let s = FocalSolver::default();
        for alpha in [0.2, 0.9, FRAC_PI_2] {
            let g = GeometryConfig::symmetric(alpha).unwrap();
            let c = dipole_wave_component(&s, &IlluminationMode::dipole_x(), &g).unwrap();
            assert!((c.content_fraction - 1.0).abs() < 1e-10);
            let z = dipole_wave_component(&s, &IlluminationMode::dipole_z(), &g).unwrap();
            assert!((z.content_fraction - 1.0).abs() < 1e-10);
        }
        let pw = dipole_wave_component(&s, &IlluminationMode::plane_wave(), &hemisphere()).unwrap();
        assert!((pw.content_fraction - 64.0 / 75.0).abs() < 1e-6);
        let cross = project_onto(&s, &IlluminationMode::dipole_z(), &hemisphere(), DipoleAxis::X).unwrap();
        assert!(cross.content_fraction.abs() < 1e-12);
        assert!(cross.coefficient.norm() < 1e-12);
    }

    #[test]
    fn coefficient_is_three_halves_focal_field() {
        let s = FocalSolver::default();
        let g = GeometryConfig::symmetric(1.1).unwrap();
        let m = IlluminationMode::plane_wave();
        let c = dipole_wave_component(&s, &m, &g).unwrap();
        let e0 = s.focal_field_at_origin(&m, &g).unwrap();
        assert!((c.coefficient - e0.x() * 1.5).norm() < 1e-14);
    }

    #[test]
    fn content_fraction_is_amplitude_invariant() {
        let s = FocalSolver::default();
        let g = GeometryConfig::symmetric(1.0).unwrap();
        let a = dipole_wave_component(&s, &IlluminationMode::plane_wave(), &g).unwrap();
        let m = IlluminationMode::with_amplitude(IlluminationKind::PlaneWave, 7.3).unwrap();
        let b = dipole_wave_component(&s, &m, &g).unwrap();
        assert!((a.content_fraction - b.content_fraction).abs() < 1e-14);
    }

    #[test]
    fn mode_matching_identity() {
        let s = FocalSolver::default();
        for i in 1..=20 {
            let alpha = FRAC_PI_2 * i as f64 / 20.0;
            let g = GeometryConfig::symmetric(alpha).unwrap();
            let px = k0_closed_form(IlluminationKind::DipoleX, alpha).unwrap().k0;
            for kind in [IlluminationKind::PlaneWave, IlluminationKind::DipolePlusMagnetic, IlluminationKind::DipoleX] {
                let eta = dipole_wave_component(&s, &IlluminationMode::new(kind), &g).unwrap().content_fraction;
                let k0 = k0_closed_form(kind, alpha).unwrap().k0;
                assert!((k0 - px * eta).abs() < 1e-8 * k0.max(1e-300) + 1e-14, "{kind:?} α={alpha}");
            }
        }
    }

    #[test]
    fn perfect_reflection_on_resonance() {
        let s = FocalSolver::default();
        let r = verify_perfect_reflection(&s, &hemisphere(), &OscillatorParams::resonant()).unwrap();
        assert!(r < 1e-10, "residual {r:e}");
        let off = verify_perfect_reflection(&s, &hemisphere(), &OscillatorParams::detuned(10.0).unwrap()).unwrap();
        assert!(off > 0.5 && off < 2.0, "{off}");
    }

    #[test]
    fn flipped_gouy_phase_doubles_instead_of_cancelling() {
        let s = FocalSolver::default();
        let flipped = PhaseConvention { gouy: FRAC_PI_2 };
        let r = verify_perfect_reflection_with(&s, &hemisphere(), &OscillatorParams::resonant(), flipped).unwrap();
        assert!((r - 2.0).abs() < 1e-10);
    }

    #[test]
    fn phase_budget_is_pi() {
        let d = relative_phase(&OscillatorParams::resonant(), PhaseConvention::default());
        assert!((d.abs() - PI).abs() < 1e-15);
        let lorentz = scattering_prefactor(&OscillatorParams::resonant()).arg();
        assert!((lorentz - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn psi_is_the_outgoing_debye_field() {
        // the dipole component of an x-dipole wave is the whole outgoing wave
        let s = FocalSolver::default();
        let g = hemisphere();
        let m = IlluminationMode::dipole_x();
        let c = dipole_wave_component(&s, &m, &g).unwrap();
        for (theta, phi) in [(0.0, 0.0), (0.4, 1.0), (1.2, 2.5), (1.5, 4.0)] {
            let psi = c.psi(theta, phi, SAMPLE_KR).unwrap();
            let out = outgoing_far_field(&m, &g, &SpherePoint::new(theta, phi), SAMPLE_KR).unwrap();
            assert!((psi - out).norm() < 1e-12 * out.norm().max(1e-300));
        }
    }
}
