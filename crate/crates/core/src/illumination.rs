//! Incident focused fields: angular strength on the reference sphere, Debye
//! focal fields, incident power, focal energy densities and the effective
//! focal area.
//!
//! The Debye focal field is
//! `E(r) = −(i k f E0 / 2π) ∫_cap s(θ, φ) e^{i k ŝ·r} dΩ`
//! with `s` the strength vector and `ŝ` the propagation direction of the
//! partial plane wave. The magnetic field uses `ŝ × s` in place of `s`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Error, Result};
use crate::numerics::{bessel_j012, Bundle, Integrator, SphereIntegrator, SpherePoint};
use crate::parallel::{self, Execution};
use crate::units::{BASSETT_LIMIT, MIN_HALF_ANGLE, SIGMA0, WAVENUMBER};
use crate::vector::{ComplexVec3, FarFieldSample, Vec3};

/// Entrance/collection half-angles and focal length, lengths in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    alpha: f64,
    beta: f64,
    focal_length: f64,
    aperture_radius: f64,
}

fn check_half_angle(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(MIN_HALF_ANGLE..=FRAC_PI_2 + 1e-15).contains(&v) {
        return Err(domain(format!(
            "{name} = {v} outside [{MIN_HALF_ANGLE}, π/2]"
        )));
    }
    Ok(())
}

impl GeometryConfig {
    /// Unit focal length; the aperture radius follows from the sine condition.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::with_focal_length(alpha, beta, 1.0)
    }

    pub fn with_focal_length(alpha: f64, beta: f64, focal_length: f64) -> Result<Self> {
        check_half_angle("alpha", alpha)?;
        check_half_angle("beta", beta)?;
        if !(focal_length.is_finite() && focal_length > 0.0) {
            return Err(domain(format!("focal length must be > 0, got {focal_length}")));
        }
        Ok(Self {
            alpha: alpha.min(FRAC_PI_2),
            beta: beta.min(FRAC_PI_2),
            focal_length,
            aperture_radius: focal_length * alpha.min(FRAC_PI_2).sin(),
        })
    }

    /// Validates an explicitly given aperture radius against `a = f sin α`.
    pub fn from_parts(alpha: f64, beta: f64, focal_length: f64, aperture_radius: f64) -> Result<Self> {
        let g = Self::with_focal_length(alpha, beta, focal_length)?;
        if (g.aperture_radius - aperture_radius).abs() > 1e-12 * focal_length.max(1.0) {
            return Err(domain(format!(
                "aperture radius {aperture_radius} violates a = f sin α = {}",
                g.aperture_radius
            )));
        }
        Ok(g)
    }

    /// Same entrance cone, collection cone equal to it.
    pub fn symmetric(alpha: f64) -> Result<Self> {
        Self::new(alpha, alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn focal_length(&self) -> f64 {
        self.focal_length
    }

    pub fn aperture_radius(&self) -> f64 {
        self.aperture_radius
    }

    /// `γ = min(α, β)`.
    pub fn gamma(&self) -> f64 {
        self.alpha.min(self.beta)
    }
}

/// The incident field families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IlluminationKind {
    /// x-polarized plane wave through an aplanatic lens.
    PlaneWave,
    /// Time-reversed emission of an x-oriented electric dipole.
    DipoleX,
    /// Time-reversed emission of a z-oriented electric dipole (radial polarization).
    DipoleZ,
    /// Equal-weight x-electric plus y-magnetic dipole pattern.
    DipolePlusMagnetic,
}

impl IlluminationKind {
    pub const ALL: [IlluminationKind; 4] = [
        IlluminationKind::PlaneWave,
        IlluminationKind::DipolePlusMagnetic,
        IlluminationKind::DipoleX,
        IlluminationKind::DipoleZ,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            IlluminationKind::PlaneWave => "pw",
            IlluminationKind::DipoleX => "px",
            IlluminationKind::DipoleZ => "pz",
            IlluminationKind::DipolePlusMagnetic => "pm",
        }
    }

    /// Unnormalized `(ê_θ, ê_φ)` amplitudes on the reference sphere.
    pub(crate) fn pattern(&self, p: &SpherePoint) -> (f64, f64) {
        let (c, s) = (p.cos_theta, p.sin_theta);
        match self {
            IlluminationKind::PlaneWave => {
                let a = c.max(0.0).sqrt();
                (a * p.cos_phi, -a * p.sin_phi)
            }
            IlluminationKind::DipoleX => (c * p.cos_phi, -p.sin_phi),
            IlluminationKind::DipoleZ => (s, 0.0),
            IlluminationKind::DipolePlusMagnetic => {
                let a = 0.5 * (1.0 + c);
                (a * p.cos_phi, -a * p.sin_phi)
            }
        }
    }

    /// Cartesian pattern vector (real).
    pub(crate) fn pattern_vector(&self, p: &SpherePoint) -> Vec3 {
        let (et, ep) = self.pattern(p);
        let f = p.frame();
        [0, 1, 2].map(|i| et * f.theta_hat[i] + ep * f.phi_hat[i])
    }
}

impl std::str::FromStr for IlluminationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pw" | "plane-wave" | "planewave" => Ok(Self::PlaneWave),
            "px" | "dipole-x" | "dipolex" => Ok(Self::DipoleX),
            "pz" | "dipole-z" | "dipolez" => Ok(Self::DipoleZ),
            "pm" | "p+m" | "dipole-plus-magnetic" => Ok(Self::DipolePlusMagnetic),
            other => Err(config(format!("unknown illumination mode '{other}'"))),
        }
    }
}

/// An illumination family with its field amplitude `E0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IlluminationMode {
    pub kind: IlluminationKind,
    amplitude: f64,
}

impl IlluminationMode {
    pub fn new(kind: IlluminationKind) -> Self {
        Self {
            kind,
            amplitude: 1.0,
        }
    }

    pub fn with_amplitude(kind: IlluminationKind, amplitude: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(domain(format!("amplitude must be > 0, got {amplitude}")));
        }
        Ok(Self { kind, amplitude })
    }

    pub fn plane_wave() -> Self {
        Self::new(IlluminationKind::PlaneWave)
    }

    pub fn dipole_x() -> Self {
        Self::new(IlluminationKind::DipoleX)
    }

    pub fn dipole_z() -> Self {
        Self::new(IlluminationKind::DipoleZ)
    }

    pub fn dipole_plus_magnetic() -> Self {
        Self::new(IlluminationKind::DipolePlusMagnetic)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Angular strength on the reference sphere; zero outside the entrance cone.
    pub fn strength_vector(&self, geom: &GeometryConfig, theta: f64, phi: f64) -> Result<FarFieldSample> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(domain(format!("direction (θ={theta}, φ={phi}) out of range")));
        }
        let (e_theta, e_phi) = if theta > geom.alpha {
            (0.0, 0.0)
        } else {
            self.kind.pattern(&SpherePoint::new(theta, phi))
        };
        Ok(FarFieldSample {
            theta,
            phi,
            e_theta: Complex64::new(self.amplitude * e_theta, 0.0),
            e_phi: Complex64::new(self.amplitude * e_phi, 0.0),
        })
    }

    /// Scale of the Debye integral, `−i k f E0 / 2π`.
    fn debye_prefactor(&self, geom: &GeometryConfig) -> Complex64 {
        Complex64::new(0.0, -WAVENUMBER * geom.focal_length * self.amplitude / (2.0 * PI))
    }
}

/// Incident focal fields, power and energy densities evaluated by quadrature.
#[derive(Debug, Clone, Default)]
pub struct FocalSolver {
    sphere: SphereIntegrator,
}

impl FocalSolver {
    pub fn new(sphere: SphereIntegrator) -> Self {
        Self { sphere }
    }

    pub fn with_tolerance(rel_tol: f64) -> Result<Self> {
        Ok(Self::new(SphereIntegrator::with_tolerance(rel_tol)?))
    }

    pub fn sphere(&self) -> &SphereIntegrator {
        &self.sphere
    }

    /// Time-averaged flux through the reference-sphere cap `θ <= α`.
    pub fn incident_power(&self, mode: &IlluminationMode, geom: &GeometryConfig) -> Result<f64> {
        let flux = self.sphere.cap(
            |p| {
                let (a, b) = mode.kind.pattern(p);
                a * a + b * b
            },
            geom.alpha,
        )?;
        let scale = geom.focal_length * mode.amplitude;
        Ok(0.5 * scale * scale * flux)
    }

    /// Debye electric and magnetic fields at `r` (wavelength units).
    pub fn focal_fields(
        &self,
        mode: &IlluminationMode,
        geom: &GeometryConfig,
        r: Vec3,
    ) -> Result<(ComplexVec3, ComplexVec3)> {
        let k = WAVENUMBER;
        let sums = self.sphere.cap(
            |p| {
                let s = p.r_hat();
                let e = mode.kind.pattern_vector(p);
                let h = ComplexVec3::from_real(e).crossed_by(s);
                let phase = Complex64::from_polar(1.0, k * (s[0] * r[0] + s[1] * r[1] + s[2] * r[2]));
                let mut out = [0.0; 12];
                for i in 0..3 {
                    let ev = phase * e[i];
                    let hv = phase * h.0[i];
                    out[2 * i] = ev.re;
                    out[2 * i + 1] = ev.im;
                    out[6 + 2 * i] = hv.re;
                    out[6 + 2 * i + 1] = hv.im;
                }
                Bundle(out)
            },
            geom.alpha,
        )?;
        let pre = mode.debye_prefactor(geom);
        let v = sums.0;
        let e = ComplexVec3([0, 1, 2].map(|i| pre * Complex64::new(v[2 * i], v[2 * i + 1])));
        let h = ComplexVec3([0, 1, 2].map(|i| pre * Complex64::new(v[6 + 2 * i], v[6 + 2 * i + 1])));
        Ok((e, h))
    }

    /// Electric field at the focus `O`.
    pub fn focal_field_at_origin(&self, mode: &IlluminationMode, geom: &GeometryConfig) -> Result<ComplexVec3> {
        let sum = self.sphere.cap(|p| Bundle(mode.kind.pattern_vector(p)), geom.alpha)?;
        Ok(ComplexVec3::from_real(sum.0).scale(mode.debye_prefactor(geom)))
    }

    /// Magnetic field at the focus `O`.
    pub fn magnetic_field_at_origin(&self, mode: &IlluminationMode, geom: &GeometryConfig) -> Result<ComplexVec3> {
        let sum = self.sphere.cap(
            |p| {
                let h = ComplexVec3::from_real(mode.kind.pattern_vector(p)).crossed_by(p.r_hat());
                Bundle(h.0.map(|c| c.re))
            },
            geom.alpha,
        )?;
        Ok(ComplexVec3::from_real(sum.0).scale(mode.debye_prefactor(geom)))
    }

    /// Time-averaged electric energy density `|E(O)|² / 4` at the focus.
    pub fn focal_energy_density(&self, mode: &IlluminationMode, geom: &GeometryConfig) -> Result<f64> {
        Ok(0.25 * self.focal_field_at_origin(mode, geom)?.norm_sqr())
    }

    /// Time-averaged magnetic energy density `|H(O)|² / 4` at the focus.
    pub fn focal_magnetic_energy_density(&self, mode: &IlluminationMode, geom: &GeometryConfig) -> Result<f64> {
        Ok(0.25 * self.magnetic_field_at_origin(mode, geom)?.norm_sqr())
    }

    /// Effective focal area `A = P_inc / (2c W_el(O))`.
    pub fn effective_area(&self, mode: &IlluminationMode, geom: &GeometryConfig) -> Result<f64> {
        let p = self.incident_power(mode, geom)?;
        let w = self.focal_energy_density(mode, geom)?;
        if w <= 0.0 {
            return Err(domain(format!(
                "{:?} has no electric field at the focus",
                mode.kind
            )));
        }
        Ok(p / (2.0 * w))
    }

    /// `(W_el(O) + W_mag(O)) / P_inc` and `2c W_el(O) / P_inc`.
    pub fn energy_concentration(&self, mode: &IlluminationMode, geom: &GeometryConfig) -> Result<EnergyConcentration> {
        let p = self.incident_power(mode, geom)?;
        let w_el = self.focal_energy_density(mode, geom)?;
        let w_mag = self.focal_magnetic_energy_density(mode, geom)?;
        Ok(EnergyConcentration {
            w_el,
            w_mag,
            incident_power: p,
        })
    }
}

/// Focal energy densities per unit incident power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyConcentration {
    pub w_el: f64,
    pub w_mag: f64,
    pub incident_power: f64,
}

impl EnergyConcentration {
    /// `(W_el + W_mag) / P_inc` in units of `k² / 3πc`.
    pub fn total_over_limit(&self) -> f64 {
        (self.w_el + self.w_mag) / self.incident_power / BASSETT_LIMIT
    }

    /// `2c W_el / P_inc` in units of `k² / 3πc`; equals `K0 / 2`.
    pub fn electric_over_limit(&self) -> f64 {
        2.0 * self.w_el / self.incident_power / BASSETT_LIMIT
    }
}

/// Outgoing part of the incident field beyond the focus, `−k f E0 s(θ, φ) e^{ikr}/kr`.
///
/// This is the stationary-phase limit of the Debye integral for `ŝ = r̂`;
/// relative to `E(O) = −(i k f E0/2π) ∫ s dΩ` it carries the Gouy factor `−i`.
pub fn outgoing_far_field(
    mode: &IlluminationMode,
    geom: &GeometryConfig,
    point: &SpherePoint,
    kr: f64,
) -> Result<ComplexVec3> {
    if !(kr.is_finite() && kr >= crate::scattering::FAR_FIELD_MIN_KR) {
        return Err(domain(format!("kr = {kr} below the far-field guard")));
    }
    if point.theta > geom.alpha {
        return Ok(ComplexVec3::zero());
    }
    let radial = Complex64::from_polar(WAVENUMBER * geom.focal_length * mode.amplitude / kr, kr);
    Ok(ComplexVec3::from_real(mode.kind.pattern_vector(point)).scale(-radial))
}

/// Plane-wave aperture power `½ c ε0 E0² π a²`.
pub fn aperture_power_plane_wave(geom: &GeometryConfig, amplitude: f64) -> f64 {
    0.5 * amplitude * amplitude * PI * geom.aperture_radius * geom.aperture_radius
}

/// On-axis value `I0(O) = (16/15)[1 − (1/8)(5 + 3 cos α) cos^{3/2} α]`.
pub fn i0_on_axis(alpha: f64) -> f64 {
    // as (2/3)(1 − c^{3/2}) + (2/5)(1 − c^{5/2}) to keep small cones accurate
    let half = (0.5 * alpha).sin();
    let ln_c = (-2.0 * half * half).ln_1p();
    if !ln_c.is_finite() {
        return 16.0 / 15.0;
    }
    -(2.0 / 3.0) * (1.5 * ln_c).exp_m1() - 0.4 * (2.5 * ln_c).exp_m1()
}

/// Plane-wave focal energy density `ε0 (π f E0 |I0(O)| / 2λ)²` from the closed-form `I0(O)`.
pub fn focal_energy_density_plane_wave(geom: &GeometryConfig, amplitude: f64) -> f64 {
    let v = PI * geom.focal_length * amplitude * i0_on_axis(geom.alpha) / 2.0;
    v * v
}

/// The aplanatic diffraction integrals at focal-plane radius `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffractionIntegrals {
    pub rho: f64,
    pub i0: Complex64,
    pub i1: Complex64,
    pub i2: Complex64,
}

/// Polar angle where the diffraction integrals switch from `θ` to `t = sqrt(cos θ)`.
const POLAR_SPLIT: f64 = PI / 3.0;

/// `I_n(ρ) = ∫_0^α sqrt(cos θ) sin θ g_n(θ) J_n(k ρ sin θ) dθ` with
/// `g0 = 1 + cos θ`, `g1 = sin θ`, `g2 = 1 − cos θ`.
pub fn diffraction_integrals(geom: &GeometryConfig, rho: f64, rel_tol: f64) -> Result<DiffractionIntegrals> {
    if !rho.is_finite() || rho < 0.0 {
        return Err(domain(format!("focal-plane radius must be finite and >= 0, got {rho}")));
    }
    let kr = WAVENUMBER * rho;
    // about one panel per period of the Bessel kernel
    let panels = 1 + (kr / (2.0 * PI)).ceil() as usize;
    let integ = Integrator::with_tolerance(rel_tol)?
        .abs_tol(1e-14)
        .initial_panels(panels);
    let alpha = geom.alpha;
    // θ-variable near the axis, where sqrt(cos θ) is smooth
    let split = alpha.min(POLAR_SPLIT);
    let near_axis = integ.integrate(
        |theta: f64| {
            let (s, c) = theta.sin_cos();
            let j = bessel_j012(kr * s);
            let w = c.sqrt() * s;
            Bundle([w * (1.0 + c) * j[0], w * s * j[1], w * (1.0 - c) * j[2]])
        },
        0.0,
        split,
    )?;
    // t-variable towards the rim: cos θ = t², sin θ dθ = 2t dt
    let rim = if alpha > split {
        let t_lo = if (alpha - FRAC_PI_2).abs() < 1e-15 { 0.0 } else { alpha.cos().sqrt() };
        integ.integrate(
            |t: f64| {
                let c = t * t;
                let s = ((1.0 - c) * (1.0 + c)).sqrt();
                let j = bessel_j012(kr * s);
                let w = 2.0 * t * t;
                Bundle([w * (1.0 + c) * j[0], w * s * j[1], w * (1.0 - c) * j[2]])
            },
            t_lo,
            split.cos().sqrt(),
        )?
    } else {
        Bundle([0.0; 3])
    };
    let v = near_axis + rim;
    Ok(DiffractionIntegrals {
        rho,
        i0: Complex64::new(v.0[0], 0.0),
        i1: Complex64::new(v.0[1], 0.0),
        i2: Complex64::new(v.0[2], 0.0),
    })
}

/// Plane-wave field along the focal-plane x-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocalFieldSample {
    pub position: Vec3,
    /// Electric field for unit `E0` and `f`.
    pub e: ComplexVec3,
    /// `S_z` normalized to its value at the focus.
    pub s_z: f64,
    /// Electric energy density normalized to its value at the focus.
    pub w_el: f64,
}

/// Focal-plane sample at `(x, 0, 0)` for plane-wave illumination.
pub fn focal_plane_profile(
    geom: &GeometryConfig,
    mode: &IlluminationMode,
    x: f64,
    rel_tol: f64,
) -> Result<FocalFieldSample> {
    if mode.kind != IlluminationKind::PlaneWave {
        return Err(domain("focal-plane profiles are only defined for plane-wave illumination"));
    }
    if !x.is_finite() {
        return Err(domain(format!("non-finite focal-plane coordinate {x}")));
    }
    let at = diffraction_integrals(geom, x.abs(), rel_tol)?;
    let i00 = i0_on_axis(geom.alpha);
    // φ = 0 on the positive axis, φ = π on the negative axis
    let cos_phi = if x < 0.0 { -1.0 } else { 1.0 };
    let pre = Complex64::new(0.0, -0.5 * WAVENUMBER * geom.focal_length * mode.amplitude);
    let e = ComplexVec3::new(
        pre * (at.i0 + at.i2),
        Complex64::new(0.0, 0.0),
        pre * Complex64::new(0.0, -2.0) * at.i1 * cos_phi,
    );
    let s_z = (at.i0.norm_sqr() - at.i2.norm_sqr()) / (i00 * i00);
    let w_el = ((at.i0 + at.i2).norm_sqr() + 4.0 * at.i1.norm_sqr()) / (i00 * i00);
    Ok(FocalFieldSample {
        position: [x, 0.0, 0.0],
        e,
        s_z,
        w_el,
    })
}

/// Radial focal-plane flux integral and its truncation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocalPlaneFlux {
    pub rho_max: f64,
    /// `∫_0^ρmax (|I0|² − |I2|²) ρ dρ`.
    pub truncated: f64,
    /// The same integral stopped at `ρmax / 2`.
    pub truncated_half: f64,
    /// Estimated `∫_ρmax^∞`, from the asymptotic envelope where one applies.
    pub tail: f64,
    pub tail_regime: TailRegime,
}

/// Which large-`ρ` asymptotic governs the focal-plane tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailRegime {
    /// `α = π/2`: the stationary point of `sin θ` sits on the `sqrt(cos θ)` rim zero.
    Hemisphere,
    /// Sharp rim at `sin α < 1`, far from the stationary point.
    Rim,
    /// Neither expansion holds at this cutoff; the tail is extrapolated in `1/ρmax`.
    Extrapolated,
}

/// `k ρmax (1 − sin α)` above which the rim expansion is used.
const RIM_REGIME_THRESHOLD: f64 = 50.0;

impl FocalPlaneFlux {
    pub fn radial_integral(&self) -> f64 {
        self.truncated + self.tail
    }

    /// Tail from the `1/ρmax` decay of the truncation error: `T(ρmax) − T(ρmax/2)`.
    pub fn tail_extrapolated(&self) -> f64 {
        self.truncated - self.truncated_half
    }

    /// `A = 2π ∫ (|I0|² − |I2|²) ρ dρ / |I0(O)|²`.
    pub fn effective_area(&self, alpha: f64) -> f64 {
        let i00 = i0_on_axis(alpha);
        2.0 * PI * self.radial_integral() / (i00 * i00)
    }

    /// Incident power from the focal-plane flux, `∫ S_z d²r`.
    pub fn power(&self, geom: &GeometryConfig, amplitude: f64) -> f64 {
        let c = 0.5 * WAVENUMBER * geom.focal_length * amplitude;
        0.5 * c * c * 2.0 * PI * self.radial_integral()
    }
}

pub const DEFAULT_RHO_MAX: f64 = 200.0;
/// Quadrature tolerance for the radial focal-plane integral.
pub const FOCAL_PLANE_REL_TOL: f64 = 1e-8;

/// Mean of `(|I0|² − |I2|²) ρ` integrated from `rho_max` to infinity.
///
/// With a sharp rim (`sin α < 1`) the rim endpoint dominates and the
/// integrand averages to `4 sin α / (π k³ ρ²)`. For `α = π/2` the
/// `(1 − s)^(−1/4)` endpoint singularity gives `I0 − I2 ~ κ^(−5/4)`,
/// `I0 + I2 ~ κ^(−7/4)` with a relative phase of π/4, and the mean becomes
/// `1 / (k³ ρ²)`.
pub fn focal_plane_tail(alpha: f64, rho_max: f64) -> Option<(f64, TailRegime)> {
    let k3 = WAVENUMBER.powi(3);
    if (alpha - FRAC_PI_2).abs() < 1e-12 {
        Some((1.0 / (k3 * rho_max), TailRegime::Hemisphere))
    } else if WAVENUMBER * rho_max * (1.0 - alpha.sin()) >= RIM_REGIME_THRESHOLD {
        Some((4.0 * alpha.sin() / (PI * k3 * rho_max), TailRegime::Rim))
    } else {
        None
    }
}

/// Integrates `(|I0|² − |I2|²) ρ` over the focal plane out to `rho_max`.
pub fn focal_plane_flux(
    geom: &GeometryConfig,
    rho_max: f64,
    rel_tol: f64,
    exec: Execution,
) -> Result<FocalPlaneFlux> {
    if !(rho_max.is_finite() && rho_max > 0.0) {
        return Err(config(format!("rho_max must be > 0, got {rho_max}")));
    }
    // even count of roughly one-wavelength panels, so ρmax/2 is a panel edge
    let n_panels = 2 * (rho_max / 2.0).ceil().max(1.0) as usize;
    let width = rho_max / n_panels as f64;
    let panels: Vec<(f64, f64)> = (0..n_panels)
        .map(|i| (i as f64 * width, if i + 1 == n_panels { rho_max } else { (i + 1) as f64 * width }))
        .collect();
    let parts = parallel::try_map(exec, &panels, |&(a, b)| {
        let integ = Integrator::with_tolerance(rel_tol)?.abs_tol(1e-16);
        let failure = std::cell::RefCell::new(None);
        let v = integ.integrate(
            |rho: f64| match diffraction_integrals(geom, rho, rel_tol) {
                Ok(d) => (d.i0.norm_sqr() - d.i2.norm_sqr()) * rho,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            a,
            b,
        )?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    })?;
    let truncated_half: f64 = parts[..n_panels / 2].iter().sum();
    let truncated = truncated_half + parts[n_panels / 2..].iter().sum::<f64>();
    let (tail, tail_regime) = focal_plane_tail(geom.alpha, rho_max)
        .unwrap_or((truncated - truncated_half, TailRegime::Extrapolated));
    Ok(FocalPlaneFlux {
        rho_max,
        truncated,
        truncated_half,
        tail,
        tail_regime,
    })
}

/// Both routes to the plane-wave effective area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaRoutes {
    pub energy_density: f64,
    pub focal_plane: f64,
}

impl AreaRoutes {
    pub fn relative_gap(&self) -> f64 {
        (self.focal_plane - self.energy_density).abs() / self.energy_density
    }
}

/// Plane-wave effective area by the energy-density and focal-plane routes;
/// an accuracy error if they differ by more than `agreement`.
pub fn effective_area_cross_checked(
    solver: &FocalSolver,
    geom: &GeometryConfig,
    rho_max: f64,
    agreement: f64,
    exec: Execution,
) -> Result<AreaRoutes> {
    let energy_density = solver.effective_area(&IlluminationMode::plane_wave(), geom)?;
    let flux = focal_plane_flux(geom, rho_max, FOCAL_PLANE_REL_TOL, exec)?;
    let routes = AreaRoutes {
        energy_density,
        focal_plane: flux.effective_area(geom.alpha),
    };
    let gap = routes.relative_gap();
    if gap > agreement {
        return Err(Error::Accuracy {
            estimate: routes.focal_plane,
            gap,
            context: format!("focal-plane area disagrees with energy-density area {energy_density}"),
        });
    }
    Ok(routes)
}

/// `σ0 / A`.
pub fn area_in_sigma0(area: f64) -> f64 {
    area / SIGMA0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::SIGMA0;

    fn solver() -> FocalSolver {
        FocalSolver::default()
    }

    #[test]
    fn geometry_validation() {
        assert!(GeometryConfig::new(0.0, 1.0).is_err());
        assert!(GeometryConfig::new(1.0, 2.0).is_err());
        assert!(GeometryConfig::new(1e-4, 1.0).is_err());
        assert!(GeometryConfig::new(1e-3, 1.0).is_ok());
        assert!(GeometryConfig::with_focal_length(1.0, 1.0, -1.0).is_err());
        let g = GeometryConfig::with_focal_length(0.7, 0.5, 3.0).unwrap();
        assert!((g.aperture_radius() - 3.0 * 0.7f64.sin()).abs() < 1e-12);
        assert!(GeometryConfig::from_parts(0.7, 0.5, 3.0, 3.0 * 0.7f64.sin()).is_ok());
        assert!(GeometryConfig::from_parts(0.7, 0.5, 3.0, 2.0).is_err());
        assert_eq!(g.gamma(), 0.5);
    }

    #[test]
    fn strength_vector_examples() {
        let g = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
        let v = IlluminationMode::dipole_x().strength_vector(&g, FRAC_PI_2, 0.0).unwrap();
        assert!(v.norm_sqr() < 1e-30);
        for phi in [0.0, 0.4, 2.0, 5.5] {
            let v = IlluminationMode::plane_wave().strength_vector(&g, 0.0, phi).unwrap();
            assert!((v.norm_sqr() - 1.0).abs() < 1e-15);
            let z = IlluminationMode::dipole_z().strength_vector(&g, FRAC_PI_2, phi).unwrap();
            assert!((z.e_theta.re - 1.0).abs() < 1e-15 && z.e_phi.norm() == 0.0);
        }
        let narrow = GeometryConfig::symmetric(0.5).unwrap();
        let out = IlluminationMode::plane_wave().strength_vector(&narrow, 0.6, 0.0).unwrap();
        assert_eq!(out.norm_sqr(), 0.0);
        assert!(IlluminationMode::plane_wave().strength_vector(&g, 3.5, 0.0).is_err());
        assert!(IlluminationMode::plane_wave().strength_vector(&g, -0.1, 0.0).is_err());
    }

    #[test]
    fn strength_vector_is_transverse() {
        let g = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
        for kind in IlluminationKind::ALL {
            for i in 0..15 {
                for j in 0..12 {
                    let (t, p) = (i as f64 * 0.1, j as f64 * 0.5);
                    let v = IlluminationMode::new(kind).strength_vector(&g, t, p).unwrap();
                    let f = crate::vector::SphericalFrame::new(t, p);
                    assert!(v.to_cartesian().dot_real(f.r_hat).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn plane_wave_power_routes_agree() {
        let g = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
        let cap = solver().incident_power(&IlluminationMode::plane_wave(), &g).unwrap();
        let aperture = aperture_power_plane_wave(&g, 1.0);
        assert!((cap - aperture).abs() < 1e-10 * aperture);
        for alpha in [0.1, 0.6, 1.2] {
            let g = GeometryConfig::with_focal_length(alpha, alpha, 2.5).unwrap();
            let m = IlluminationMode::with_amplitude(IlluminationKind::PlaneWave, 1.7).unwrap();
            let cap = solver().incident_power(&m, &g).unwrap();
            assert!((cap - aperture_power_plane_wave(&g, 1.7)).abs() < 1e-10 * cap);
        }
    }

    #[test]
    fn dipole_hemisphere_carries_half_the_power() {
        let s = solver();
        for (kind, total) in [
            (IlluminationKind::DipoleX, 0.5 * 8.0 * PI / 3.0),
            (IlluminationKind::DipoleZ, 0.5 * 8.0 * PI / 3.0),
        ] {
            let g = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
            let p = s.incident_power(&IlluminationMode::new(kind), &g).unwrap();
            assert!((p - 0.5 * total).abs() < 1e-12, "{kind:?}: {p}");
        }
    }

    #[test]
    fn vanishing_cone() {
        let g = GeometryConfig::symmetric(1e-3).unwrap();
        for kind in IlluminationKind::ALL {
            let m = IlluminationMode::new(kind);
            assert!(solver().incident_power(&m, &g).unwrap() < 1e-5);
            assert!(solver().focal_energy_density(&m, &g).unwrap() < 1e-10);
        }
    }

    #[test]
    fn on_axis_integrals() {
        let g = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
        let d = diffraction_integrals(&g, 0.0, 1e-12).unwrap();
        assert!((d.i0.re - 16.0 / 15.0).abs() < 1e-10);
        assert_eq!(d.i1.norm(), 0.0);
        assert_eq!(d.i2.norm(), 0.0);
        let g3 = GeometryConfig::symmetric(PI / 3.0).unwrap();
        let d3 = diffraction_integrals(&g3, 0.0, 1e-12).unwrap();
        let expected = 16.0 / 15.0 * (1.0 - 0.125 * 6.5 * 0.5f64.powf(1.5));
        assert!((d3.i0.re - expected).abs() < 1e-10);
        assert!((d3.i0.re - 0.76026).abs() < 1e-5);
        for i in 1..=20 {
            let alpha = FRAC_PI_2 * i as f64 / 20.0;
            let g = GeometryConfig::symmetric(alpha).unwrap();
            let d = diffraction_integrals(&g, 0.0, 1e-12).unwrap();
            assert!((d.i0.re - i0_on_axis(alpha)).abs() < 1e-10, "alpha {alpha}");
        }
        let far = diffraction_integrals(&g, 50.0, 1e-10).unwrap();
        assert!(far.i0.norm() < 0.02);
        assert!(diffraction_integrals(&g, -1.0, 1e-10).is_err());
    }

    #[test]
    fn plane_wave_energy_density_routes() {
        for alpha in [0.2, 0.8, PI / 3.0, FRAC_PI_2] {
            let g = GeometryConfig::with_focal_length(alpha, alpha, 1.3).unwrap();
            let m = IlluminationMode::with_amplitude(IlluminationKind::PlaneWave, 0.9).unwrap();
            let quad = solver().focal_energy_density(&m, &g).unwrap();
            let closed = focal_energy_density_plane_wave(&g, 0.9);
            assert!((quad - closed).abs() < 1e-9 * closed);
        }
    }

    #[test]
    fn dipole_x_minimal_area() {
        let g = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
        let a = solver().effective_area(&IlluminationMode::dipole_x(), &g).unwrap();
        assert!((a - SIGMA0 / 2.0).abs() < 1e-9 * SIGMA0);
        assert!((a - 3.0 / (4.0 * PI)).abs() < 1e-9);
        let a = solver().effective_area(&IlluminationMode::plane_wave(), &g).unwrap();
        assert!((a - SIGMA0 * 75.0 / 128.0).abs() < 1e-6);
    }

    #[test]
    fn area_never_below_half_sigma0() {
        let s = solver();
        for kind in IlluminationKind::ALL {
            for i in 1..=12 {
                let g = GeometryConfig::symmetric(FRAC_PI_2 * i as f64 / 12.0).unwrap();
                let a = s.effective_area(&IlluminationMode::new(kind), &g).unwrap();
                assert!(a >= SIGMA0 / 2.0 * (1.0 - 1e-12), "{kind:?} {i}");
            }
        }
    }

    #[test]
    fn profile_matches_direct_debye_quadrature() {
        let g = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
        let m = IlluminationMode::plane_wave();
        let s = solver();
        let (e0, h0) = s.focal_fields(&m, &g, [0.0; 3]).unwrap();
        let sz0 = 0.5 * e0.re_conj_cross(&h0)[2];
        for x in [0.0, 0.3, 0.55, 0.8, -0.8, 1.4] {
            let sample = focal_plane_profile(&g, &m, x, 1e-12).unwrap();
            let (e, h) = s.focal_fields(&m, &g, [x, 0.0, 0.0]).unwrap();
            for i in 0..3 {
                assert!((e.0[i] - sample.e.0[i]).norm() < 1e-8, "x={x} comp {i}");
            }
            let sz = 0.5 * e.re_conj_cross(&h)[2];
            assert!((sz / sz0 - sample.s_z).abs() < 1e-8, "x={x}");
            assert!((e.norm_sqr() / e0.norm_sqr() - sample.w_el).abs() < 1e-8);
        }
    }

    #[test]
    fn profile_normalization_and_sign_change() {
        let g = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
        let m = IlluminationMode::plane_wave();
        let at0 = focal_plane_profile(&g, &m, 0.0, 1e-12).unwrap();
        assert!((at0.s_z - 1.0).abs() < 1e-10 && (at0.w_el - 1.0).abs() < 1e-10);
        let xs: Vec<f64> = (1..200).map(|i| i as f64 * 0.01).collect();
        let samples: Vec<_> = xs.iter().map(|&x| focal_plane_profile(&g, &m, x, 1e-10).unwrap()).collect();
        assert!(samples.iter().any(|s| s.s_z < 0.0));
        assert!(samples.iter().all(|s| s.w_el >= 0.0));
        assert!(focal_plane_profile(&g, &IlluminationMode::dipole_x(), 0.1, 1e-10).is_err());
        assert!(focal_plane_profile(&g, &m, f64::NAN, 1e-10).is_err());
    }
}
