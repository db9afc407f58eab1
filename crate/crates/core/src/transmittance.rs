//! Scattering ratios and the transmittance/reflectance of a focused wave past
//! a resonant dipole.
//!
//! The far-field oracle superposes the outgoing incident wave and the dipole
//! field on a large sphere and integrates the flux. Fractions are normalized by
//! the no-dipole flux collected over `θ <= γ = min(α, β)`, the bookkeeping under
//! which the printed `T(α, β)` closes (it gives `T → 1/25` for `β → 0`).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::illumination::{i0_on_axis, outgoing_far_field, FocalSolver, GeometryConfig, IlluminationKind, IlluminationMode};
use crate::multipole::SAMPLE_KR;
use crate::numerics::SpherePoint;
use crate::parallel::{self, Execution};
use crate::scattering::{lorentzian_weight, scattered_far_field, OscillatorParams};
use crate::units::SIGMA0;

/// Slack allowed on `[0, 1]` and `[0, 2]` range checks.
const RANGE_SLACK: f64 = 1e-10;

/// `𝒦₀ = σ0 / 𝒜` for one illumination and half-angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringRatio {
    pub k0: f64,
    pub kind: IlluminationKind,
    pub alpha: f64,
}

/// Transmitted and reflected fractions.
///
/// `r` is `None` when only a closed form was evaluated away from the full
/// hemisphere, where the reflected fraction has no printed expression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmittanceResult {
    pub t: f64,
    pub r: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub detuning_over_gamma: f64,
}

fn check_angle(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v <= FRAC_PI_2 + 1e-15 {
        Ok(())
    } else {
        Err(domain(format!("{name} = {v} outside (0, π/2]")))
    }
}

/// `1 − cos α` without cancellation.
fn one_minus_cos(alpha: f64) -> f64 {
    let h = (0.5 * alpha).sin();
    2.0 * h * h
}

/// Closed-form scattering ratio.
pub fn k0_closed_form(kind: IlluminationKind, alpha: f64) -> Result<ScatteringRatio> {
    check_angle("alpha", alpha)?;
    let c = alpha.cos();
    let u = one_minus_cos(alpha);
    let k0 = match kind {
        IlluminationKind::PlaneWave => {
            let i0 = i0_on_axis(alpha);
            1.5 * i0 * i0 / (alpha.sin() * alpha.sin())
        }
        // (1/4)(7 − 3c − 3c² − c³)
        IlluminationKind::DipolePlusMagnetic => 0.25 * u * (4.0 + 2.0 * (1.0 + c) + (1.0 + c) * (1.0 + c)),
        // (1/2)(4 − 3c − c³)
        IlluminationKind::DipoleX => 0.5 * u * (4.0 + c + c * c),
        // 2 − 3c + c³
        IlluminationKind::DipoleZ => u * u * (2.0 + c),
    };
    Ok(ScatteringRatio { k0, kind, alpha })
}

/// `𝒦₀ = 2c W_el(O) σ0 / P_inc`, both by quadrature.
pub fn k0_oracle(solver: &FocalSolver, mode: &IlluminationMode, geom: &GeometryConfig) -> Result<ScatteringRatio> {
    let w = solver.focal_energy_density(mode, geom)?;
    let p = solver.incident_power(mode, geom)?;
    let k0 = 2.0 * w * SIGMA0 / p;
    if !(-RANGE_SLACK..=2.0 + RANGE_SLACK).contains(&k0) {
        return Err(Error::Accuracy {
            estimate: k0,
            gap: (k0 - 2.0).max(-k0),
            context: format!("scattering ratio outside [0, 2] for {:?}", mode.kind),
        });
    }
    Ok(ScatteringRatio {
        k0,
        kind: mode.kind,
        alpha: geom.alpha(),
    })
}

/// `X(β) = (1/8)(4 − 3 cos β − cos³ β)`.
pub fn x_factor(beta: f64) -> f64 {
    let c = beta.cos();
    0.125 * one_minus_cos(beta) * (4.0 + c + c * c)
}

/// Plane-wave transmittance
/// `T = 1 + L(Δ) (3 I0(α) / 2 sin²γ) [X(β) I0(α) − I0(γ)]`.
pub fn transmittance_closed_form(alpha: f64, beta: f64, detuning_over_gamma: f64) -> Result<TransmittanceResult> {
    check_angle("alpha", alpha)?;
    check_angle("beta", beta)?;
    if detuning_over_gamma.is_nan() {
        return Err(domain("detuning is NaN"));
    }
    let l = lorentzian_weight(&OscillatorParams::new(1.0, detuning_over_gamma)?);
    let gamma = alpha.min(beta);
    let s = gamma.sin();
    let ia = i0_on_axis(alpha);
    let t = 1.0 + l * 1.5 * ia / (s * s) * (x_factor(beta) * ia - i0_on_axis(gamma));
    let hemisphere = (alpha - FRAC_PI_2).abs() < 1e-12 && (beta - FRAC_PI_2).abs() < 1e-12;
    Ok(TransmittanceResult {
        t,
        r: hemisphere.then_some(1.0 - t),
        alpha,
        beta,
        detuning_over_gamma,
    })
}

/// Transmittance `1 − L(Δ)` of a hemispherical x-dipole wave collected over the
/// forward hemisphere; the whole wave is dipolar, so only the Lorentzian remains.
pub fn dipole_wave_transmittance(detuning_over_gamma: f64) -> Result<f64> {
    Ok(1.0 - lorentzian_weight(&OscillatorParams::new(1.0, detuning_over_gamma)?))
}

/// Far-field interference oracle for any illumination.
///
/// Forward flux of `E_out + E_sca` over `θ <= β`, backward flux of `E_sca`
/// over the cap of half-angle `β` around `−z`, both divided by the flux of
/// `E_out` alone over `θ <= γ`.
pub fn transmittance_oracle(
    solver: &FocalSolver,
    mode: &IlluminationMode,
    geom: &GeometryConfig,
    p: &OscillatorParams,
) -> Result<TransmittanceResult> {
    let sphere = solver.sphere();
    let e0 = solver.focal_field_at_origin(mode, geom)?;
    let (alpha, beta) = (geom.alpha(), geom.beta());
    let gamma = geom.gamma();
    // fields scaled by kr so that |·|² is the intensity per solid angle up to k²
    let incident = |pt: &SpherePoint| outgoing_far_field(mode, geom, pt, SAMPLE_KR).map(|e| e * SAMPLE_KR);
    let scattered = |pt: &SpherePoint| scattered_far_field(p, e0, pt.r_hat(), SAMPLE_KR).map(|e| e * SAMPLE_KR);
    let failure = std::cell::RefCell::new(None);
    let guard = |r: Result<f64>| {
        r.unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            0.0
        })
    };
    let total = |pt: &SpherePoint| guard((|| Ok((incident(pt)? + scattered(pt)?).norm_sqr()))());
    let only_sca = |pt: &SpherePoint| guard(scattered(pt).map(|e| e.norm_sqr()));
    let only_inc = |pt: &SpherePoint| guard(incident(pt).map(|e| e.norm_sqr()));

    let reference = sphere.zone(only_inc, 0.0, gamma)?;
    let mut forward = sphere.zone(total, 0.0, gamma)?;
    if beta > alpha {
        forward += sphere.zone(only_sca, alpha, beta)?;
    }
    let backward = sphere.backward_cap(only_sca, beta)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if reference <= 0.0 {
        return Err(domain("no incident flux inside the collection cone"));
    }
    let (t, r) = (forward / reference, backward / reference);
    Ok(TransmittanceResult {
        t,
        r: Some(r),
        alpha,
        beta,
        detuning_over_gamma: p.detuning_over_gamma(),
    })
}

/// One row of the reflectance check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectanceRow {
    pub alpha: f64,
    pub reflected: f64,
    pub half_k0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectanceReport {
    pub rows: Vec<ReflectanceRow>,
    pub max_reflected: f64,
    pub argmax_alpha: f64,
    /// Largest `|reflected − 𝒦₀/2|` over the grid.
    pub worst_gap: f64,
}

/// Backward-hemisphere fraction of a focused plane wave on resonance, compared
/// with `𝒦₀(α)/2` on each grid point.
pub fn reflectance_bound_check(solver: &FocalSolver, alphas: &[f64], exec: Execution) -> Result<ReflectanceReport> {
    if alphas.is_empty() {
        return Err(domain("empty alpha grid"));
    }
    let rows = parallel::try_map(exec, alphas, |&alpha| {
        let geom = GeometryConfig::new(alpha, FRAC_PI_2)?;
        let res = transmittance_oracle(solver, &IlluminationMode::plane_wave(), &geom, &OscillatorParams::resonant())?;
        Ok(ReflectanceRow {
            alpha,
            reflected: res.r.unwrap_or(0.0),
            half_k0: 0.5 * k0_closed_form(IlluminationKind::PlaneWave, alpha)?.k0,
        })
    })?;
    let best = rows
        .iter()
        .max_by(|a, b| a.reflected.total_cmp(&b.reflected))
        .copied()
        .unwrap_or(rows[0]);
    let worst_gap = rows.iter().map(|r| (r.reflected - r.half_k0).abs()).fold(0.0, f64::max);
    Ok(ReflectanceReport {
        rows,
        max_reflected: best.reflected,
        argmax_alpha: best.alpha,
        worst_gap,
    })
}

/// Location and value of the minimum of `T(α, α, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowMinimum {
    pub alpha: f64,
    pub t: f64,
}

/// Golden-section search for the minimum of the closed form on `β = α`.
pub fn shadow_boundary_minimum(tol: f64) -> Result<ShadowMinimum> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain(format!("tolerance {tol} must be positive")));
    }
    let f = |a: f64| transmittance_closed_form(a, a, 0.0).map(|r| r.t);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (crate::units::MIN_HALF_ANGLE, FRAC_PI_2);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2)?;
        }
    }
    let alpha = 0.5 * (a + b);
    Ok(ShadowMinimum { alpha, t: f(alpha)? })
}

/// Closed-form `T` on the Cartesian product `alphas × betas`, row-major in `α`.
pub fn transmittance_map(alphas: &[f64], betas: &[f64], detuning_over_gamma: f64, exec: Execution) -> Result<Vec<TransmittanceResult>> {
    let pairs: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| betas.iter().map(move |&b| (a, b))).collect();
    parallel::try_map(exec, &pairs, |&(a, b)| transmittance_closed_form(a, b, detuning_over_gamma))
}

/// Oracle `T`, `R` on the same grid.
pub fn transmittance_oracle_map(
    solver: &FocalSolver,
    alphas: &[f64],
    betas: &[f64],
    p: &OscillatorParams,
    exec: Execution,
) -> Result<Vec<TransmittanceResult>> {
    let pairs: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| betas.iter().map(move |&b| (a, b))).collect();
    let mode = IlluminationMode::plane_wave();
    parallel::try_map(exec, &pairs, |&(a, b)| {
        transmittance_oracle(solver, &mode, &GeometryConfig::new(a, b)?, p)
    })
}
