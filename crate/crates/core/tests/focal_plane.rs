use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_relative_eq;
use dipole_focus::illumination::{
    aperture_power_plane_wave, focal_plane_flux, focal_plane_tail, FocalSolver, TailRegime, FOCAL_PLANE_REL_TOL,
};
use dipole_focus::units::{BASSETT_LIMIT, SIGMA0, WAVENUMBER};
use dipole_focus::{Execution, GeometryConfig, IlluminationKind, IlluminationMode};

#[test]
fn hemisphere_flux_and_tail() {
    let g = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
    let f = focal_plane_flux(&g, 200.0, FOCAL_PLANE_REL_TOL, Execution::Parallel).unwrap();
    assert_eq!(f.tail_regime, TailRegime::Hemisphere);
    let exact = 1.0 / (2.0 * PI * PI);
    // truncation alone misses ~4e-4; the asymptotic tail recovers it
    assert!((f.truncated - exact).abs() / exact > 1e-4);
    assert_relative_eq!(f.radial_integral(), exact, max_relative = 1e-6);
    assert_relative_eq!(f.tail, 1.0 / (WAVENUMBER.powi(3) * 200.0), max_relative = 1e-12);
    // the tail estimate from halving the cutoff agrees with the analytic one
    assert_relative_eq!(f.tail_extrapolated(), f.tail, max_relative = 2e-3);
    let solver = FocalSolver::default();
    let direct = solver.effective_area(&IlluminationMode::plane_wave(), &g).unwrap();
    assert_relative_eq!(f.effective_area(FRAC_PI_2), direct, max_relative = 1e-4);
    assert_relative_eq!(direct, SIGMA0 * 75.0 / 128.0, max_relative = 1e-9);
}

#[test]
fn rim_regime_cone() {
    let alpha = 1.0;
    let g = GeometryConfig::symmetric(alpha).unwrap();
    let f = focal_plane_flux(&g, 100.0, FOCAL_PLANE_REL_TOL, Execution::Parallel).unwrap();
    assert_eq!(f.tail_regime, TailRegime::Rim);
    let exact = alpha.sin().powi(2) / (2.0 * PI * PI);
    assert_relative_eq!(f.radial_integral(), exact, max_relative = 1e-5);
    assert!(focal_plane_tail(1.5, 100.0).is_none());
}

#[test]
fn power_routes_agree() {
    let solver = FocalSolver::default();
    for a in [0.2, 0.8, 1.3, FRAC_PI_2] {
        let g = GeometryConfig::symmetric(a).unwrap();
        let sphere = solver.incident_power(&IlluminationMode::plane_wave(), &g).unwrap();
        assert_relative_eq!(sphere, aperture_power_plane_wave(&g, 1.0), max_relative = 1e-10);
    }
}

#[test]
fn energy_concentration_never_exceeds_the_limit() {
    let solver = FocalSolver::default();
    for i in 1..=50 {
        let a = FRAC_PI_2 * i as f64 / 50.0;
        let g = GeometryConfig::symmetric(a).unwrap();
        for k in IlluminationKind::ALL {
            let c = solver.energy_concentration(&IlluminationMode::new(k), &g).unwrap();
            assert!(c.total_over_limit() <= 1.0 + 1e-12, "{k:?} at {a}");
            assert!(c.electric_over_limit() <= 1.0 + 1e-12, "{k:?} at {a}");
        }
    }
    let hemi = GeometryConfig::symmetric(FRAC_PI_2).unwrap();
    let px = solver.energy_concentration(&IlluminationMode::dipole_x(), &hemi).unwrap();
    let pz = solver.energy_concentration(&IlluminationMode::dipole_z(), &hemi).unwrap();
    // electric energy saturates the limit; the sum does not
    assert_relative_eq!(px.electric_over_limit(), 1.0, max_relative = 1e-10);
    assert_relative_eq!(pz.electric_over_limit(), 1.0, max_relative = 1e-10);
    assert_relative_eq!(px.total_over_limit(), 25.0 / 32.0, max_relative = 1e-10);
    assert_relative_eq!(pz.total_over_limit(), 0.5, max_relative = 1e-10);
    assert_relative_eq!(2.0 * px.w_el / px.incident_power, BASSETT_LIMIT, max_relative = 1e-10);
}
