//! Table producers for each sub-command.

use std::f64::consts::{FRAC_PI_2, PI};

use dipole_focus::illumination::{focal_plane_profile, FocalSolver};
use dipole_focus::multipole::dipole_wave_component;
use dipole_focus::parallel::{self, Execution};
use dipole_focus::transmittance::{
    dipole_wave_transmittance, k0_closed_form, k0_oracle, shadow_boundary_minimum, transmittance_closed_form,
    transmittance_oracle,
};
use dipole_focus::{GeometryConfig, IlluminationKind, IlluminationMode, OscillatorParams};

use crate::config::{Axis, RunConfig};
use crate::table::{Cell, Table};
use crate::RunError;

/// Bisection tolerance for `𝒦₀ = 1` crossings.
const CROSSING_TOL: f64 = 1e-12;
const GOLDEN_TOL: f64 = 1e-6;

const K0_ORDER: [IlluminationKind; 4] = [
    IlluminationKind::PlaneWave,
    IlluminationKind::DipolePlusMagnetic,
    IlluminationKind::DipoleX,
    IlluminationKind::DipoleZ,
];

pub(crate) fn execution(cfg: &RunConfig) -> Execution {
    if cfg.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

pub(crate) fn solver(cfg: &RunConfig) -> Result<FocalSolver, RunError> {
    Ok(FocalSolver::with_tolerance(cfg.tol)?)
}

fn single(name: &str, axis: Option<Axis>, default: f64) -> Result<f64, RunError> {
    match axis {
        None => Ok(default),
        Some(a) => a
            .single()
            .ok_or_else(|| RunError::Config(format!("{name} must be a single value for this command"))),
    }
}

fn sweep_or(axis: Option<Axis>, start: f64, stop: f64, n: usize) -> Vec<f64> {
    axis.unwrap_or(Axis::Sweep { start, stop, n }).values()
}

fn k0_row(solver: &FocalSolver, alpha: f64, oracle: bool) -> dipole_focus::Result<Vec<f64>> {
    let mut row = vec![alpha];
    for k in K0_ORDER {
        row.push(k0_closed_form(k, alpha)?.k0);
    }
    if oracle {
        let g = GeometryConfig::symmetric(alpha)?;
        for k in K0_ORDER {
            row.push(k0_oracle(solver, &IlluminationMode::new(k), &g)?.k0);
        }
    }
    Ok(row)
}

fn k0_crossing(kind: IlluminationKind, mut lo: f64, mut hi: f64) -> Result<f64, RunError> {
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        if k0_closed_form(kind, mid)?.k0 < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `𝒦₀(α)` for all four illuminations, with one marker row per `𝒦₀ = 1` crossing.
pub fn k0_curve(cfg: &RunConfig) -> Result<Table, RunError> {
    let alphas = sweep_or(cfg.alpha, 0.01, FRAC_PI_2, 90);
    let mut columns: Vec<String> = vec!["alpha".into()];
    columns.extend(K0_ORDER.iter().map(|k| format!("K0_{}", k.label())));
    if cfg.with_oracle {
        columns.extend(K0_ORDER.iter().map(|k| format!("K0_oracle_{}", k.label())));
    }
    columns.push("marker".into());
    let s = solver(cfg)?;
    let rows = parallel::try_map(execution(cfg), &alphas, |&a| k0_row(&s, a, cfg.with_oracle))?;

    let mut markers: Vec<(f64, String)> = Vec::new();
    for (j, kind) in K0_ORDER.iter().enumerate() {
        for w in rows.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a[1 + j] < 1.0 && b[1 + j] >= 1.0 {
                markers.push((k0_crossing(*kind, a[0], b[0])?, format!("K0_{}=1", kind.label())));
            }
        }
    }
    let mut all: Vec<(Vec<f64>, String)> = rows.into_iter().map(|r| (r, String::new())).collect();
    for (alpha, label) in &markers {
        all.push((k0_row(&s, *alpha, cfg.with_oracle)?, label.clone()));
    }
    all.sort_by(|x, y| x.0[0].total_cmp(&y.0[0]).then(x.1.is_empty().cmp(&y.1.is_empty()).reverse()));

    let mut t = Table::new(columns);
    for (row, label) in all {
        let mut cells: Vec<Cell> = row.into_iter().map(Cell::num).collect();
        cells.push(Cell::text(label));
        t.push(cells);
    }
    for (alpha, label) in markers {
        t.note(format!("crossing_{}", label.trim_end_matches("=1")), Cell::num(alpha));
    }
    Ok(t)
}

/// Plane-wave `T(α, β)` on a grid; the footer holds the shadow-boundary minimum.
pub fn t_map(cfg: &RunConfig) -> Result<Table, RunError> {
    let (na, nb) = cfg.grid.unwrap_or((50, 50));
    let alphas = sweep_or(cfg.alpha, 0.01 * PI, FRAC_PI_2, na);
    let betas = sweep_or(cfg.beta, 0.01 * PI, FRAC_PI_2, nb);
    if alphas.len() < 2 || betas.len() < 2 {
        return Err(RunError::Config(format!(
            "degenerate {}x{} transmittance grid",
            alphas.len(),
            betas.len()
        )));
    }
    let detuning = single("detuning", cfg.detuning, 0.0)?;
    let p = OscillatorParams::detuned(detuning)?;
    let s = solver(cfg)?;
    let pairs: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| betas.iter().map(move |&b| (a, b))).collect();
    let rows = parallel::try_map(execution(cfg), &pairs, |&(a, b)| {
        let mut row = vec![a, b, transmittance_closed_form(a, b, detuning)?.t];
        if cfg.with_oracle {
            let o = transmittance_oracle(&s, &IlluminationMode::plane_wave(), &GeometryConfig::new(a, b)?, &p)?;
            row.push(o.t);
            row.push(o.r.unwrap_or(f64::NAN));
        }
        Ok(row)
    })?;
    let mut columns = vec!["alpha", "beta", "T"];
    if cfg.with_oracle {
        columns.extend(["T_oracle", "R_oracle"]);
    }
    let mut t = Table::new(columns);
    for r in &rows {
        t.push_nums(r);
    }
    let best = rows.iter().min_by(|x, y| x[2].total_cmp(&y[2])).expect("non-empty grid");
    t.note("grid_min_alpha", Cell::num(best[0]));
    t.note("grid_min_beta", Cell::num(best[1]));
    t.note("grid_min_T", Cell::num(best[2]));
    let m = shadow_boundary_minimum(GOLDEN_TOL)?;
    t.note("shadow_min_alpha", Cell::num(m.alpha));
    t.note("shadow_min_alpha_over_pi", Cell::num(m.alpha / PI));
    t.note("shadow_min_T", Cell::num(m.t));
    Ok(t)
}

/// `T(Δ)` for a focused plane wave and a hemispherical x-dipole wave.
pub fn spectrum(cfg: &RunConfig) -> Result<Table, RunError> {
    let detunings = sweep_or(cfg.detuning, -5.0, 5.0, 201);
    let alpha = single("alpha", cfg.alpha, PI / 3.0)?;
    let beta = single("beta", cfg.beta, alpha)?;
    let pw_geom = GeometryConfig::new(alpha, beta)?;
    let px_geom = GeometryConfig::symmetric(FRAC_PI_2)?;
    let s = solver(cfg)?;
    let rows = parallel::try_map(execution(cfg), &detunings, |&d| {
        let mut row = vec![d, transmittance_closed_form(alpha, beta, d)?.t, dipole_wave_transmittance(d)?];
        if cfg.with_oracle {
            let p = OscillatorParams::detuned(d)?;
            let pw = transmittance_oracle(&s, &IlluminationMode::plane_wave(), &pw_geom, &p)?;
            let px = transmittance_oracle(&s, &IlluminationMode::dipole_x(), &px_geom, &p)?;
            row.extend([pw.t, pw.r.unwrap_or(f64::NAN), px.t]);
        }
        Ok(row)
    })?;
    let mut columns = vec!["detuning_over_gamma", "T_pw", "T_px"];
    if cfg.with_oracle {
        columns.extend(["T_pw_oracle", "R_pw_oracle", "T_px_oracle"]);
    }
    let mut t = Table::new(columns);
    for r in &rows {
        t.push_nums(r);
    }
    t.note("pw_alpha", Cell::num(alpha));
    t.note("pw_beta", Cell::num(beta));
    t.note("px_alpha", Cell::num(FRAC_PI_2));
    Ok(t)
}

/// Plane-wave field, `S_z` and `W_el` along the focal-plane x-axis.
pub fn focal_profile(cfg: &RunConfig) -> Result<Table, RunError> {
    if let Some(k) = cfg.mode {
        if k != IlluminationKind::PlaneWave {
            return Err(RunError::Config("focal-profile supports only the plane-wave mode".into()));
        }
    }
    let alpha = single("alpha", cfg.alpha, FRAC_PI_2)?;
    let geom = GeometryConfig::symmetric(alpha)?;
    let xs = sweep_or(cfg.x, 0.0, 2.0, 81);
    let mode = IlluminationMode::plane_wave();
    let samples = parallel::try_map(execution(cfg), &xs, |&x| focal_plane_profile(&geom, &mode, x, cfg.tol))?;
    let mut t = Table::new(["x", "Ex_re", "Ex_im", "Ez_re", "Ez_im", "S_z", "W_el"]);
    for s in &samples {
        let (ex, ez) = (s.e.x(), s.e.z());
        t.push_nums(&[s.position[0], ex.re, ex.im, ez.re, ez.im, s.s_z, s.w_el]);
    }
    let min = samples.iter().min_by(|a, b| a.s_z.total_cmp(&b.s_z)).expect("non-empty");
    t.note("alpha", Cell::num(alpha));
    t.note("min_S_z", Cell::num(min.s_z));
    t.note("min_S_z_x", Cell::num(min.position[0]));
    Ok(t)
}

/// Dipole-wave content and mode coefficient versus `α`.
pub fn mode_content(cfg: &RunConfig) -> Result<Table, RunError> {
    let kinds: Vec<IlluminationKind> = match cfg.mode {
        Some(k) => vec![k],
        None => K0_ORDER.to_vec(),
    };
    let alphas = sweep_or(cfg.alpha, 0.01 * PI, FRAC_PI_2, 50);
    let s = solver(cfg)?;
    let rows = parallel::try_map(execution(cfg), &alphas, |&a| {
        let g = GeometryConfig::symmetric(a)?;
        let mut row = vec![a];
        for k in &kinds {
            let c = dipole_wave_component(&s, &IlluminationMode::new(*k), &g)?;
            row.extend([c.content_fraction, c.coefficient.re, c.coefficient.im]);
        }
        Ok(row)
    })?;
    let mut columns = vec!["alpha".to_string()];
    for k in &kinds {
        let l = k.label();
        columns.extend([format!("eta_{l}"), format!("coef_re_{l}"), format!("coef_im_{l}")]);
    }
    let mut t = Table::new(columns);
    for r in &rows {
        t.push_nums(r);
    }
    Ok(t)
}
