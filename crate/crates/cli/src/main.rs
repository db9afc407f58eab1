use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dipole_focus_cli::config::{parse_config_file, RunConfig};
use dipole_focus_cli::{run, RunError};

/// Tables for focused light on a point dipole, and a verification run.
#[derive(Parser, Debug)]
#[command(name = "dipole-focus", version)]
struct Cli {
    /// k0-curve, t-map, spectrum, focal-profile, mode-content or verify.
    #[arg(long)]
    command: Option<String>,
    /// Illumination: pw, px, pz or pm.
    #[arg(long)]
    mode: Option<String>,
    /// Entrance half-angle: radians, `0.43pi`, `pi/3` or `sweep(start, stop, n)`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Collection half-angle, same syntax as --alpha.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Detuning in units of the linewidth, value or sweep.
    #[arg(long, allow_hyphen_values = true)]
    detuning: Option<String>,
    /// Focal-plane x positions in wavelengths (focal-profile).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Grid size, N or NxM.
    #[arg(long)]
    grid: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add quadrature-oracle columns.
    #[arg(long)]
    with_oracle: bool,
    /// Evaluate sweeps on one thread.
    #[arg(long)]
    sequential: bool,
    /// Plain-text key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn merged(cli: Cli) -> Result<RunConfig, RunError> {
    let mut pairs: BTreeMap<String, String> = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
                path: path.clone(),
                source,
            })?;
            parse_config_file(&text)?
        }
        None => BTreeMap::new(),
    };
    let flags = [
        ("command", cli.command),
        ("mode", cli.mode),
        ("alpha", cli.alpha),
        ("beta", cli.beta),
        ("detuning", cli.detuning),
        ("x", cli.x),
        ("grid", cli.grid),
        ("tol", cli.tol),
        ("format", cli.format),
        ("out", cli.out.map(|p| p.display().to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            pairs.insert(k.to_string(), v);
        }
    }
    if cli.with_oracle {
        pairs.insert("with-oracle".into(), "true".into());
    }
    if cli.sequential {
        pairs.insert("sequential".into(), "true".into());
    }
    RunConfig::from_pairs(&pairs)
}

fn main_inner() -> Result<i32, RunError> {
    let cfg = merged(Cli::parse())?;
    let outcome = run(&cfg)?;
    let text = outcome.render(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    if outcome.failed {
        eprintln!("verification failed");
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("dipole-focus: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
