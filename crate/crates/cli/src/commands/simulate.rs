use std::io::Write;
use std::path::Path;

use sedosc::langevin::{default_burn_in, equilibrium_report, run as run_sim, Integrator, SimConfig};
use sedosc::noise::NoiseMode;
use sedosc::table::EstimateTable;

use crate::error::{CliError, Result};
use crate::output::{emit, format, write_file, Format};
use crate::settings::Settings;
use crate::{Status, Z_FAIL};

pub const DEFAULT_TAU: f64 = 1e-3;
pub const DEFAULT_DT: f64 = 0.05;
pub const DEFAULT_STEPS: u64 = 4_000_000;

/// Simulation configuration from settings; validated before any stepping.
pub fn config(settings: &Settings) -> Result<SimConfig> {
    let (params, state) = settings.physics(DEFAULT_TAU)?;
    let dt = settings.float_or("dt", DEFAULT_DT)?;
    let mut cfg = SimConfig::new(params, state.temperature, dt, settings.get_or("steps", DEFAULT_STEPS)?, settings.get_or("seed", 0)?);
    cfg.burn_in_steps = settings.get_or("burn_in", default_burn_in(&params, dt))?;
    cfg.dims = settings.get_or("dims", 1)?;
    let text = |e: sedosc::Error| e.to_string();
    cfg.integrator = settings.get_or::<Integrator>("integrator", Integrator::ExactGaussian).map_err(|e| CliError::usage(e.to_string()))?;
    cfg.noise_mode = match settings.raw("noise") {
        Some(v) => v.parse::<NoiseMode>().map_err(|e| CliError::usage(text(e)))?,
        None => NoiseMode::White,
    };
    cfg.stride = settings.get("stride")?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn render(table: &EstimateTable, format: Format, echo: &[(String, String)], kind: &str) -> Result<String> {
    Ok(match format {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json(kind, echo)? + "\n",
        Format::Text => {
            let mut s: String = echo.iter().map(|(k, v)| format!("# {k}={v}\n")).collect();
            s.push_str(&table.to_text());
            s
        }
    })
}

pub fn run(settings: &Settings, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Status> {
    let cfg = config(settings)?;
    let traj = run_sim(&cfg)?;
    if let Some(path) = settings.raw("trajectory") {
        let mut buf = Vec::new();
        if Path::new(path).extension().is_some_and(|e| e == "bin") {
            traj.write_binary(&mut buf)?;
        } else {
            traj.write_csv(&mut buf)?;
        }
        write_file(Path::new(path), &buf)?;
    }
    let table = equilibrium_report(&traj, &cfg.params, &cfg.thermal_state()?)?;
    let text = render(&table, format(settings, Format::Text)?, &cfg.echo(), "simulate")?;
    emit(settings, &text, stdout)?;
    let worst = table.max_abs_z();
    if worst > Z_FAIL {
        writeln!(stderr, "statistical failure: max |z| = {worst:.3} exceeds {Z_FAIL}")?;
        return Ok(Status::StatisticalFailure);
    }
    Ok(Status::Success)
}
