use std::io::Write;
use std::path::Path;

use sedosc::sampler::{draw_phase_space, energy_law_test, estimate, estimate_chunked, Estimand, EnergyLawReport};
use sedosc::table::{format_sig12, EstimateTable};

use super::simulate::render;
use crate::error::{CliError, Result};
use crate::output::{emit, format, write_file, Format};
use crate::settings::Settings;
use crate::{Status, Z_FAIL};

pub const DEFAULT_N: usize = 1_000_000;
pub const DEFAULT_CHUNKS: usize = 16;

pub struct SampleRun {
    pub table: EstimateTable,
    pub law: Option<EnergyLawReport>,
    pub echo: Vec<(String, String)>,
}

/// Draws and estimates. The full sample is kept only when it is written out
/// or the energy law is tested; both paths give identical tables.
pub fn execute(settings: &Settings) -> Result<SampleRun> {
    let (params, state) = settings.physics(0.0)?;
    let dims: usize = settings.get_or("dims", 1)?;
    let n: usize = settings.get_or("n", DEFAULT_N)?;
    let seed: u64 = settings.get_or("seed", 0)?;
    let chunks: usize = settings.get_or("chunks", DEFAULT_CHUNKS)?;
    let law: bool = settings.get_or("law", false)?;
    if n == 0 || chunks == 0 {
        return Err(CliError::usage("n and chunks must be at least 1"));
    }
    if dims != 1 && dims != 3 {
        return Err(CliError::usage(format!("dims must be 1 or 3, got {dims}")));
    }
    let estimands = Estimand::standard_set(dims);
    let (table, law) = if law || settings.raw("samples").is_some() {
        let sample = draw_phase_space(n, dims, &params, &state, seed)?;
        if let Some(path) = settings.raw("samples") {
            let mut buf = Vec::new();
            sample.write_csv(&mut buf)?;
            write_file(Path::new(path), &buf)?;
        }
        let report = if law { Some(energy_law_test(&sample, &params, &state)?) } else { None };
        (estimate(&sample, &estimands)?, report)
    } else {
        (estimate_chunked(n, dims, &params, &state, seed, &estimands, chunks)?, None)
    };
    let mut echo = vec![
        ("mass".to_string(), params.mass.to_string()),
        ("omega0".to_string(), params.omega0.to_string()),
        ("hbar".to_string(), params.hbar.to_string()),
        ("kb".to_string(), params.kb.to_string()),
        ("temperature".to_string(), state.temperature.to_string()),
        ("dims".to_string(), dims.to_string()),
        ("n".to_string(), n.to_string()),
        ("seed".to_string(), seed.to_string()),
    ];
    if let Some(r) = &law {
        echo.push(("energy_law".into(), format!("{:?}", r.law)));
        echo.push(("energy_law_statistic".into(), format_sig12(r.statistic)));
        echo.push(("energy_law_p_value".into(), format_sig12(r.p_value)));
        echo.push(("energy_law_passed".into(), r.passed.to_string()));
    }
    Ok(SampleRun { table, law, echo })
}

pub fn run(settings: &Settings, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Status> {
    let run = execute(settings)?;
    let text = render(&run.table, format(settings, Format::Text)?, &run.echo, "sample")?;
    emit(settings, &text, stdout)?;
    let mut status = Status::Success;
    let worst = run.table.max_abs_z();
    if worst > Z_FAIL {
        writeln!(stderr, "statistical failure: max |z| = {worst:.3} exceeds {Z_FAIL}")?;
        status = Status::StatisticalFailure;
    }
    if let Some(r) = run.law.filter(|r| !r.passed) {
        writeln!(stderr, "statistical failure: energy law {:?} rejected (p = {})", r.law, format_sig12(r.p_value))?;
        status = Status::StatisticalFailure;
    }
    Ok(status)
}
