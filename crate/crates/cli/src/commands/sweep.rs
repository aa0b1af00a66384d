use std::io::Write;

use sedosc::ThermalState;

use super::Query;
use crate::error::{CliError, Result};
use crate::output::{emit, format, Format, ValueTable};
use crate::settings::Settings;
use crate::Status;

/// Strictly increasing temperature grid from the `from`, `to`, `points` and
/// `spacing` keys.
pub fn grid(settings: &Settings) -> Result<Vec<f64>> {
    let from = settings.float_or("from", 0.0)?;
    let to = settings.float_or("to", 10.0)?;
    let points: usize = settings.get_or("points", 11)?;
    let spacing = settings.raw("spacing").unwrap_or("lin");
    if points < 2 {
        return Err(CliError::usage(format!("points must be at least 2, got {points}")));
    }
    if !(from >= 0.0 && to > from) {
        return Err(CliError::usage(format!("need 0 <= from < to, got from={from}, to={to}")));
    }
    let last = (points - 1) as f64;
    let mut g: Vec<f64> = match spacing {
        "lin" => (0..points).map(|i| from + (to - from) * i as f64 / last).collect(),
        "log" => {
            if from <= 0.0 {
                return Err(CliError::usage("log spacing requires from > 0"));
            }
            let (a, b) = (from.ln(), to.ln());
            (0..points).map(|i| (a + (b - a) * i as f64 / last).exp()).collect()
        }
        other => return Err(CliError::usage(format!("unknown spacing `{other}` (expected lin or log)"))),
    };
    // Pin the endpoints against rounding in exp/ln.
    g[0] = from;
    g[points - 1] = to;
    Ok(g)
}

pub fn table(settings: &Settings) -> Result<ValueTable> {
    let (params, _) = settings.physics(0.0)?;
    let query = Query::from_settings(settings, &params)?;
    let paired = query.quantity.has_discrepancy();
    let mut t = if paired {
        ValueTable::new(&["T", "value", "counterpart", "difference"])
    } else {
        ValueTable::new(&["T", "value"])
    };
    for temp in grid(settings)? {
        let state = ThermalState::new(temp)?;
        let value = query.evaluate(&params, &state)?;
        if paired {
            let other = query.with_side(query.side.other()).evaluate(&params, &state)?;
            // Always classical minus quantum.
            let diff = if query.side == sedosc::TheorySide::Classical { value - other } else { other - value };
            t.push(vec![temp.into(), value.into(), other.into(), diff.into()]);
        } else {
            t.push(vec![temp.into(), value.into()]);
        }
    }
    Ok(t)
}

pub fn run(settings: &Settings, stdout: &mut dyn Write) -> Result<Status> {
    let t = table(settings)?;
    let text = t.render(format(settings, Format::Csv)?, "sweep", &settings.echo())?;
    emit(settings, &text, stdout)?;
    Ok(Status::Success)
}
