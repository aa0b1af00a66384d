use std::io::Write;

use sedosc::oracles::{energy_mean, l2_mean, Quantity, QuantitySpec};
use sedosc::{TheorySide, ThermalState};

use crate::error::{CliError, Result};
use crate::output::{emit, format, Format, ValueTable};
use crate::settings::Settings;
use crate::Status;

pub const COLUMNS: [&str; 10] = [
    "T",
    "H_classical",
    "H_quantum",
    "H2_classical",
    "H2_quantum",
    "H2_diff",
    "L2_classical",
    "L2_quantum",
    "L2_diff",
    "diff_constant",
];

/// `|a − b| ≤ 10⁻¹² · max(|x|, |y|)` or `≤ 10⁻¹⁴`.
pub fn matches_constant(diff: f64, expected: f64, larger: f64) -> bool {
    (diff - expected).abs() <= (1e-12 * larger.abs()).max(1e-14)
}

fn temperatures(settings: &Settings) -> Result<Vec<f64>> {
    let raw = settings.raw("temps").unwrap_or("0,1,10");
    raw.split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|_| CliError::usage(format!("invalid temperature `{t}` in --temps")))?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::usage(format!("temperatures must be finite and non-negative, got {v}")));
            }
            Ok(v)
        })
        .collect()
}

/// One comparison row per temperature; the final column states whether
/// both difference columns equal their constant values.
pub fn table(settings: &Settings) -> Result<ValueTable> {
    let (params, _) = settings.physics(0.0)?;
    let zp = params.zero_point_energy();
    let (h2_const, l2_const) = (zp * zp, 1.5 * params.hbar * params.hbar);
    let h2 = QuantitySpec::new(Quantity::EnergySecondMoment, 1)?;
    let mut t = ValueTable::new(&COLUMNS);
    for temp in temperatures(settings)? {
        let state = ThermalState::new(temp)?;
        let (h2c, h2q) = (h2.evaluate(TheorySide::Classical, &params, &state)?, h2.evaluate(TheorySide::Quantum, &params, &state)?);
        let (l2c, l2q) = (l2_mean(TheorySide::Classical, &params, &state), l2_mean(TheorySide::Quantum, &params, &state));
        let constant = matches_constant(h2c - h2q, h2_const, h2c) && matches_constant(l2c - l2q, l2_const, l2c);
        t.push(vec![
            temp.into(),
            energy_mean(TheorySide::Classical, &params, &state).into(),
            energy_mean(TheorySide::Quantum, &params, &state).into(),
            h2c.into(),
            h2q.into(),
            (h2c - h2q).into(),
            l2c.into(),
            l2q.into(),
            (l2c - l2q).into(),
            constant.into(),
        ]);
    }
    Ok(t)
}

pub fn run(settings: &Settings, stdout: &mut dyn Write) -> Result<Status> {
    let t = table(settings)?;
    let text = t.render(format(settings, Format::Text)?, "compare", &settings.echo())?;
    emit(settings, &text, stdout)?;
    let all_constant = t.column("diff_constant").unwrap().iter().all(|c| *c == true.into());
    Ok(if all_constant { Status::Success } else { Status::IdentityFailure })
}
