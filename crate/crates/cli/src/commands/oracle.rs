use std::io::Write;

use sedosc::table::format_sig12;

use super::Query;
use crate::error::Result;
use crate::output::{emit, format, Format, ValueTable};
use crate::settings::Settings;
use crate::Status;

pub fn run(settings: &Settings, stdout: &mut dyn Write) -> Result<Status> {
    let (params, state) = settings.physics(0.0)?;
    let query = Query::from_settings(settings, &params)?;
    let value = query.evaluate(&params, &state)?;
    let text = match format(settings, Format::Text)? {
        Format::Text => format!("{}\n", format_sig12(value)),
        f => {
            let mut t = ValueTable::new(&["T", "value"]);
            t.push(vec![state.temperature.into(), value.into()]);
            let meta = vec![
                ("quantity".to_string(), settings.raw("quantity").unwrap_or_default().to_string()),
                ("side".to_string(), query.side.to_string()),
                ("dims".to_string(), query.dims.to_string()),
            ];
            t.render(f, "oracle", &meta)?
        }
    };
    emit(settings, &text, stdout)?;
    Ok(Status::Success)
}
