use std::io::Write;

use serde::Serialize;

use sedosc::algebra::{identity_suite, IdentityCheck};

use crate::error::{CliError, Result};
use crate::output::{emit, format, Format};
use crate::settings::Settings;
use crate::Status;

pub const GROUPS: [&str; 4] = ["poisson", "commutator", "dirac", "ladder"];

#[derive(Serialize)]
struct CheckRecord<'a> {
    group: &'a str,
    name: &'a str,
    passed: bool,
    residual: &'a str,
}

#[derive(Serialize)]
struct AlgebraDocument<'a> {
    schema_version: u32,
    kind: &'static str,
    passed: bool,
    checks: Vec<CheckRecord<'a>>,
}

/// Identity checks restricted to the groups named by the `check` key.
pub fn selected_checks(settings: &Settings) -> Result<Vec<IdentityCheck>> {
    let raw = settings.raw("check").unwrap_or("all");
    let groups: Vec<&str> = if raw == "all" { GROUPS.to_vec() } else { raw.split(',').map(str::trim).collect() };
    if let Some(bad) = groups.iter().find(|g| !GROUPS.contains(g)) {
        return Err(CliError::usage(format!("unknown check group `{bad}` (expected all or {})", GROUPS.join(", "))));
    }
    Ok(identity_suite()?.into_iter().filter(|c| groups.contains(&c.group)).collect())
}

pub fn run(settings: &Settings, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Status> {
    let checks = selected_checks(settings)?;
    let passed = checks.iter().all(|c| c.passed);
    let text = match format(settings, Format::Text)? {
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{status}  {:<10}  {}\n", c.group, c.name));
                if !c.passed {
                    s.push_str(&format!("      residual: {}\n", c.residual));
                }
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            s.push_str(&format!("{} identities, {failed} failed\n", checks.len()));
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let fail = |e: csv::Error| CliError::usage(e.to_string());
            w.write_record(["group", "name", "passed", "residual"]).map_err(fail)?;
            for c in &checks {
                w.write_record([c.group, &c.name, if c.passed { "true" } else { "false" }, &c.residual]).map_err(fail)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::usage(e.to_string()))?).expect("UTF-8")
        }
        Format::Json => {
            let doc = AlgebraDocument {
                schema_version: sedosc::table::SCHEMA_VERSION,
                kind: "algebra",
                passed,
                checks: checks
                    .iter()
                    .map(|c| CheckRecord { group: c.group, name: &c.name, passed: c.passed, residual: &c.residual })
                    .collect(),
            };
            serde_json::to_string_pretty(&doc).map_err(|e| CliError::usage(e.to_string()))? + "\n"
        }
    };
    emit(settings, &text, stdout)?;
    if passed {
        Ok(Status::Success)
    } else {
        for c in checks.iter().filter(|c| !c.passed) {
            writeln!(stderr, "identity failed: {} (residual {})", c.name, c.residual)?;
        }
        Ok(Status::IdentityFailure)
    }
}
