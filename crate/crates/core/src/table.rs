//! Tables of estimates with references and z-scores, and their serialized
//! forms.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version of the JSON layout written by [`EstimateTable::to_json`].
pub const SCHEMA_VERSION: u32 = 1;

/// Formats `v` with 12 significant digits, trailing zeros removed; scientific
/// notation outside `[1e-5, 1e12)`.
pub fn format_sig12(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One estimated quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub name: String,
    pub estimate: f64,
    pub se: f64,
    pub n_eff: f64,
    pub reference: Option<f64>,
    pub z: Option<f64>,
}

impl EstimateRow {
    /// Builds a row; `z = (estimate − reference)/se` when both exist and `se > 0`.
    pub fn new(name: impl Into<String>, estimate: f64, se: f64, n_eff: f64, reference: Option<f64>) -> Self {
        let z = reference.and_then(|r| (se > 0.0).then(|| (estimate - r) / se));
        Self { name: name.into(), estimate, se, n_eff, reference, z }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EstimateTable {
    pub rows: Vec<EstimateRow>,
}

#[derive(Serialize, Deserialize)]
struct JsonDocument {
    schema_version: u32,
    kind: String,
    #[serde(default)]
    metadata: Vec<(String, String)>,
    rows: Vec<EstimateRow>,
}

const CSV_HEADER: [&str; 6] = ["name", "estimate", "se", "n_eff", "reference", "z"];

impl EstimateTable {
    pub fn new(rows: Vec<EstimateRow>) -> Self {
        Self { rows }
    }

    pub fn push(&mut self, row: EstimateRow) {
        self.rows.push(row);
    }

    pub fn get(&self, name: &str) -> Option<&EstimateRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Largest `|z|` over rows that have a reference.
    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.z).map(f64::abs).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER)?;
        let opt = |v: Option<f64>| v.map(format_sig12).unwrap_or_default();
        for r in &self.rows {
            out.write_record([
                r.name.clone(),
                format_sig12(r.estimate),
                format_sig12(r.se),
                format_sig12(r.n_eff),
                opt(r.reference),
                opt(r.z),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        if headers.iter().ne(CSV_HEADER) {
            return Err(Error::Format(format!("unexpected CSV header {headers:?}")));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Format(format!("`{s}` is not a number")))
        };
        let opt = |s: &str| -> Result<Option<f64>> { if s.is_empty() { Ok(None) } else { num(s).map(Some) } };
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            rows.push(EstimateRow {
                name: rec[0].to_string(),
                estimate: num(&rec[1])?,
                se: num(&rec[2])?,
                n_eff: num(&rec[3])?,
                reference: opt(&rec[4])?,
                z: opt(&rec[5])?,
            });
        }
        Ok(Self { rows })
    }

    /// JSON document `{schema_version, kind, metadata, rows}`.
    pub fn to_json(&self, kind: &str, metadata: &[(String, String)]) -> Result<String> {
        let doc = JsonDocument {
            schema_version: SCHEMA_VERSION,
            kind: kind.to_string(),
            metadata: metadata.to_vec(),
            rows: self.rows.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: JsonDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!("unsupported schema version {}", doc.schema_version)));
        }
        Ok(Self { rows: doc.rows })
    }

    /// Fixed-width text rendering.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>| v.map(format_sig12).unwrap_or_else(|| "-".into());
        let mut cells: Vec<[String; 6]> = vec![CSV_HEADER.map(String::from)];
        for r in &self.rows {
            cells.push([
                r.name.clone(),
                format_sig12(r.estimate),
                format_sig12(r.se),
                format_sig12(r.n_eff),
                opt(r.reference),
                opt(r.z),
            ]);
        }
        let mut widths = [0usize; 6];
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(widths)
                .enumerate()
                .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig12(1.5), "1.5");
        assert_eq!(format_sig12(0.25), "0.25");
        assert_eq!(format_sig12(-0.0), "0");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(2.0 / 3.0 * 1e4), "6666.66666667");
        assert_eq!(format_sig12(9.9999999999999), "10");
        assert_eq!(format_sig12(1e-7 / 3.0), "3.33333333333e-8");
        assert_eq!(format_sig12(6.0e12), "6e12");
        assert_eq!(format_sig12(f64::NAN), "NaN");
        assert_eq!(format_sig12(0.959517375667), "0.959517375667");
    }

    #[test]
    fn z_scores() {
        let r = EstimateRow::new("a", 1.1, 0.05, 10.0, Some(1.0));
        assert!((r.z.unwrap() - 2.0).abs() < 1e-12);
        assert!(EstimateRow::new("b", 1.0, 0.0, 1.0, Some(1.0)).z.is_none());
        assert!(EstimateRow::new("c", 1.0, 0.1, 1.0, None).z.is_none());
    }

    #[test]
    fn round_trips() {
        let t = EstimateTable::new(vec![
            EstimateRow::new("<H>", 0.5000123456789012, 1e-3, 1e6, Some(0.5)),
            EstimateRow::new("Var(x), axis 1", 0.123, 2e-4, 999.5, None),
        ]);
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("name,estimate,se,n_eff,reference,z\n"));
        let back = EstimateTable::from_csv(&csv).unwrap();
        assert_eq!(back.to_csv().unwrap(), csv);
        assert_eq!(back.rows[1].reference, None);
        let json = t.to_json("sample", &[("seed".into(), "7".into())]).unwrap();
        assert!(json.contains("\"schema_version\": 1"));
        assert_eq!(EstimateTable::from_json(&json).unwrap(), t);
        assert!(t.to_text().lines().count() == 3);
    }
}
