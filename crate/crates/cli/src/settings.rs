//! Flat `key=value` configuration merged with command-line flags.
//!
//! Precedence is total: a flag always wins over the same key in the config
//! file, and the file wins over built-in defaults. Keys are the long flag
//! names with dashes replaced by underscores (`--burn-in` is `burn_in`); the
//! temperature key is `T`.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use sedosc::{OscillatorParams, ThermalState};

use crate::error::{CliError, Result};

/// Effective settings of one command invocation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::usage(format!("config line {}: expected key=value, got `{raw}`", i + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::usage(format!("config line {}: empty key", i + 1)));
        }
        if out.iter().any(|(seen, _)| seen == k) {
            return Err(CliError::usage(format!("config line {}: duplicate key `{k}`", i + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

impl Settings {
    /// Merges the optional config file with flag values. `entries` lists every
    /// key the command accepts together with its flag value, if given.
    pub fn resolve(config: Option<&Path>, entries: Vec<(&'static str, Option<String>)>) -> Result<Self> {
        let mut values = BTreeMap::new();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            for (k, v) in parse_config(&text)? {
                if !entries.iter().any(|(name, _)| *name == k) {
                    let mut known: Vec<&str> = entries.iter().map(|(n, _)| *n).collect();
                    known.sort_unstable();
                    return Err(CliError::usage(format!(
                        "unknown config key `{k}` in {} (accepted: {})",
                        path.display(),
                        known.join(", ")
                    )));
                }
                values.insert(k, v);
            }
        }
        for (k, v) in entries {
            if let Some(v) = v {
                values.insert(k.to_string(), v);
            }
        }
        Ok(Self { values })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Self { values: pairs.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::usage(format!("invalid value `{v}` for `{key}`: {e}"))))
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// A finite float.
    pub fn float_or(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.get_or(key, default)?;
        if !v.is_finite() {
            return Err(CliError::usage(format!("`{key}` must be finite, got {v}")));
        }
        Ok(v)
    }

    pub fn float(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key).map(|_| self.float_or(key, 0.0)).transpose()
    }

    /// Oscillator parameters and temperature, with `tau` defaulting to
    /// `default_tau`.
    pub fn physics(&self, default_tau: f64) -> Result<(OscillatorParams, ThermalState)> {
        let params = OscillatorParams::new(
            self.float_or("mass", 1.0)?,
            self.float_or("omega0", 1.0)?,
            self.float_or("hbar", 1.0)?,
            self.float_or("kb", 1.0)?,
            self.float_or("tau", default_tau)?,
        )
        .map_err(|e| CliError::usage(e.to_string()))?;
        let state = ThermalState::new(self.float_or("T", 0.0)?).map_err(|e| CliError::usage(e.to_string()))?;
        Ok((params, state))
    }

    /// Effective settings as `key=value` pairs in key order.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.values.iter().filter(|(k, _)| *k != "output").map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_blank_lines_and_errors() {
        let parsed = parse_config("# header\n\nT = 1 # kelvin-ish\nseed=4\n").unwrap();
        assert_eq!(parsed, vec![("T".into(), "1".into()), ("seed".into(), "4".into())]);
        assert!(parse_config("seed 4").is_err());
        assert!(parse_config("seed=1\nseed=2").is_err());
        assert!(parse_config("=3").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "T=2\nseed=9\n").unwrap();
        let s = Settings::resolve(Some(&path), vec![("T", Some("3".into())), ("seed", None)]).unwrap();
        assert_eq!(s.get::<f64>("T").unwrap(), Some(3.0));
        assert_eq!(s.get::<u64>("seed").unwrap(), Some(9));
        let err = Settings::resolve(Some(&path), vec![("T", None)]).unwrap_err();
        assert!(err.to_string().contains("unknown config key `seed`"));
    }

    #[test]
    fn typed_access() {
        let s = Settings::from_pairs([("dt", "0.05"), ("n", "ten"), ("T", "inf")]);
        assert_eq!(s.float_or("dt", 1.0).unwrap(), 0.05);
        assert!(s.get::<usize>("n").is_err());
        assert!(s.float_or("T", 0.0).is_err());
        assert_eq!(s.get_or("missing", 7u32).unwrap(), 7);
        assert!(Settings::from_pairs([("T", "-1")]).physics(0.0).is_err());
    }
}
