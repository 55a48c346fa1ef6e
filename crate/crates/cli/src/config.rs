//! Flat `key = value` experiment configuration with command-line overrides.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::CliError;

/// A configurable parameter with its default and help text.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

/// Keys accepted by every experiment besides its own.
pub const OUT_KEY: &str = "out";
pub const EXPERIMENT_KEY: &str = "experiment";

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_flat(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!("line {}: expected `key = value`, got `{line}`", no + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::Config(format!("line {}: empty key", no + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{k}`", no + 1)));
        }
    }
    Ok(out)
}

/// Resolved parameters of one experiment: defaults, then the config file,
/// then command-line overrides.
#[derive(Debug, Clone)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn resolve(
        experiment: &str,
        keys: &[Key],
        config: Option<&Path>,
        overrides: &[(String, String)],
    ) -> Result<Self, CliError> {
        let mut values: BTreeMap<String, String> =
            keys.iter().map(|k| (k.name.to_string(), k.default.to_string())).collect();
        values.insert(OUT_KEY.into(), ".".into());
        if let Some(path) = config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
            for (k, v) in parse_flat(&text)? {
                if k == EXPERIMENT_KEY {
                    if v != experiment {
                        return Err(CliError::Config(format!(
                            "config {} is for experiment `{v}`, not `{experiment}`",
                            path.display()
                        )));
                    }
                    continue;
                }
                if !values.contains_key(&k) {
                    return Err(CliError::Config(format!("unknown key `{k}` for experiment `{experiment}`")));
                }
                values.insert(k, v);
            }
        }
        for (k, v) in overrides {
            values.insert(k.clone(), v.clone());
        }
        Ok(Params { values })
    }

    /// All resolved values except the output path, in key order.
    pub fn summary(&self) -> String {
        self.values
            .iter()
            .filter(|(k, _)| k.as_str() != OUT_KEY)
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn str(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<T, CliError> {
        let raw = self.str(key);
        raw.parse().map_err(|_| CliError::Config(format!("`{key}` must be {what}, got `{raw}`")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v: f64 = self.parse(key, "a number")?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("`{key}` must be finite, got {v}")));
        }
        Ok(v)
    }

    pub fn positive(&self, key: &str) -> Result<f64, CliError> {
        let v = self.f64(key)?;
        if v <= 0.0 {
            return Err(CliError::Config(format!("`{key}` must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.parse(key, "a non-negative integer")
    }

    /// `a..b` with a ≤ b, both ends included by the callers' grids.
    pub fn range_f64(&self, key: &str) -> Result<(f64, f64), CliError> {
        let (a, b) = self.split_range(key)?;
        let bad = || CliError::Config(format!("`{key}` must be a range `a..b` of numbers, got `{}`", self.str(key)));
        let a: f64 = a.parse().map_err(|_| bad())?;
        let b: f64 = b.parse().map_err(|_| bad())?;
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(CliError::Config(format!("`{key}` needs finite a ≤ b, got {a}..{b}")));
        }
        Ok((a, b))
    }

    pub fn range_i64(&self, key: &str) -> Result<(i64, i64), CliError> {
        let (a, b) = self.split_range(key)?;
        let bad = || CliError::Config(format!("`{key}` must be a range `a..b` of integers, got `{}`", self.str(key)));
        let a: i64 = a.parse().map_err(|_| bad())?;
        let b: i64 = b.parse().map_err(|_| bad())?;
        if a > b {
            return Err(CliError::Config(format!("`{key}` needs a ≤ b, got {a}..{b}")));
        }
        Ok((a, b))
    }

    fn split_range(&self, key: &str) -> Result<(&str, &str), CliError> {
        let raw = self.str(key);
        match raw.split_once("..") {
            Some((a, b)) => Ok((a.trim(), b.trim())),
            None => Ok((raw.trim(), raw.trim())),
        }
    }

    pub fn choice<'a>(&self, key: &str, options: &[&'a str]) -> Result<&'a str, CliError> {
        let raw = self.str(key);
        options
            .iter()
            .find(|o| **o == raw)
            .copied()
            .ok_or_else(|| CliError::Config(format!("`{key}` must be one of {}, got `{raw}`", options.join("|"))))
    }
}

/// a, a + step, … up to b inclusive (to within rounding).
pub fn grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    if a == b {
        return vec![a];
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| a + k as f64 * step).collect()
}
