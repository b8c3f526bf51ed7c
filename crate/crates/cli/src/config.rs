//! Flat `key = value` configuration files and flag/file/default merging.
//! Flags always override file values; every effective parameter is echoed
//! into the output metadata.

use std::collections::BTreeMap;
use std::path::Path;

use crate::AppError;

/// Parses a flat key-value file. Lines are `key = value`; blank lines and
/// `#` comments are ignored.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(AppError::usage(format!(
                "{}:{}: expected `key = value`, got `{raw}`",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Resolves one parameter from flag, then file, then default, recording the
/// effective value.
pub struct Resolver {
    file: BTreeMap<String, String>,
    pub effective: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(config_path: Option<&Path>) -> Result<Self, AppError> {
        let file = match config_path {
            Some(p) => parse_config_file(p)?,
            None => BTreeMap::new(),
        };
        Ok(Self {
            file,
            effective: BTreeMap::new(),
        })
    }

    pub fn f64(&mut self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, AppError> {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(s) => s
                    .parse::<f64>()
                    .map_err(|_| AppError::usage(format!("config key {key}: bad number `{s}`")))?,
                None => default,
            },
        };
        self.effective
            .insert(key.to_string(), crate::output::fmt_num(value));
        Ok(value)
    }

    pub fn u64(&mut self, key: &str, flag: Option<u64>, default: u64) -> Result<u64, AppError> {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(s) => s
                    .parse::<u64>()
                    .map_err(|_| AppError::usage(format!("config key {key}: bad integer `{s}`")))?,
                None => default,
            },
        };
        self.effective.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    pub fn note(&mut self, key: &str, value: &str) {
        self.effective.insert(key.to_string(), value.to_string());
    }
}
