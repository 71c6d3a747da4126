//! Optional `key = value` configuration files.
//!
//! Lines are `key = value`; blank lines and `#` comments are ignored.
//! Values from the file fill in options the command line left unset, so
//! explicit flags always win.

use anyhow::{bail, Context, Result};
use std::collections::HashMap;
use std::path::Path;

/// Parsed configuration file.
#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: HashMap<String, String>,
}

impl Config {
    /// Loads a config file; `None` path yields an empty config.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut entries = HashMap::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {} is not `key = value`: {line}", number + 1);
            };
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// String value for a key.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Fills an unset option from the config, parsing the value.
    pub fn fill<T: std::str::FromStr>(&self, slot: &mut Option<T>, key: &str) -> Result<()>
    where
        T::Err: std::fmt::Display,
    {
        if slot.is_none() {
            if let Some(raw) = self.get(key) {
                match raw.parse() {
                    Ok(value) => *slot = Some(value),
                    Err(e) => bail!("config key `{key}`: {e}"),
                }
            }
        }
        Ok(())
    }
}
