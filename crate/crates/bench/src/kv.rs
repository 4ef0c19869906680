//! Flat `key = value` files with `#` comments.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{BenchError, Result};

/// Parsed key-value file. Getters consume keys so that [`KvMap::finish`]
/// can reject anything left unrecognized.
#[derive(Debug, Clone, Default)]
pub struct KvMap {
    entries: BTreeMap<String, (usize, String)>,
}

impl KvMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(BenchError::Config(format!("line {}: expected `key = value`", i + 1)));
            };
            let key = k.trim().to_string();
            if key.is_empty() {
                return Err(BenchError::Config(format!("line {}: empty key", i + 1)));
            }
            if entries.insert(key.clone(), (i + 1, v.trim().to_string())).is_some() {
                return Err(BenchError::Config(format!("line {}: duplicate key `{key}`", i + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), (0, value.into()));
    }

    pub fn take_str(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| BenchError::Config(format!("line {line}: invalid value `{v}` for `{key}`"))),
        }
    }

    pub fn take_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        Ok(self.take(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&mut self, key: &str) -> Result<T> {
        self.take(key)?
            .ok_or_else(|| BenchError::Config(format!("missing required key `{key}`")))
    }

    /// Remaining keys with the given prefix (prefix stripped), consumed.
    pub fn take_prefixed(&mut self, prefix: &str) -> Vec<(String, usize, String)> {
        let keys: Vec<String> = self.entries.keys().filter(|k| k.starts_with(prefix)).cloned().collect();
        keys.into_iter()
            .map(|k| {
                let (line, v) = self.entries.remove(&k).expect("listed key");
                (k[prefix.len()..].to_string(), line, v)
            })
            .collect()
    }

    pub fn finish(self) -> Result<()> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((k, (line, _))) => Err(BenchError::Config(format!("line {line}: unknown key `{k}`"))),
        }
    }
}
