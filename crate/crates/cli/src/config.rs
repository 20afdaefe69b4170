//! Experiment configuration: a flat key=value store with defaults for
//! every field, optional file loading, and flag overrides (flags win).
//! The resolved configuration is echoed into every report so a run can
//! be reproduced from its output alone.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use frobclt_core::cubic::SignatureFilter;
use frobclt_core::densities::Group;
use frobclt_core::satotate::RamifiedPolicy;

/// (key, default). Every configurable field appears here; unknown keys
/// in a config file are rejected rather than silently ignored.
const DEFAULTS: &[(&str, &str)] = &[
    ("group", "s3"),
    ("bound", "10000"), // |d_K| bound X
    ("primes", "1000"), // prime cap x
    ("max_r", "4"),     // highest moment order R
    ("mode", "family"), // family | mc (clt); horizontal | vertical | measure (satotate)
    ("seed", "0"),
    ("samples", "10000"),
    ("signature", "all"),    // all | c | r
    ("ramified", "exclude"), // exclude | include
    ("p", "5"),
    ("order", "2"),
    ("resolution", "64"),
    ("tol", "4"),     // stderr multiplier for deviation warnings
    ("threads", "0"), // 0 = all cores, subject to the FROBCLT_THREADS cap
    ("table", ""),
    ("out", ""),
    ("cache", ""),
    ("checkpoint", ""),
];

#[derive(Clone, Debug)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            values: DEFAULTS
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }
}

impl Config {
    /// Defaults, then file entries. Lines are `key=value`; blank lines
    /// and `#` comments are skipped.
    pub fn load(path: Option<&Path>) -> Result<Config> {
        let mut cfg = Config::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| anyhow!("config line {}: expected key=value", idx + 1))?;
                cfg.set(key.trim(), value.trim())
                    .with_context(|| format!("config line {}", idx + 1))?;
            }
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !self.values.contains_key(key) {
            bail!("unknown config key {key:?}");
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Flag override helper: flags win over file values.
    pub fn override_with<T: ToString>(&mut self, key: &str, flag: Option<T>) {
        if let Some(v) = flag {
            self.values.insert(key.to_string(), v.to_string());
        }
    }

    fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("config key {key} missing from defaults"))
    }

    pub fn get_u64(&self, key: &str) -> Result<u64> {
        self.raw(key).parse().map_err(|_| {
            anyhow!(
                "config {key}={:?} is not a nonnegative integer",
                self.raw(key)
            )
        })
    }

    pub fn get_u32(&self, key: &str) -> Result<u32> {
        self.raw(key).parse().map_err(|_| {
            anyhow!(
                "config {key}={:?} is not a nonnegative integer",
                self.raw(key)
            )
        })
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        self.raw(key)
            .parse()
            .map_err(|_| anyhow!("config {key}={:?} is not a number", self.raw(key)))
    }

    /// Empty string means "not set" for path-valued keys.
    pub fn get_path(&self, key: &str) -> Option<&str> {
        let v = self.raw(key);
        (!v.is_empty()).then_some(v)
    }

    pub fn group(&self) -> Result<Group> {
        self.raw("group")
            .parse()
            .map_err(|e| anyhow!("config group: {e}"))
    }

    pub fn signature(&self) -> Result<SignatureFilter> {
        match self.raw("signature") {
            "all" | "a" => Ok(SignatureFilter::All),
            "c" | "complex" => Ok(SignatureFilter::Complex),
            "r" | "real" => Ok(SignatureFilter::TotallyReal),
            other => bail!("signature must be all, c, or r, got {other:?}"),
        }
    }

    pub fn ramified(&self) -> Result<RamifiedPolicy> {
        match self.raw("ramified") {
            "exclude" => Ok(RamifiedPolicy::Exclude),
            "include" => Ok(RamifiedPolicy::Include),
            other => bail!("ramified must be exclude or include, got {other:?}"),
        }
    }

    pub fn mode(&self) -> &str {
        self.raw("mode")
    }

    /// One-line echo of the full resolved configuration, keys sorted.
    pub fn echo(&self) -> String {
        let mut out = String::from("# config:");
        for (k, v) in &self.values {
            let shown = if v.is_empty() { "-" } else { v };
            write!(out, " {k}={shown}").unwrap();
        }
        out
    }
}
