//! Optional JSON settings file. Command-line flags take precedence.

use std::path::Path;

use dimer::TruncationPolicy;
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub tail_epsilon: f64,
    pub k_max: usize,
    pub series_epsilon: f64,
}

impl Default for Settings {
    fn default() -> Self {
        let trunc = TruncationPolicy::default();
        Settings {
            tail_epsilon: trunc.tail_epsilon,
            k_max: trunc.k_max,
            series_epsilon: 1e-17,
        }
    }
}

impl Settings {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::from_json(&text)
    }

    pub fn truncation(&self) -> Result<TruncationPolicy, String> {
        TruncationPolicy::new(self.tail_epsilon, self.k_max).map_err(|e| e.to_string())
    }
}
