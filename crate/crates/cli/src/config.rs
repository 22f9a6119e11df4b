//! Defaults, the optional config file, and the flag-beats-file merge.

use std::path::Path;

use diagforge_core::halting::{DEFAULT_BUDGET, DEFAULT_SPACE};
use diagforge_core::ittm::{DEFAULT_STAGE_BUDGET, OMEGA_CAP};
use diagforge_core::pr::EvalLimits;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// On-disk shape: every field optional, unknown keys rejected so a typo
/// cannot silently fall back to a default.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    budget: Option<u64>,
    space: Option<usize>,
    stage_budget: Option<u64>,
    max_steps: Option<u64>,
    max_value_bits: Option<u64>,
    clock_cap: Option<u64>,
    sweep_start: Option<u64>,
    sweep_end: Option<u64>,
    format: Option<String>,
    seed: Option<u64>,
}

/// Fully resolved settings: builtin defaults, overlaid by the config file,
/// overlaid by flags at each use site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub budget: u64,
    pub space: usize,
    pub stage_budget: u64,
    pub limits: EvalLimits,
    pub clock_cap: u64,
    pub sweep_start: u64,
    pub sweep_end: u64,
    pub format: Format,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            budget: DEFAULT_BUDGET,
            space: DEFAULT_SPACE,
            stage_budget: DEFAULT_STAGE_BUDGET,
            limits: EvalLimits::default(),
            clock_cap: OMEGA_CAP,
            sweep_start: 0,
            sweep_end: 100,
            format: Format::Text,
            seed: 0,
        }
    }
}

pub fn load(path: Option<&Path>) -> Result<Settings, CliError> {
    let mut settings = Settings::default();
    let Some(path) = path else { return Ok(settings) };
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let file: FileConfig = serde_json::from_str(&raw)
        .map_err(|e| CliError::Usage(format!("malformed config {}: {e}", path.display())))?;

    if let Some(v) = file.budget {
        settings.budget = v;
    }
    if let Some(v) = file.space {
        settings.space = v;
    }
    if let Some(v) = file.stage_budget {
        settings.stage_budget = v;
    }
    if let Some(v) = file.max_steps {
        settings.limits.max_steps = v;
    }
    if let Some(v) = file.max_value_bits {
        settings.limits.max_value_bits = v;
    }
    if let Some(v) = file.clock_cap {
        settings.clock_cap = v;
    }
    if let Some(v) = file.sweep_start {
        settings.sweep_start = v;
    }
    if let Some(v) = file.sweep_end {
        settings.sweep_end = v;
    }
    if let Some(v) = &file.format {
        settings.format = match v.as_str() {
            "text" => Format::Text,
            "json" => Format::Json,
            other => {
                return Err(CliError::Usage(format!(
                    "config format must be \"text\" or \"json\", not {other:?}"
                )))
            }
        };
    }
    if let Some(v) = file.seed {
        settings.seed = v;
    }
    Ok(settings)
}

/// Called once, after flag overrides, so every path through [`Settings`] is
/// covered by the same bounds.
pub fn validate(s: &Settings) -> Result<(), CliError> {
    let positive: [(&str, u64); 5] = [
        ("budget", s.budget),
        ("space", s.space as u64),
        ("stage_budget", s.stage_budget),
        ("max_steps", s.limits.max_steps),
        ("max_value_bits", s.limits.max_value_bits),
    ];
    for (name, v) in positive {
        if v == 0 {
            return Err(CliError::Usage(format!("{name} must be positive")));
        }
    }
    if s.clock_cap == 0 || s.clock_cap > OMEGA_CAP {
        return Err(CliError::Usage(format!("clock_cap must be between 1 and {OMEGA_CAP}")));
    }
    Ok(())
}
