//! TOML run configuration.
//!
//! Every field is optional; command-line flags override config values, and
//! both fall back to the defaults listed here. A config file must carry
//! `schema_version = 1`.

use serde::Deserialize;
use std::path::Path;

use atomkit::error::{Error, Result};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: Option<u32>,
    #[serde(default)]
    pub expdecomp: ExpSection,
    #[serde(default)]
    pub gabor: GaborSection,
    #[serde(default)]
    pub disc: DiscSection,
    #[serde(default)]
    pub perturb: PerturbSection,
    #[serde(default)]
    pub diagnose: DiagnoseSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpSection {
    pub m: Option<f64>,
    pub grid_n: Option<usize>,
    pub j_max: Option<i64>,
    pub plateau_fraction: Option<f64>,
    pub probe: Option<String>,
    pub backend: Option<String>,
    pub remove: Option<i64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaborSection {
    pub l: Option<usize>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub probes: Option<usize>,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscSection {
    pub depth: Option<u32>,
    pub degree: Option<usize>,
    pub orders: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbSection {
    pub mode: Option<String>,
    pub scale: Option<f64>,
    pub contraction_budget: Option<f64>,
    pub series_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseSection {
    pub space: Option<String>,
    pub order: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::rejected(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: Config = toml::from_str(&text)
            .map_err(|e| Error::rejected(format!("invalid config {}: {e}", path.display())))?;
        match cfg.schema_version {
            Some(1) => Ok(cfg),
            Some(v) => Err(Error::rejected(format!("unsupported config schema_version {v}"))),
            None => Err(Error::rejected("config is missing schema_version")),
        }
    }
}
