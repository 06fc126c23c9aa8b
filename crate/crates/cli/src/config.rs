use std::fs;
use std::path::Path;

use infovalue::{anticipation, Anticipation, CoefficientSet, InsiderInfo, StrategyKind, TimeGridSpec};
use serde::Deserialize;

use crate::CliError;

/// Run configuration read from `--config`. Every field but `market` and
/// `info` is optional; command-line flags take precedence.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub market: CoefficientSet,
    pub info: InsiderInfo,
    #[serde(default = "one")]
    pub p0: f64,
    #[serde(default = "one")]
    pub x0: f64,
    pub horizon: Option<f64>,
    pub eps: Option<f64>,
    pub tgrid: Option<TimeGridSpec>,
    pub n_paths: Option<u64>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub strategy: Option<StrategyKind>,
    pub extrapolate: Option<bool>,
}

fn one() -> f64 {
    1.0
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.info.validate()?;
        for (name, v) in [("p0", cfg.p0), ("x0", cfg.x0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(h) = cfg.horizon {
            if !(h > 0.0 && h <= 1.0) {
                return Err(CliError::Config(format!("horizon {h} outside (0, 1]")));
            }
        }
        if let Some(e) = cfg.eps {
            if !(e > 0.0 && e < 1.0) {
                return Err(CliError::Config(format!("eps {e} outside (0, 1)")));
            }
        }
        Ok(cfg)
    }

    pub fn anticipation(&self) -> Result<Anticipation, CliError> {
        Ok(anticipation(&self.market, &self.info, self.p0)?)
    }
}
