use std::path::Path;

use anyhow::{bail, Context};
use clap::ValueEnum;
use qutrit_core::noise::NoiseParams;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Guards {
    /// Largest state-vector length `simulate` will allocate.
    pub max_state_dim: usize,
    pub max_shots: u64,
    pub max_toffoli: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { max_state_dim: 1 << 22, max_shots: 10_000_000, max_toffoli: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub noise: NoiseParams,
    pub format: Format,
    pub guards: Guards,
    pub seed: u64,
}

impl Config {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else { return Ok(Config::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let config: Config = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.noise.validate()?;
        let g = &self.guards;
        if g.max_state_dim == 0 || g.max_shots == 0 || g.max_toffoli == 0 {
            bail!("size guards must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_config() {
        let c: Config = toml::from_str("seed = 9\nformat = \"csv\"\n[noise]\np2 = 0.02\n").unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.noise.p2, 0.02);
        assert_eq!(c.noise.p1, 1e-4);
        assert_eq!(c.guards, Guards::default());
    }

    #[test]
    fn rejects_bad_guards() {
        let c: Config = toml::from_str("[guards]\nmax_shots = 0\n").unwrap();
        assert!(c.validate().is_err());
        assert!(toml::from_str::<Config>("colour = 1").is_err());
    }
}
