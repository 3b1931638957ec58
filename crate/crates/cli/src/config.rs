use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub sympl: f64,
    pub diff_mod1: f64,
    pub sigma_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sympl: 1e-9,
            diff_mod1: 1e-3,
            sigma_residual: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub window: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub k_max: u64,
    pub n_iter_circle: u64,
    pub tolerances: Tolerances,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            window: 64,
            n: 10_000,
            k_max: 64,
            n_iter_circle: 100_000,
            tolerances: Tolerances::default(),
            output_dir: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config `{}`", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config `{}`", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("window", self.window),
            ("N", self.n),
            ("k_max", self.k_max),
            ("n_iter_circle", self.n_iter_circle),
        ] {
            if v == 0 {
                bail!("{name} must be positive");
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("sympl", t.sympl),
            ("diff_mod1", t.diff_mod1),
            ("sigma_residual", t.sigma_residual),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("tolerance {name} must be positive, got {v}");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_keeps_defaults() {
        let c: RunConfig = toml::from_str("seed = 7\nN = 500\n[tolerances]\ndiff_mod1 = 0.01\n").unwrap();
        assert_eq!((c.seed, c.n, c.window), (7, 500, 64));
        assert_eq!(c.tolerances.diff_mod1, 0.01);
        assert_eq!(c.tolerances.sympl, 1e-9);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        assert!(toml::from_str::<RunConfig>("sead = 1").is_err());
        let c = RunConfig {
            k_max: 0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.tolerances.sigma_residual = -1.0;
        assert!(c.validate().is_err());
    }
}
