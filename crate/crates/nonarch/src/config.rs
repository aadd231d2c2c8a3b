//! Experiment configuration: defaults, flat key=value config files, and
//! flag overrides. Rationals are written as `p/q` strings.

use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lognorm::{parse_rational, rational_int};

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "NONARCH_CONFIG";

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    /// `log2` of the staircase radius; must be positive.
    #[serde(serialize_with = "ser_rat")]
    pub r_log: BigRational,
    pub trunc_x: u64,
    pub trunc_u: u64,
    pub trunc_t: u64,
    /// Number of product factors to build.
    pub factors: usize,
    /// Scale of the factor sequence: `eps_n = 1/(scale * (n+1))`.
    pub epsilon_scale: u64,
    /// Reducer search depth.
    pub depth: u64,
    /// Seed for the randomized property suites.
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn ser_rat<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            r_log: rational_int(1),
            trunc_x: 64,
            trunc_u: 64,
            trunc_t: 64,
            factors: 8,
            epsilon_scale: 3,
            depth: 6,
            seed: 1,
            out: None,
        }
    }
}

impl ExperimentConfig {
    /// Read a flat `key = value` file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    lineno + 1
                )));
            };
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let int = |v: &str| -> Result<u64> {
            v.parse()
                .map_err(|e| Error::Config(format!("bad integer `{v}` for {key}: {e}")))
        };
        match key {
            "r_log" => self.r_log = parse_rational(value)?,
            "trunc_x" => self.trunc_x = int(value)?,
            "trunc_u" => self.trunc_u = int(value)?,
            "trunc_t" => self.trunc_t = int(value)?,
            "factors" => self.factors = int(value)? as usize,
            "epsilon_scale" => self.epsilon_scale = int(value)?,
            "depth" => self.depth = int(value)?,
            "seed" => self.seed = int(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r_log.is_positive() {
            return Err(Error::Config("r_log must be positive".into()));
        }
        if self.trunc_x == 0 || self.trunc_u == 0 || self.trunc_t == 0 {
            return Err(Error::Config("truncation caps must be at least 1".into()));
        }
        if self.factors == 0 {
            return Err(Error::Config("factors must be at least 1".into()));
        }
        if self.epsilon_scale == 0 {
            return Err(Error::Config("epsilon_scale must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lognorm::rational;

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join("nonarch-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("exp.conf");
        std::fs::write(
            &path,
            "# comment\nr_log = 5/3\nfactors = 4\nseed = 9\ndepth=2\n",
        )
        .unwrap();
        let cfg = ExperimentConfig::from_file(&path).unwrap();
        assert_eq!(cfg.r_log, rational(5, 3));
        assert_eq!(cfg.factors, 4);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.depth, 2);
        assert_eq!(cfg.trunc_x, 64, "unset keys keep defaults");
    }

    #[test]
    fn bad_values_are_config_errors() {
        let mut cfg = ExperimentConfig::default();
        assert!(matches!(cfg.set("r_log", "x/y"), Err(Error::Config(_))));
        assert!(matches!(cfg.set("unknown", "1"), Err(Error::Config(_))));
        cfg.set("r_log", "-1").unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }
}
