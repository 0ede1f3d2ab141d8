//! Experiment configuration, loadable from TOML or JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::group::Group;

/// Checks a verification run can include.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// T_k(R_α \ {0}) against the energy lower bound on random sets.
    Tmain,
    /// Greedy dissociated subsets of R_α against the Chang bound.
    Chang,
    CubeUnion,
    CubeRandom,
    BohrUnion,
}

fn default_suites() -> Vec<Suite> {
    vec![Suite::Tmain, Suite::Chang]
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    pub group: Group,
    #[serde(default)]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub ks: Vec<usize>,
    #[serde(default)]
    pub ds: Vec<usize>,
    #[serde(default)]
    pub ss: Vec<u64>,
    #[serde(default)]
    pub ps: Vec<usize>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Random sets per grid point for the randomized suites.
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub relaxed: bool,
    #[serde(default = "default_suites")]
    pub suites: Vec<Suite>,
    #[serde(default)]
    pub output: OutputPaths,
}

/// One (δ, α, k, seed) combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub delta: f64,
    pub alpha: f64,
    pub k: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(id: impl Into<String>, group: Group) -> Self {
        ExperimentConfig {
            id: id.into(),
            group,
            deltas: Vec::new(),
            alphas: Vec::new(),
            ks: Vec::new(),
            ds: Vec::new(),
            ss: Vec::new(),
            ps: Vec::new(),
            seeds: Vec::new(),
            trials: 1,
            relaxed: false,
            suites: default_suites(),
            output: OutputPaths::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `.json` as JSON and anything else as TOML.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    /// Every grid value must be admissible; empty grids are allowed and yield no points.
    pub fn validate(&self) -> Result<()> {
        for &d in &self.deltas {
            for &a in &self.alphas {
                if !(a > 0.0 && a <= d && d <= 1.0) {
                    return Err(Error::InvalidParameter(format!("grid pair delta={d}, alpha={a} violates 0 < alpha <= delta <= 1")));
                }
            }
        }
        if self.ks.contains(&0) || self.ds.contains(&0) || self.ss.contains(&0) || self.ps.contains(&0) {
            return Err(Error::InvalidParameter("k, d, s and p grids must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Replaces the seed grid, as the SPECTRA_SEED override does.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seeds = vec![seed];
        self
    }

    /// Cartesian product in (δ, α, k, seed) order; a missing seed grid means seed 0.
    pub fn grid(&self) -> Vec<GridPoint> {
        let seeds = if self.seeds.is_empty() { vec![0] } else { self.seeds.clone() };
        let mut out = Vec::new();
        for &delta in &self.deltas {
            for &alpha in &self.alphas {
                for &k in &self.ks {
                    for &seed in &seeds {
                        out.push(GridPoint { delta, alpha, k, seed });
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let toml = r#"
            id = "demo"
            deltas = [0.25]
            alphas = [0.1, 0.2]
            ks = [2]
            seeds = [1, 2]
            [group]
            kind = "cyclic"
            modulus = 101
        "#;
        let a = ExperimentConfig::from_toml_str(toml).unwrap();
        let b = ExperimentConfig::from_json_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.grid().len(), 4);
        assert_eq!(a.suites, vec![Suite::Tmain, Suite::Chang]);
    }

    #[test]
    fn bad_pair_rejected() {
        let mut c = ExperimentConfig::new("x", Group::cyclic(11).unwrap());
        c.deltas = vec![0.1];
        c.alphas = vec![0.2];
        assert!(c.validate().is_err());
    }
}
