use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::geometry::{smallest_concave_m, ConstructionOptions};
use crate::logic::VecEqEncoding;
use crate::rational::{self, Rational};

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "NORMLOGIC_CONFIG";

/// All tunable constants of a run. Every field has a default, so `{}` is a
/// valid config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct Config {
    /// The constant `M` of `g`; when absent, the smallest `M` passing the
    /// concavity gate.
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(with = "rational::vec_as_str")]
    pub q_candidates: Vec<Rational>,
    #[serde(with = "rational::as_str")]
    pub r_grid_step: Rational,
    pub tol_geom: f64,
    pub tol_logic: f64,
    /// Tolerance for checks that must reject second-order deviations of
    /// `‖v+w‖ − ‖v‖ − ‖w‖`, such as the multiplication gadget.
    pub tol_mult: f64,
    pub sample_budget: usize,
    pub seed: u64,
    pub vec_eq: VecEqEncoding,
}

impl Default for Config {
    fn default() -> Self {
        let opts = ConstructionOptions::default();
        Config {
            m: None,
            q_candidates: opts.q_candidates,
            r_grid_step: opts.r_grid_step,
            tol_geom: 1e-9,
            tol_logic: 1e-6,
            tol_mult: 1e-11,
            sample_budget: 100_000,
            seed: 42,
            vec_eq: VecEqEncoding::Primitive,
        }
    }
}

/// Command-line values that replace the corresponding config keys.
#[derive(Clone, Debug, Default)]
pub struct ConfigOverrides {
    pub m: Option<u32>,
    pub q_candidates: Option<Vec<Rational>>,
    pub r_grid_step: Option<Rational>,
    pub tol_geom: Option<f64>,
    pub tol_logic: Option<f64>,
    pub tol_mult: Option<f64>,
    pub sample_budget: Option<usize>,
    pub seed: Option<u64>,
    pub vec_eq: Option<VecEqEncoding>,
}

impl ConfigOverrides {
    pub fn apply(&self, c: &mut Config) {
        if let Some(m) = self.m {
            c.m = Some(m);
        }
        if let Some(q) = &self.q_candidates {
            c.q_candidates = q.clone();
        }
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { c.$f = v; })* };
        }
        set!(r_grid_step, tol_geom, tol_logic, tol_mult, sample_budget, seed, vec_eq);
    }
}

/// Largest `M` tried when searching for the default.
const MAX_M: u32 = 1000;

impl Config {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// [`Config::load`] followed by the overrides.
    pub fn resolve(path: Option<&Path>, overrides: &ConfigOverrides) -> Result<Self, HarnessError> {
        let mut c = Config::load(path)?;
        overrides.apply(&mut c);
        Ok(c)
    }

    /// Reads `path`, or the file named by `NORMLOGIC_CONFIG`, or returns the
    /// defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, HarnessError> {
        let path: Option<PathBuf> = match path {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
        };
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| HarnessError::io(&p, e))?;
                Config::from_json(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", p.display())))
            }
        }
    }

    /// The configured `M`, or the smallest one passing the concavity gate.
    pub fn resolved_m(&self) -> Result<u32, HarnessError> {
        match self.m {
            Some(m) => Ok(m),
            None => smallest_concave_m(MAX_M)
                .ok_or_else(|| HarnessError::Config(format!("no M ≤ {MAX_M} passes the concavity gate"))),
        }
    }

    pub fn construction_options(&self) -> ConstructionOptions {
        ConstructionOptions {
            q_candidates: self.q_candidates.clone(),
            r_grid_step: self.r_grid_step,
            tol: self.tol_geom,
            ..ConstructionOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(Config::from_json("{}").unwrap(), Config::default());
        assert_eq!(Config::default().resolved_m().unwrap(), 1);
    }

    #[test]
    fn keys_and_rationals() {
        let c = Config::from_json(r#"{"M": 3, "qCandidates": ["1/2", "1/10"], "rGridStep": "1/32", "seed": 7}"#)
            .unwrap();
        assert_eq!(c.m, Some(3));
        assert_eq!(c.q_candidates, vec![Rational::new(1, 2), Rational::new(1, 10)]);
        assert_eq!(c.r_grid_step, Rational::new(1, 32));
        assert!(Config::from_json(r#"{"qCandidates": ["x"]}"#).is_err());
        assert!(Config::from_json(r#"{"unknown": 1}"#).is_err());
        let round = Config::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(round, c);
    }
}
