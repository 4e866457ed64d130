//! Run configuration document (bhwalk-config-v1) and its defaults.

use serde::{Deserialize, Serialize};

use bhwalk_core::fock::DEFAULT_DIM_CAP;
use bhwalk_core::schedule::Policy;

pub const CONFIG_SCHEMA: &str = "bhwalk-config-v1";

/// Environment variable overriding the Fock-dimension cap.
pub const DIM_CAP_ENV: &str = "BHWALK_DIM_CAP";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default = "default_u")]
    pub u: f64,
    #[serde(default = "default_dim_cap")]
    pub dim_cap: usize,
    #[serde(default = "default_tol_leak")]
    pub tol_leak: f64,
    #[serde(default = "default_tol_op")]
    pub tol_op: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_policy")]
    pub policy: Policy,
}

fn default_u() -> f64 {
    1.0
}

fn default_dim_cap() -> usize {
    DEFAULT_DIM_CAP
}

fn default_tol_leak() -> f64 {
    1e-8
}

fn default_tol_op() -> f64 {
    1e-8
}

fn default_policy() -> Policy {
    Policy::GreedyLayer
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            u: default_u(),
            dim_cap: default_dim_cap(),
            tol_leak: default_tol_leak(),
            tol_op: default_tol_op(),
            seed: 0,
            policy: default_policy(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.u.is_finite() && self.u > 0.0) {
            return Err(format!("interaction u must be positive, got {}", self.u));
        }
        for (name, value) in [("tol_leak", self.tol_leak), ("tol_op", self.tol_op)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(format!("{name} must lie in (0, 1), got {value}"));
            }
        }
        Ok(())
    }

    /// Apply the dimension-cap environment override, if set.
    pub fn apply_env(&mut self) -> Result<(), String> {
        if let Ok(text) = std::env::var(DIM_CAP_ENV) {
            self.dim_cap = text
                .parse()
                .map_err(|e| format!("{DIM_CAP_ENV}={text:?} is not a dimension: {e}"))?;
        }
        Ok(())
    }

    /// Fold command-line overrides into the file-supplied values.
    pub fn override_with(&mut self, u: Option<f64>, policy: Option<Policy>, seed: Option<u64>) {
        if let Some(u) = u {
            self.u = u;
        }
        if let Some(policy) = policy {
            self.policy = policy;
        }
        if let Some(seed) = seed {
            self.seed = seed;
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigDoc {
    schema: String,
    #[serde(flatten)]
    body: RunConfig,
}

pub fn from_json(text: &str) -> Result<RunConfig, String> {
    let doc: ConfigDoc = serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))?;
    if doc.schema != CONFIG_SCHEMA {
        return Err(format!(
            "config schema {:?} does not match expected {CONFIG_SCHEMA:?}",
            doc.schema
        ));
    }
    Ok(doc.body)
}
