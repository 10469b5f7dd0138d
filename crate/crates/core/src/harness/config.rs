use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{builtin_problem, BuiltinConstraint, BuiltinModel, ConstrainedModel};
use crate::error::{Error, Result};
use crate::estimators::{EstimatorConfig, Strategy, DEFAULT_AUX_COUNT};
use crate::sampling::StreamKind;

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "CGSA_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mc,
    #[default]
    Qmc,
    Quadrature,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mc" => Ok(Method::Mc),
            "qmc" => Ok(Method::Qmc),
            "quadrature" => Ok(Method::Quadrature),
            other => Err(Error::Unknown {
                kind: "method",
                name: other.into(),
            }),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Mc => "mc",
            Method::Qmc => "qmc",
            Method::Quadrature => "quadrature",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modified" | "sk" | "a" => Ok(Strategy::Modified),
            "pooled_dlr" | "dlr" | "b" => Ok(Strategy::PooledDlr),
            other => Err(Error::Unknown {
                kind: "strategy",
                name: other.into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Unknown {
                kind: "format",
                name: other.into(),
            }),
        }
    }
}

/// `2^10, 2^12, ..., 2^18`.
pub fn default_schedule() -> Vec<usize> {
    (0..5).map(|k| 1usize << (10 + 2 * k)).collect()
}

/// Everything needed to reproduce a run. Missing JSON fields take the
/// defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: String,
    pub model_params: Vec<f64>,
    pub constraint: String,
    pub constraint_params: Vec<f64>,
    pub method: Method,
    pub strategy: Strategy,
    /// Strictly increasing sample sizes; single runs use the largest.
    pub schedule: Vec<usize>,
    /// `N_y`; `round(sqrt(N))` when unset.
    pub bins: Option<usize>,
    /// `N'_z`.
    pub nz_aux: usize,
    pub grid_k: usize,
    pub bracket: bool,
    /// Replicates `L` of convergence studies.
    pub replicates: usize,
    pub seed: u64,
    /// Sequence offset of the first low-discrepancy replicate.
    pub skip: u64,
    /// Reference case id for convergence studies.
    pub reference: Option<String>,
    /// Constraint parameters of a sweep.
    pub sweep_values: Vec<f64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: "gfunction".into(),
            model_params: vec![0.0, 1.0],
            constraint: "linear_alpha".into(),
            constraint_params: vec![std::f64::consts::FRAC_PI_6],
            method: Method::default(),
            strategy: Strategy::default(),
            schedule: default_schedule(),
            bins: None,
            nz_aux: DEFAULT_AUX_COUNT,
            grid_k: 257,
            bracket: false,
            replicates: 50,
            seed: 0,
            skip: 0,
            reference: None,
            sweep_values: Vec::new(),
            out: None,
            format: OutputFormat::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Replaces the seed with the value of [`SEED_ENV`] when it is set.
    pub fn apply_seed_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| Error::config("seed", format!("{SEED_ENV}={v:?} is not an unsigned integer")))?;
        }
        Ok(())
    }

    pub fn builtin_model(&self) -> Result<BuiltinModel> {
        BuiltinModel::from_name(&self.model, &self.model_params)
            .map_err(|e| Error::config("model", e.to_string()))
    }

    pub fn builtin_constraint(&self) -> Result<BuiltinConstraint> {
        BuiltinConstraint::from_name(&self.constraint, &self.constraint_params)
            .map_err(|e| Error::config("constraint", e.to_string()))
    }

    pub fn problem(&self) -> Result<ConstrainedModel> {
        builtin_problem(&self.builtin_model()?, &self.builtin_constraint()?)
            .map_err(|e| Error::config("constraint", e.to_string()))
    }

    pub fn largest_n(&self) -> usize {
        self.schedule.last().copied().unwrap_or(0)
    }

    pub fn estimator_config(&self, n: usize) -> EstimatorConfig {
        EstimatorConfig {
            n,
            n_bins: self.bins,
            aux_count: self.nz_aux,
            strategy: self.strategy,
        }
    }

    /// Stream of replicate `r`: seed `seed + r`, or skip `skip + r N_max`.
    pub fn stream_kind(&self, replicate: usize) -> Result<StreamKind> {
        match self.method {
            Method::Mc => Ok(StreamKind::Pseudorandom {
                seed: self.seed.wrapping_add(replicate as u64),
            }),
            Method::Qmc => Ok(StreamKind::LowDiscrepancy {
                skip: self.skip + replicate as u64 * self.largest_n() as u64,
            }),
            Method::Quadrature => Err(Error::config("method", "quadrature has no sample stream")),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.problem()?;
        if self.schedule.is_empty() {
            return Err(Error::config("schedule", "at least one sample size is required"));
        }
        if self.schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("schedule", "sample sizes must be strictly increasing"));
        }
        if self.replicates == 0 {
            return Err(Error::config("replicates", "L must be >= 1"));
        }
        if self.nz_aux == 0 {
            return Err(Error::config("nz_aux", "N'_z must be >= 1"));
        }
        if self.grid_k < 4 {
            return Err(Error::config("grid_k", format!("k must be >= 4, got {}", self.grid_k)));
        }
        if self.method != Method::Quadrature {
            for &n in &self.schedule {
                self.estimator_config(n)
                    .validate()
                    .map_err(|e| Error::config("schedule", format!("N = {n}: {e}")))?;
            }
        }
        Ok(())
    }
}
