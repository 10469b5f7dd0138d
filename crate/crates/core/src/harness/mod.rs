//! Experiment drivers behind the `cgsa` binary: single estimations,
//! convergence studies, constraint sweeps and estimator comparisons.

mod config;
mod convergence;
mod records;

use serde::{Deserialize, Serialize};

pub use config::{default_schedule, ExperimentConfig, Method, OutputFormat, SEED_ENV};
pub use convergence::{
    fit_trend, rmse, run_convergence, run_estimator_comparison, write_convergence, ConvergencePoint,
    ConvergenceReport, EstimatorComparison, IndexSeries, TrendFit,
};
pub use records::{estimate_records, quadrature_records, read_records_csv, write_records, ResultRecord, RECORD_COLUMNS};

use crate::benchmarks::{g_function_unconstrained, reference, reference_cases, ReferenceCase};
use crate::domain::{builtin_problem, BuiltinConstraint, BuiltinModel};
use crate::error::{Error, Result};
use crate::estimators::{full_analysis, IndexEstimate};
use crate::quadrature::{quadrature_indices, sweep_constraint_parameter, GridSpec, QuadratureResult, SweepRow};

/// Outcome of a single estimation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RunResult {
    Sampled(IndexEstimate),
    Quadrature(QuadratureResult),
}

impl RunResult {
    pub fn main(&self) -> &[f64] {
        match self {
            RunResult::Sampled(e) => &e.main,
            RunResult::Quadrature(q) => &q.main,
        }
    }

    pub fn total(&self) -> &[f64] {
        match self {
            RunResult::Sampled(e) => &e.total,
            RunResult::Quadrature(q) => &q.total,
        }
    }

    pub fn records(&self, config: &ExperimentConfig) -> Vec<ResultRecord> {
        match self {
            RunResult::Sampled(e) => {
                let seed = e.source.map(|s| s.kind.seed()).unwrap_or(config.seed);
                estimate_records(e, seed)
            }
            RunResult::Quadrature(q) => quadrature_records(q, config.seed),
        }
    }
}

/// One run: the largest sample size of the schedule, or one grid of
/// `grid_k` nodes per axis.
pub fn run_estimate(config: &ExperimentConfig) -> Result<RunResult> {
    config.validate()?;
    let model = config.problem()?;
    match config.method {
        Method::Quadrature => {
            let grid = if config.bracket {
                GridSpec::bracketed(&model, config.grid_k)?
            } else {
                GridSpec::unit(config.grid_k, model.dimension())?
            };
            Ok(RunResult::Quadrature(quadrature_indices(&model, &grid)?))
        }
        Method::Mc | Method::Qmc => {
            let ec = config.estimator_config(config.largest_n());
            Ok(RunResult::Sampled(full_analysis(&model, &ec, config.stream_kind(0)?)?))
        }
    }
}

/// Quadrature over `config.sweep_values`, each value replacing the
/// constraint parameters.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    if config.sweep_values.is_empty() {
        return Err(Error::config("sweep_values", "a sweep needs at least one parameter value"));
    }
    if config.grid_k < 4 {
        return Err(Error::config("grid_k", format!("k must be >= 4, got {}", config.grid_k)));
    }
    let model = config.builtin_model()?;
    let family = |p: f64| {
        let c = BuiltinConstraint::from_name(&config.constraint, &[p])?;
        builtin_problem(&model, &c)
    };
    Ok(sweep_constraint_parameter(family, &config.sweep_values, config.grid_k, config.bracket))
}

/// The reference case of a convergence study: `config.reference` when set,
/// otherwise the stored case with the same model, constraint and
/// parameters, otherwise the closed form of an unconstrained g-function.
pub fn resolve_reference(config: &ExperimentConfig) -> Result<ReferenceCase> {
    if let Some(id) = &config.reference {
        return reference(id).map_err(|e| Error::config("reference", e.to_string()));
    }
    let same = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
    let model = config.builtin_model()?;
    let constraint = config.builtin_constraint()?;
    if let Some(c) = reference_cases().into_iter().find(|c| {
        BuiltinModel::from_name(&c.model, &c.model_params).ok() == Some(model.clone())
            && same(&c.constraint_params, &config.constraint_params)
            && BuiltinConstraint::from_name(&c.constraint, &c.constraint_params).ok() == Some(constraint.clone())
    }) {
        return Ok(c);
    }
    match (&model, &constraint) {
        (BuiltinModel::GFunction { a }, BuiltinConstraint::None) => Ok(g_function_unconstrained(a)),
        _ => Err(Error::config(
            "reference",
            "no stored reference matches this model and constraint; pass a case id",
        )),
    }
}

/// Notes comparing sweep rows with known values: stored reference cases
/// with the same model and constraint, and the unconstrained g-function
/// where the constraint is vacuous (`alpha = 0`, `beta = 0`).
pub fn annotate_sweep(config: &ExperimentConfig, rows: &[SweepRow]) -> Vec<String> {
    let mut notes = Vec::new();
    let cases = reference_cases();
    for row in rows {
        let Ok(r) = &row.result else {
            notes.push(format!("param {}: failed: {}", row.param, row.result.as_ref().unwrap_err()));
            continue;
        };
        let mut known = cases
            .iter()
            .filter(|c| {
                c.model == config.model
                    && c.model_params == config.model_params
                    && c.constraint == config.constraint
                    && c.constraint_params.len() == 1
                    && (c.constraint_params[0] - row.param).abs() < 1e-12
            })
            .map(|c| (c.id.clone(), c.main.clone(), c.total.clone()))
            .collect::<Vec<_>>();
        let vacuous = row.param == 0.0 && matches!(config.constraint.as_str(), "linear_alpha" | "linear" | "parabolic_beta" | "parabolic");
        if vacuous {
            if let Ok(BuiltinModel::GFunction { a }) = config.builtin_model() {
                let c = g_function_unconstrained(&a);
                known.push((c.id, c.main, c.total));
            }
        }
        for (id, main, total) in known {
            let dev = r
                .main
                .iter()
                .zip(&main)
                .chain(r.total.iter().zip(&total))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            notes.push(format!("param {}: max deviation from {id} = {dev:.2e}", row.param));
        }
    }
    notes
}
