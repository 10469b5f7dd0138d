use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Method, OutputFormat};
use crate::benchmarks::ReferenceCase;
use crate::error::{Error, Result};
use crate::estimators::{analyze_design, IndexEstimate, Strategy};
use crate::sampling::{PairedDesign, PointStream};

/// Least-squares trend `rmse ≈ c N_CPU^slope`, fitted in log10–log10.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    pub c: f64,
    pub slope: f64,
}

/// Ordinary least squares of `log10 y` on `log10 x` over the points where
/// both are positive; at least three such points are required.
pub fn fit_trend(x: &[f64], y: &[f64]) -> Result<TrendFit> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.log10(), b.log10()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "trend fit needs at least 3 positive points, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("trend fit needs distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    Ok(TrendFit {
        c: 10f64.powf(my - slope * mx),
        slope,
    })
}

/// `ε = sqrt(mean(((I* - I0) / I0)²))`, or the absolute version when
/// `I0 = 0`. Returns the error and whether it is relative.
pub fn rmse(estimates: &[f64], reference: f64) -> (f64, bool) {
    let relative = reference != 0.0;
    let scale = if relative { reference } else { 1.0 };
    let ms = estimates
        .iter()
        .map(|e| ((e - reference) / scale).powi(2))
        .sum::<f64>()
        / estimates.len() as f64;
    (ms.sqrt(), relative)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub n: usize,
    pub n_cpu: usize,
    pub rmse: f64,
}

/// Error history of one index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSeries {
    /// `S_i` or `S_i^T`.
    pub index: String,
    pub reference: f64,
    /// False when the reference is zero and the error is absolute.
    pub relative: bool,
    pub points: Vec<ConvergencePoint>,
    pub fit: Option<TrendFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub estimator: String,
    pub method: Method,
    pub replicates: usize,
    pub reference: String,
    pub seed: u64,
    pub series: Vec<IndexSeries>,
}

impl ConvergenceReport {
    pub fn series(&self, index: &str) -> Option<&IndexSeries> {
        self.series.iter().find(|s| s.index == index)
    }

    pub fn slope(&self, index: &str) -> Option<f64> {
        self.series(index).and_then(|s| s.fit).map(|f| f.slope)
    }
}

/// DLR and modified-Sobol' main effects on the same designs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorComparison {
    pub dlr: ConvergenceReport,
    pub modified: ConvergenceReport,
    /// Per variable: DLR main-effect RMSE is lower at the largest `N_CPU`.
    pub dlr_lower: Vec<bool>,
    pub summary: String,
}

fn check_reference(config: &ExperimentConfig, reference: &ReferenceCase) -> Result<usize> {
    config.validate()?;
    if config.method == Method::Quadrature {
        return Err(Error::config("method", "convergence studies need mc or qmc"));
    }
    let dim = config.problem()?.dimension();
    if reference.dimension() != dim {
        return Err(Error::config(
            "reference",
            format!("case {} has {} variables, model has {dim}", reference.id, reference.dimension()),
        ));
    }
    Ok(dim)
}

/// Runs every `(N, replicate)` pair, each with its own stream, and returns
/// the estimates for each strategy ordered by `(N, replicate)`.
fn replicate_runs(config: &ExperimentConfig, strategies: &[Strategy]) -> Result<Vec<Vec<IndexEstimate>>> {
    let model = config.problem()?;
    let jobs: Vec<(usize, usize)> = config
        .schedule
        .iter()
        .flat_map(|&n| (0..config.replicates).map(move |r| (n, r)))
        .collect();
    jobs.par_iter()
        .map(|&(n, r)| {
            let kind = config.stream_kind(r)?;
            let mut stream = PointStream::new(kind, PairedDesign::stream_dimension(model.dimension()))?;
            let design = PairedDesign::draw(&mut stream, &model, n, config.nz_aux)?;
            strategies
                .iter()
                .map(|&s| {
                    let mut ec = config.estimator_config(n);
                    ec.strategy = s;
                    analyze_design(&design, &ec)
                })
                .collect()
        })
        .collect()
}

fn build_report(
    config: &ExperimentConfig,
    reference: &ReferenceCase,
    estimator: &str,
    runs: &[&IndexEstimate],
    include_totals: bool,
) -> ConvergenceReport {
    let dim = reference.dimension();
    let l = config.replicates;
    let mut series = Vec::new();
    let mut push = |index: String, reference: f64, get: &dyn Fn(&IndexEstimate) -> f64| {
        let mut relative = true;
        let points: Vec<ConvergencePoint> = runs
            .chunks(l)
            .map(|block| {
                let est: Vec<f64> = block.iter().map(|e| get(e)).collect();
                let (err, rel) = rmse(&est, reference);
                relative = rel;
                ConvergencePoint {
                    n: block[0].n,
                    n_cpu: block[0].n_cpu,
                    rmse: err,
                }
            })
            .collect();
        let x: Vec<f64> = points.iter().map(|p| p.n_cpu as f64).collect();
        let y: Vec<f64> = points.iter().map(|p| p.rmse).collect();
        series.push(IndexSeries {
            index,
            reference,
            relative,
            fit: fit_trend(&x, &y).ok(),
            points,
        });
    };
    for i in 0..dim {
        push(format!("S_{}", i + 1), reference.main[i], &|e| e.main[i]);
    }
    if include_totals {
        for i in 0..dim {
            push(format!("S_{}^T", i + 1), reference.total[i], &|e| e.total[i]);
        }
    }
    ConvergenceReport {
        estimator: estimator.into(),
        method: config.method,
        replicates: l,
        reference: reference.id.clone(),
        seed: match config.method {
            Method::Qmc => config.skip,
            _ => config.seed,
        },
        series,
    }
}

/// Replicate-averaged RMSE of every main and total effect over the sample
/// size schedule, with fitted log-log slopes.
pub fn run_convergence(config: &ExperimentConfig, reference: &ReferenceCase) -> Result<ConvergenceReport> {
    check_reference(config, reference)?;
    let runs = replicate_runs(config, &[config.strategy])?;
    let flat: Vec<&IndexEstimate> = runs.iter().map(|r| &r[0]).collect();
    Ok(build_report(config, reference, config.strategy.label(), &flat, true))
}

/// DLR against modified-Sobol' main effects at matched `N_CPU`.
pub fn run_estimator_comparison(config: &ExperimentConfig, reference: &ReferenceCase) -> Result<EstimatorComparison> {
    let dim = check_reference(config, reference)?;
    let runs = replicate_runs(config, &[Strategy::PooledDlr, Strategy::Modified])?;
    let dlr_runs: Vec<&IndexEstimate> = runs.iter().map(|r| &r[0]).collect();
    let sk_runs: Vec<&IndexEstimate> = runs.iter().map(|r| &r[1]).collect();
    let dlr = build_report(config, reference, "dlr", &dlr_runs, false);
    let modified = build_report(config, reference, "sk", &sk_runs, false);
    let mut dlr_lower = Vec::new();
    let mut lines = Vec::new();
    for i in 0..dim {
        let a = dlr.series[i].points.last().unwrap();
        let b = modified.series[i].points.last().unwrap();
        dlr_lower.push(a.rmse < b.rmse);
        lines.push(format!(
            "S_{}: dlr {:.3e} vs sk {:.3e} at N_CPU = {} ({} lower)",
            i + 1,
            a.rmse,
            b.rmse,
            a.n_cpu,
            if a.rmse < b.rmse { "dlr" } else { "sk" }
        ));
    }
    Ok(EstimatorComparison {
        dlr,
        modified,
        dlr_lower,
        summary: lines.join("\n"),
    })
}

#[derive(Serialize)]
struct SeriesRow<'a> {
    estimator: &'a str,
    method: String,
    index: &'a str,
    reference: f64,
    relative: bool,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "N_CPU")]
    n_cpu: usize,
    rmse: f64,
    slope: Option<f64>,
    c: Option<f64>,
    replicates: usize,
    seed: u64,
}

/// One row per (estimator, index, N); JSON writes the reports themselves.
pub fn write_convergence<W: Write>(reports: &[&ConvergenceReport], format: OutputFormat, mut out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in reports {
                let method = r.method.to_string();
                for s in &r.series {
                    for p in &s.points {
                        w.serialize(SeriesRow {
                            estimator: &r.estimator,
                            method: method.clone(),
                            index: &s.index,
                            reference: s.reference,
                            relative: s.relative,
                            n: p.n,
                            n_cpu: p.n_cpu,
                            rmse: p.rmse,
                            slope: s.fit.map(|f| f.slope),
                            c: s.fit.map(|f| f.c),
                            replicates: r.replicates,
                            seed: r.seed,
                        })?;
                    }
                }
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, reports)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
