//! Monte Carlo and quasi-Monte Carlo estimators of `f0`, `D`, `Ī` and the
//! main and total effect indices.

mod acceptance;
mod bins;
mod known_pdf;
mod moments;

use serde::{Deserialize, Serialize};

pub use acceptance::{dlr_from_bins, dlr_main_effect, sk_main_effect, total_effect};
pub use bins::{partition_bins, BinPartition};
pub use known_pdf::{known_pdf_estimators, KnownPdfEstimate};
pub use moments::{estimate_mean_variance, estimate_scaling, moments_of, Moments};

use crate::domain::ConstrainedModel;
use crate::error::{Error, Result};
use crate::sampling::{PairedDesign, PointStream, SampleBatch, StreamDescriptor, StreamKind};

/// Default number of auxiliary points for the marginal density of `z`.
pub const DEFAULT_AUX_COUNT: usize = 64;

/// How the set of main and total effects is computed from one paired design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Modified-Sobol' main effects and paired total effects; moments from `A` and `B`.
    Modified,
    /// DLR main effects over every evaluated point of the design, paired
    /// total effects; moments from the same pool.
    #[default]
    PooledDlr,
}

impl Strategy {
    pub fn main_label(&self) -> &'static str {
        match self {
            Strategy::Modified => "sk",
            Strategy::PooledDlr => "dlr",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Strategy::Modified => "sk+total",
            Strategy::PooledDlr => "dlr+total",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Base sample size `N`.
    pub n: usize,
    /// Number of bins `N_y`; `round(sqrt(N))` when unset.
    pub n_bins: Option<usize>,
    /// Auxiliary points `N'_z` per row for the marginal of `z`.
    pub aux_count: usize,
    pub strategy: Strategy,
}

impl EstimatorConfig {
    pub fn new(n: usize) -> Self {
        EstimatorConfig {
            n,
            n_bins: None,
            aux_count: DEFAULT_AUX_COUNT,
            strategy: Strategy::default(),
        }
    }

    pub fn with_bins(mut self, n_bins: usize) -> Self {
        self.n_bins = Some(n_bins);
        self
    }

    pub fn with_aux_count(mut self, aux_count: usize) -> Self {
        self.aux_count = aux_count;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn bins(&self) -> usize {
        self.n_bins
            .unwrap_or_else(|| ((self.n as f64).sqrt().round() as usize).max(2))
    }

    pub fn validate(&self) -> Result<()> {
        let ny = self.bins();
        if self.n < 3 {
            return Err(Error::config("n", format!("sample size must be >= 3, got {}", self.n)));
        }
        if ny < 2 || ny >= self.n {
            return Err(Error::config(
                "bins",
                format!("need 2 <= N_y < N, got N_y = {ny}, N = {}", self.n),
            ));
        }
        if self.aux_count == 0 {
            return Err(Error::config("nz_aux", "N'_z must be >= 1"));
        }
        Ok(())
    }
}

/// All main and total effects of a model from one paired design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEstimate {
    pub main: Vec<f64>,
    pub total: Vec<f64>,
    /// Total-effect terms skipped for a zero marginal estimate, per variable.
    pub skipped: Vec<usize>,
    pub moments: Moments,
    pub strategy: Strategy,
    pub n: usize,
    pub n_bins: usize,
    pub aux_count: usize,
    /// Model evaluations, `N (n + 2)`.
    pub n_cpu: usize,
    pub source: Option<StreamDescriptor>,
}

impl IndexEstimate {
    pub fn dimension(&self) -> usize {
        self.main.len()
    }

    pub fn scaling(&self) -> f64 {
        self.moments.scaling
    }

    pub fn f0(&self) -> f64 {
        self.moments.f0
    }

    pub fn variance(&self) -> f64 {
        self.moments.d
    }

    /// Warning flags for variable `i` (`negative_S`, `negative_S_T`,
    /// `negative_D`).
    pub fn flags(&self, i: usize) -> Vec<&'static str> {
        let mut f = Vec::new();
        if self.main[i] < 0.0 {
            f.push("negative_S");
        }
        if self.total[i] < 0.0 {
            f.push("negative_S_T");
        }
        if self.moments.negative_variance() {
            f.push("negative_D");
        }
        f
    }
}

/// Draws a paired design of size `config.n` from a stream of the given kind
/// and computes every index with the configured strategy.
pub fn full_analysis(model: &ConstrainedModel, config: &EstimatorConfig, kind: StreamKind) -> Result<IndexEstimate> {
    config.validate()?;
    let mut stream = PointStream::new(kind, PairedDesign::stream_dimension(model.dimension()))?;
    let design = PairedDesign::draw(&mut stream, model, config.n, config.aux_count)?;
    analyze_design(&design, config)
}

/// Indices from an already drawn design.
pub fn analyze_design(design: &PairedDesign, config: &EstimatorConfig) -> Result<IndexEstimate> {
    config.validate()?;
    if design.len() != config.n {
        return Err(Error::Contract(format!(
            "design has {} rows, configuration expects {}",
            design.len(),
            config.n
        )));
    }
    let dim = design.dimension();
    let n_bins = config.bins();
    let (moments, main) = match config.strategy {
        Strategy::Modified => {
            let moments = moments_of(&[design.a(), design.b()])?;
            moments.variance()?;
            let main = (0..dim)
                .map(|i| sk_main_effect(design, i, n_bins, &moments))
                .collect::<Result<Vec<_>>>()?;
            (moments, main)
        }
        Strategy::PooledDlr => {
            let pool = SampleBatch::concat(&design.pool())?;
            let moments = estimate_mean_variance(&pool)?;
            moments.variance()?;
            let main = (0..dim)
                .map(|i| {
                    let bins = partition_bins(&pool, i, n_bins)?;
                    dlr_from_bins(&pool, &bins, &moments)
                })
                .collect::<Result<Vec<_>>>()?;
            (moments, main)
        }
    };
    let (total, skipped) = (0..dim)
        .map(|i| total_effect(design, i, &moments))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    Ok(IndexEstimate {
        main,
        total,
        skipped,
        moments,
        strategy: config.strategy,
        n: config.n,
        n_bins,
        aux_count: design.aux_count(),
        n_cpu: design.evaluations(),
        source: design.source().copied(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{builtin_problem, BuiltinConstraint, BuiltinModel};

    #[test]
    fn config_defaults_and_validation() {
        let c = EstimatorConfig::new(1 << 16);
        assert_eq!(c.bins(), 256);
        assert_eq!(c.aux_count, 64);
        assert!(c.validate().is_ok());
        assert_eq!(EstimatorConfig::new(1000).bins(), 32);
        assert!(EstimatorConfig::new(10).with_bins(10).validate().is_err());
        assert!(EstimatorConfig::new(10).with_bins(1).validate().is_err());
        assert!(EstimatorConfig::new(10).with_aux_count(0).validate().is_err());
    }

    #[test]
    fn strategy_b_reproduces_product_triangle() {
        let m = builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle).unwrap();
        let e = full_analysis(&m, &EstimatorConfig::new(1 << 16), StreamKind::LowDiscrepancy { skip: 0 }).unwrap();
        for i in 0..2 {
            assert!((e.main[i] - 7.0 / 27.0).abs() < 1e-2, "{e:?}");
            assert!((e.total[i] - 20.0 / 27.0).abs() < 2e-2, "{e:?}");
        }
        assert_eq!(e.n_cpu, 4 << 16);
    }

    #[test]
    fn n_cpu_accounting() {
        let m = builtin_problem(&BuiltinModel::KFunction { n: 4 }, &BuiltinConstraint::KI1).unwrap();
        let c = EstimatorConfig::new(1024).with_strategy(Strategy::Modified);
        let e = full_analysis(&m, &c, StreamKind::Pseudorandom { seed: 3 }).unwrap();
        assert_eq!(e.n_cpu, 6144);
        assert_eq!(e.dimension(), 4);
    }

    #[test]
    fn unconstrained_g_function_ordering() {
        let m = builtin_problem(&BuiltinModel::GFunction { a: vec![0.0, 1.0] }, &BuiltinConstraint::None).unwrap();
        for strategy in [Strategy::Modified, Strategy::PooledDlr] {
            let c = EstimatorConfig::new(1 << 14).with_strategy(strategy);
            let e = full_analysis(&m, &c, StreamKind::Pseudorandom { seed: 8 }).unwrap();
            assert_eq!(e.scaling(), 1.0);
            assert!(e.main[0] > e.main[1] && e.total[0] > e.total[1], "{e:?}");
        }
    }

    #[test]
    fn repeatable_for_fixed_seed() {
        let m = builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle).unwrap();
        let c = EstimatorConfig::new(4096);
        let k = StreamKind::Pseudorandom { seed: 99 };
        assert_eq!(full_analysis(&m, &c, k).unwrap(), full_analysis(&m, &c, k).unwrap());
    }

    #[test]
    fn flags_report_negative_values() {
        let m = builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle).unwrap();
        let mut e = full_analysis(&m, &EstimatorConfig::new(256), StreamKind::Pseudorandom { seed: 1 }).unwrap();
        e.main[0] = -0.01;
        assert_eq!(e.flags(0), vec!["negative_S"]);
    }
}
