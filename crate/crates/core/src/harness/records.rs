use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::OutputFormat;
use crate::error::Result;
use crate::estimators::IndexEstimate;
use crate::quadrature::QuadratureResult;

/// One variable of one run, as written to CSV or JSON.
///
/// `seed` is the pseudorandom seed, the sequence skip for low-discrepancy
/// runs, and the configured seed for quadrature. `N` is the grid size `k`
/// for quadrature, `N_CPU` the number of model evaluations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub variable: usize,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "S_T")]
    pub s_t: f64,
    pub estimator: String,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "N_y")]
    pub n_y: Option<u64>,
    #[serde(rename = "N'_z")]
    pub nz_aux: Option<u64>,
    #[serde(rename = "I_bar")]
    pub scaling: f64,
    pub f0: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "N_CPU")]
    pub n_cpu: u64,
    pub skipped_terms: u64,
    pub seed: u64,
    /// `;`-separated warnings, e.g. `negative_S`.
    pub flags: String,
}

pub const RECORD_COLUMNS: [&str; 14] = [
    "variable",
    "S",
    "S_T",
    "estimator",
    "N",
    "N_y",
    "N'_z",
    "I_bar",
    "f0",
    "D",
    "N_CPU",
    "skipped_terms",
    "seed",
    "flags",
];

pub fn estimate_records(e: &IndexEstimate, seed: u64) -> Vec<ResultRecord> {
    (0..e.dimension())
        .map(|i| ResultRecord {
            variable: i + 1,
            s: e.main[i],
            s_t: e.total[i],
            estimator: e.strategy.label().into(),
            n: e.n as u64,
            n_y: Some(e.n_bins as u64),
            nz_aux: Some(e.aux_count as u64),
            scaling: e.scaling(),
            f0: e.f0(),
            d: e.variance(),
            n_cpu: e.n_cpu as u64,
            skipped_terms: e.skipped[i] as u64,
            seed,
            flags: e.flags(i).join(";"),
        })
        .collect()
}

pub fn quadrature_records(r: &QuadratureResult, seed: u64) -> Vec<ResultRecord> {
    (0..r.dimension())
        .map(|i| {
            let mut flags = Vec::new();
            if r.main[i] < 0.0 {
                flags.push("negative_S");
            }
            if r.total[i] < 0.0 {
                flags.push("negative_S_T");
            }
            ResultRecord {
                variable: i + 1,
                s: r.main[i],
                s_t: r.total[i],
                estimator: "quadrature".into(),
                n: r.k as u64,
                n_y: None,
                nz_aux: None,
                scaling: r.scaling,
                f0: r.f0,
                d: r.d,
                n_cpu: r.nodes.min(u64::MAX as u128) as u64,
                skipped_terms: 0,
                seed,
                flags: flags.join(";"),
            }
        })
        .collect()
}

pub fn write_records<W: Write>(records: &[ResultRecord], format: OutputFormat, mut out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(RECORD_COLUMNS)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn read_records_csv(text: &str) -> Result<Vec<ResultRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<std::result::Result<Vec<_>, _>>()?)
}
