//! Runs an experiment from a JSON configuration and writes the flat result
//! records, then exports the reference table.

use cgsa::benchmarks::reference_table_json;
use cgsa::harness::{run_estimate, write_records, ExperimentConfig, OutputFormat};

pub fn main() -> cgsa::Result<()> {
    let mut config = ExperimentConfig::from_json(
        r#"{
            "model": "kfunction",
            "model_params": [4],
            "constraint": "k_i3",
            "constraint_params": [],
            "method": "qmc",
            "schedule": [16384],
            "seed": 7
        }"#,
    )?;
    config.apply_seed_env()?;

    let result = run_estimate(&config)?;
    write_records(&result.records(&config), OutputFormat::Csv, std::io::stdout().lock())?;

    config.method = "quadrature".parse()?;
    config.grid_k = 17;
    let result = run_estimate(&config)?;
    write_records(&result.records(&config), OutputFormat::Json, std::io::stdout().lock())?;

    let table = reference_table_json()?;
    println!("reference table: {} bytes of JSON", table.len());
    Ok(())
}
