//! Indices of the g-function as the linear constraint tilts from alpha = 0
//! (no constraint) towards pi/2, written as CSV.

use cgsa::harness::{annotate_sweep, run_sweep, ExperimentConfig};
use cgsa::quadrature::write_sweep_csv;

pub fn main() -> cgsa::Result<()> {
    let steps = 12;
    let config = ExperimentConfig {
        grid_k: 129,
        sweep_values: (0..steps).map(|j| j as f64 / steps as f64 * 1.5).collect(),
        ..Default::default()
    };
    let rows = run_sweep(&config)?;
    write_sweep_csv(&rows, 2, std::io::stdout().lock())?;
    for note in annotate_sweep(&config, &rows) {
        eprintln!("{note}");
    }
    Ok(())
}
