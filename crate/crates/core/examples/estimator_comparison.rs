//! Binned (DLR) against modified-Sobol' main effects on identical designs.
//! Pass `--full` for L = 50 over 2^10..2^18.

use cgsa::benchmarks::reference;
use cgsa::harness::{run_estimator_comparison, ExperimentConfig, Method};

pub fn main() -> cgsa::Result<()> {
    let full = std::env::args().any(|a| a == "--full");
    let mut config = ExperimentConfig { method: Method::Mc, seed: 4, ..Default::default() };
    if !full {
        config.schedule = vec![1 << 8, 1 << 10, 1 << 12];
        config.replicates = 8;
    }
    let cmp = run_estimator_comparison(&config, &reference("g_linear_pi6")?)?;
    for (d, s) in cmp.dlr.series.iter().zip(&cmp.modified.series) {
        println!("{}:", d.index);
        for (a, b) in d.points.iter().zip(&s.points) {
            println!("  N_CPU {:>8}  dlr {:.2e}  sk {:.2e}", a.n_cpu, a.rmse, b.rmse);
        }
    }
    println!("{}", cmp.summary);
    Ok(())
}
