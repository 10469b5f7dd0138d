//! RMSE of every index against the alpha = pi/6 reference as N grows, for
//! pseudorandom and Sobol' streams. Pass `--full` for L = 50 over 2^10..2^18.

use cgsa::benchmarks::reference;
use cgsa::harness::{run_convergence, ExperimentConfig, Method};

pub fn main() -> cgsa::Result<()> {
    let full = std::env::args().any(|a| a == "--full");
    let r = reference("g_linear_pi6")?;
    for method in [Method::Mc, Method::Qmc] {
        let mut config = ExperimentConfig { method, seed: 1, ..Default::default() };
        if !full {
            config.schedule = vec![1 << 8, 1 << 10, 1 << 12];
            config.replicates = 8;
        }
        let report = run_convergence(&config, &r)?;
        println!("{method}, L = {}", report.replicates);
        for s in &report.series {
            let errs: Vec<String> = s.points.iter().map(|p| format!("{:.1e}", p.rmse)).collect();
            let slope = s.fit.map_or(f64::NAN, |f| f.slope);
            println!("  {:<6} slope {slope:>6.2}  rmse {}", s.index, errs.join(" "));
        }
    }
    Ok(())
}
