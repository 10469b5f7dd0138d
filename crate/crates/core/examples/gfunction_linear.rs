//! g-function with a = (0, 1) under the linear constraint x2 <= 1 - x1 tan(alpha).

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

use cgsa::benchmarks::reference;
use cgsa::estimators::{full_analysis, EstimatorConfig, Strategy};
use cgsa::quadrature::{quadrature_indices, GridSpec};
use cgsa::sampling::StreamKind;

pub fn main() -> cgsa::Result<()> {
    for (alpha, id) in [(FRAC_PI_6, "g_linear_pi6"), (FRAC_PI_4, "g_linear_pi4")] {
        let r = reference(id)?;
        let model = r.problem()?;
        println!("alpha = {alpha:.4}");
        println!("  {:<14} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}", "", "f0", "D", "S_1", "S_2", "S_1^T", "S_2^T");
        let row = |name: &str, f0: f64, d: f64, s: &[f64], t: &[f64]| {
            println!(
                "  {name:<14} {f0:>8.4} {d:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
                s[0], s[1], t[0], t[1]
            )
        };
        row("reference", r.f0, r.d, &r.main, &r.total);
        let q = quadrature_indices(&model, &GridSpec::unit(513, 2)?)?;
        row("quadrature", q.f0, q.d, &q.main, &q.total);
        for strategy in [Strategy::PooledDlr, Strategy::Modified] {
            let config = EstimatorConfig::new(1 << 16).with_strategy(strategy);
            let e = full_analysis(&model, &config, StreamKind::LowDiscrepancy { skip: 0 })?;
            row(&format!("qmc {}", strategy.label()), e.f0(), e.variance(), &e.main, &e.total);
        }
    }
    Ok(())
}
