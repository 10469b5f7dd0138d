//! f(x) = x1 x2 on the triangle x1 + x2 >= 1: quadrature, Monte Carlo and
//! quasi-Monte Carlo against the exact values.

use cgsa::benchmarks::reference;
use cgsa::estimators::{full_analysis, EstimatorConfig};
use cgsa::quadrature::{quadrature_indices, GridSpec};
use cgsa::sampling::StreamKind;

pub fn main() -> cgsa::Result<()> {
    let exact = reference("product_triangle")?;
    let model = exact.problem()?;

    println!("{:<12} {:>9} {:>9} {:>9} {:>9} {:>9}", "method", "f0", "D", "S_1", "S_1^T", "I_bar");
    println!(
        "{:<12} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
        "exact", exact.f0, exact.d, exact.main[0], exact.total[0], 0.5
    );

    let q = quadrature_indices(&model, &GridSpec::unit(257, 2)?)?;
    println!(
        "{:<12} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
        "quadrature", q.f0, q.d, q.main[0], q.total[0], q.scaling
    );

    let config = EstimatorConfig::new(1 << 14);
    for (label, kind) in [
        ("mc", StreamKind::Pseudorandom { seed: 1 }),
        ("qmc", StreamKind::LowDiscrepancy { skip: 0 }),
    ] {
        let e = full_analysis(&model, &config, kind)?;
        println!(
            "{:<12} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            label,
            e.f0(),
            e.variance(),
            e.main[0],
            e.total[0],
            e.scaling()
        );
    }
    Ok(())
}
