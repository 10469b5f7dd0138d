//! A user-defined model and constraint set, with a non-uniform base density.

use cgsa::domain::{BaseDensity, ConstrainedModel, Constraint, ConstraintSet, Marginal};
use cgsa::estimators::{full_analysis, EstimatorConfig};
use cgsa::quadrature::{quadrature_indices, GridSpec};
use cgsa::sampling::StreamKind;

pub fn main() -> cgsa::Result<()> {
    // Ishigami-like response on a wedge cut by two linear constraints.
    let f = |x: &[f64]| {
        let t = |v: f64| std::f64::consts::PI * (2.0 * v - 1.0);
        t(x[0]).sin() + 7.0 * t(x[1]).sin().powi(2) + 0.1 * t(x[2]).powi(4) * t(x[0]).sin()
    };
    let constraints = ConstraintSet::new()
        .with(Constraint::new("x1 + x2 <= 1.5", |x| 1.5 - x[0] - x[1]))
        .with(Constraint::new("x3 >= x1 / 2", |x| x[2] - 0.5 * x[0]));
    let model = ConstrainedModel::new("wedge", 3, f)?.with_constraints(constraints);

    let q = quadrature_indices(&model, &GridSpec::unit(65, 3)?)?;
    let e = full_analysis(&model, &EstimatorConfig::new(1 << 14), StreamKind::LowDiscrepancy { skip: 0 })?;
    println!("I_bar: quadrature {:.4}, qmc {:.4}", q.scaling, e.scaling());
    for i in 0..3 {
        println!(
            "x{}: S {:.4} / {:.4}   S^T {:.4} / {:.4}",
            i + 1,
            q.main[i],
            e.main[i],
            q.total[i],
            e.total[i]
        );
    }

    // Triangular base density on x1 (peak at 0), uniform elsewhere.
    let uniform = || Marginal::new(|_| 1.0, |u| u);
    let triangular = Marginal::new(|v| 2.0 * (1.0 - v), |u| 1.0 - (1.0 - u).sqrt());
    let weighted = model.with_base_density(BaseDensity::Product(vec![triangular, uniform(), uniform()]))?;
    let w = quadrature_indices(&weighted, &GridSpec::unit(65, 3)?)?;
    let m = full_analysis(&weighted, &EstimatorConfig::new(1 << 14), StreamKind::Pseudorandom { seed: 3 })?;
    println!("weighted x1: S {:.4} / {:.4}   S^T {:.4} / {:.4}", w.main[0], m.main[0], w.total[0], m.total[0]);
    Ok(())
}
