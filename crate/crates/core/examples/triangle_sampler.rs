//! Direct sampling of the uniform density on x1 + x2 >= 1 by conditional
//! inverse CDFs, and the estimators that use the known density.

use cgsa::domain::{builtin_problem, BuiltinConstraint, BuiltinModel};
use cgsa::estimators::{full_analysis, known_pdf_estimators, EstimatorConfig};
use cgsa::sampling::{draw_conditional_batch, draw_conditional_design, triangle_inverse_cdfs, PointStream, StreamKind};

pub fn main() -> cgsa::Result<()> {
    let model = builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle)?;
    let cdfs = triangle_inverse_cdfs();

    let mut stream = PointStream::pseudorandom(11, 2)?;
    let batch = draw_conditional_batch(&mut stream, &model, &cdfs, 100_000)?;
    let mean_x1 = (0..batch.len()).map(|l| batch.coord(l, 0)).sum::<f64>() / batch.len() as f64;
    println!(
        "{} points, {} feasible, mean x1 = {mean_x1:.4} (expected 0.6667)",
        batch.len(),
        batch.accepted_count()
    );

    let n = 1 << 16;
    let mut stream = PointStream::pseudorandom(12, 4)?;
    let design = draw_conditional_design(&mut stream, &model, &cdfs, n)?;
    let kp = known_pdf_estimators(&design, &model, 256)?;
    let ar = full_analysis(&model, &EstimatorConfig::new(n), StreamKind::Pseudorandom { seed: 13 })?;
    println!("            {:>8} {:>8} {:>8}", "S (dlr)", "S (sk)", "S^T");
    println!("known pdf   {:>8.4} {:>8.4} {:>8.4}", kp.main_dlr[0], kp.main_sk[0], kp.total[0]);
    println!("rejection   {:>8.4} {:>8} {:>8.4}", ar.main[0], "", ar.total[0]);
    println!("exact       {:>8.4} {:>8.4} {:>8.4}", 7.0 / 27.0, 7.0 / 27.0, 20.0 / 27.0);
    Ok(())
}
