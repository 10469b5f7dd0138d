//! Sobol' and pseudorandom point streams: reproducibility, skipping, and
//! acceptance ratios on the triangle.

use cgsa::domain::{builtin_problem, BuiltinConstraint, BuiltinModel};
use cgsa::sampling::{draw_batch, PointStream, Sobol};

pub fn main() -> cgsa::Result<()> {
    let sobol = Sobol::new(2).expect("2 <= max dimension");
    let first: Vec<[f64; 2]> = (0..8)
        .map(|j| {
            let mut x = [0.0; 2];
            sobol.point(j, &mut x);
            x
        })
        .collect();
    println!("first Sobol' points: {first:?}");

    let s = PointStream::low_discrepancy(4, 2)?;
    let mut p = [0.0; 2];
    s.point_at(0, &mut p);
    println!("skip 4 starts at {p:?} (cursor {})", s.cursor());

    let model = builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle)?;
    for k in [10, 14, 18] {
        let n = 1 << k;
        let qmc = draw_batch(&mut PointStream::low_discrepancy(0, 2)?, &model, n)?;
        let mc = draw_batch(&mut PointStream::pseudorandom(5, 2)?, &model, n)?;
        println!(
            "N = 2^{k}: acceptance qmc {:.6}  mc {:.6}",
            qmc.acceptance_ratio(),
            mc.acceptance_ratio()
        );
    }
    Ok(())
}
