//! Parabolic constraint x2 >= beta x1 (1 - x1) with beta = 4: the brute-force
//! midpoint oracle, its Richardson estimate, and the trapezoid grid.

use cgsa::benchmarks::{oracle_indices, reference};
use cgsa::quadrature::{quadrature_indices, GridSpec};

pub fn main() -> cgsa::Result<()> {
    let exact = reference("g_parabolic_4")?;
    let model = exact.problem()?;

    let o = oracle_indices(&model, 2048)?;
    println!("oracle m = {} (and {}):", o.resolution, o.resolution / 2);
    println!("  f0 {:.7} +- {:.1e}", o.extrapolated.f0, o.error.f0);
    println!("  D  {:.7} +- {:.1e}", o.extrapolated.d, o.error.d);
    for i in 0..2 {
        println!(
            "  S_{0} {1:.7} +- {2:.1e}   S_{0}^T {3:.7} +- {4:.1e}",
            i + 1,
            o.extrapolated.main[i],
            o.error.main[i],
            o.extrapolated.total[i],
            o.error.total[i]
        );
    }
    println!("closed form: f0 {:.7} D {:.7} S {:.7?}", exact.f0, exact.d, exact.main);

    for k in [65, 129, 257, 513] {
        let q = quadrature_indices(&model, &GridSpec::unit(k, 2)?)?;
        let err = q.main.iter().zip(&exact.main).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("trapezoid k = {k:>3}: S {:.6?}  max error {err:.1e}", q.main);
    }
    Ok(())
}
