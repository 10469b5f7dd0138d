//! K-function (n = 4) without constraints and under I1, I2, I3.

use cgsa::benchmarks::reference;
use cgsa::quadrature::{quadrature_indices, GridSpec};

pub fn main() -> cgsa::Result<()> {
    let k = 33;
    for id in ["k_unconstrained", "k_i1", "k_i2", "k_i3"] {
        let r = reference(id)?;
        let q = quadrature_indices(&r.problem()?, &GridSpec::unit(k, 4)?)?;
        println!("{id} ({}), k = {k}, I_bar = {:.4}", r.constraint, q.scaling);
        for i in 0..4 {
            println!(
                "  x{}: S {:.4} (exact {:.4})  S^T {:.4} (exact {:.4})",
                i + 1,
                q.main[i],
                r.main[i],
                q.total[i],
                r.total[i]
            );
        }
    }
    Ok(())
}
