//! A small disk inside the unit square: the bounding box found by probing,
//! and quadrature on the box against quadrature on the full cube.

use cgsa::domain::{builtin_problem, BuiltinConstraint, BuiltinModel};
use cgsa::quadrature::{quadrature_indices, GridSpec};
use cgsa::sampling::bracket_domain;

pub fn main() -> cgsa::Result<()> {
    let disk = BuiltinConstraint::Disk { center: [0.3, 0.6], radius: 0.15 };
    let model = builtin_problem(&BuiltinModel::GFunction { a: vec![0.0, 1.0] }, &disk)?;

    let bbox = bracket_domain(&model, 65)?;
    println!("box {:?} .. {:?}, volume {:.4}", bbox.lower, bbox.upper, bbox.volume());

    let k = 129;
    let cube = quadrature_indices(&model, &GridSpec::unit(k, 2)?)?;
    let boxed = quadrature_indices(&model, &GridSpec::bracketed(&model, k)?)?;
    println!("full cube: I_bar {:.5}  S {:.4?}  S^T {:.4?}", cube.scaling, cube.main, cube.total);
    println!("bracketed: I_bar {:.5}  S {:.4?}  S^T {:.4?}", boxed.scaling, boxed.main, boxed.total);
    println!("exact I_bar {:.5}", std::f64::consts::PI * 0.15 * 0.15);
    Ok(())
}
