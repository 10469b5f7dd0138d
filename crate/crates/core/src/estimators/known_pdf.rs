//! Estimators for samples drawn directly from a known constrained density
//! `p^Ω`, e.g. with [`draw_conditional_design`](crate::sampling::draw_conditional_design).

use serde::{Deserialize, Serialize};

use super::bins::partition_bins;
use super::moments::moments_of;
use crate::domain::{ConstrainedModel, ExplicitPdf};
use crate::error::{Error, Result};
use crate::sampling::PairedDesign;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownPdfEstimate {
    pub f0: f64,
    pub d: f64,
    /// Binned (DLR) main effects.
    pub main_dlr: Vec<f64>,
    /// Modified-Sobol' main effects.
    pub main_sk: Vec<f64>,
    pub total: Vec<f64>,
    pub n: usize,
    pub n_bins: usize,
}

fn positive(v: f64, what: &str, l: usize) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Contract(format!(
            "{what} is {v} at sampled row {l}; sampler and density disagree"
        )))
    }
}

/// Main and total effects with exact density values in place of the
/// indicator and `Ī`.
///
/// With `AB` the point `A` with coordinate `i` taken from `B`, and
/// `w = p^Ω(AB) / (p^Ω_i(B_i) p^Ω_{-i}(A))`:
///
/// * DLR: `S = [(1/N_y) Σ_j mean_j(f)² - f0²] / D`, bins along `A_i`;
/// * modified: `S = 1/(D N) Σ f(B) [f(AB) w - f(A)]`;
/// * total: `S^T = 1/(2 D N) Σ [f(A) - f(AB)]² w`.
pub fn known_pdf_estimators(
    design: &PairedDesign,
    model: &ConstrainedModel,
    n_bins: usize,
) -> Result<KnownPdfEstimate> {
    let pdf: &ExplicitPdf = model
        .explicit_pdf()
        .ok_or_else(|| Error::Contract("model carries no explicit constrained density".into()))?;
    let (a, b) = (design.a(), design.b());
    let n = design.len();
    for l in 0..n {
        positive((pdf.joint)(a.point(l)), "joint density at A", l)?;
        positive((pdf.joint)(b.point(l)), "joint density at B", l)?;
    }
    let moments = moments_of(&[a, b])?;
    let d = moments.variance()?;
    let f0 = moments.f0;

    let dim = design.dimension();
    let mut main_dlr = Vec::with_capacity(dim);
    let mut main_sk = Vec::with_capacity(dim);
    let mut total = Vec::with_capacity(dim);
    for i in 0..dim {
        let bins = partition_bins(a, i, n_bins)?;
        let sq: f64 = bins
            .bins()
            .map(|bin| {
                let m = bin.iter().map(|&l| a.values()[l]).sum::<f64>() / bin.len() as f64;
                m * m
            })
            .sum();
        main_dlr.push((sq / bins.n_bins() as f64 - f0 * f0) / d);

        let ab = design.hybrid(i);
        let (mut sk, mut st) = (0.0, 0.0);
        for l in 0..n {
            let py = positive((pdf.marginal)(i, b.coord(l, i)), "marginal density", l)?;
            let pz = positive((pdf.complement)(i, a.point(l)), "complementary marginal density", l)?;
            let w = (pdf.joint)(ab.point(l)) / (py * pz);
            let (fa, fb, fab) = (a.values()[l], b.values()[l], ab.values()[l]);
            sk += fb * (fab * w - fa);
            st += (fa - fab) * (fa - fab) * w;
        }
        main_sk.push(sk / (d * n as f64));
        total.push(st / (2.0 * d * n as f64));
    }
    Ok(KnownPdfEstimate {
        f0,
        d,
        main_dlr,
        main_sk,
        total,
        n,
        n_bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{builtin_problem, BuiltinConstraint, BuiltinModel};
    use crate::sampling::{draw_conditional_design, triangle_inverse_cdfs, PointStream};

    #[test]
    fn product_triangle_with_exact_density() {
        let m = builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle).unwrap();
        let mut s = PointStream::pseudorandom(21, 4).unwrap();
        let d = draw_conditional_design(&mut s, &m, &triangle_inverse_cdfs(), 1 << 16).unwrap();
        let e = known_pdf_estimators(&d, &m, 256).unwrap();
        assert!((e.f0 - 5.0 / 12.0).abs() < 5e-3);
        for i in 0..2 {
            assert!((e.main_dlr[i] - 7.0 / 27.0).abs() < 2e-2, "{e:?}");
            assert!((e.main_sk[i] - 7.0 / 27.0).abs() < 3e-2, "{e:?}");
            assert!((e.total[i] - 20.0 / 27.0).abs() < 2e-2, "{e:?}");
        }
    }

    #[test]
    fn requires_explicit_density() {
        let m = builtin_problem(
            &BuiltinModel::GFunction { a: vec![0.0, 1.0] },
            &BuiltinConstraint::UpperTriangle,
        )
        .unwrap();
        let mut s = PointStream::pseudorandom(0, 4).unwrap();
        let d = draw_conditional_design(&mut s, &m, &triangle_inverse_cdfs(), 64).unwrap();
        assert!(matches!(known_pdf_estimators(&d, &m, 8), Err(Error::Contract(_))));
    }

    #[test]
    fn inconsistent_sampler_is_rejected() {
        // uniform points on the square are not all inside the triangle
        let m = builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle).unwrap();
        let mut s = PointStream::pseudorandom(0, 5).unwrap();
        let d = PairedDesign::draw(&mut s, &m, 64, 0).unwrap();
        assert!(matches!(known_pdf_estimators(&d, &m, 8), Err(Error::Contract(_))));
    }
}
