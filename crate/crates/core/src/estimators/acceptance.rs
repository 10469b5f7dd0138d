//! Estimators for samples drawn from the unconstrained density and
//! filtered by the indicator.

use super::bins::{partition_bins, BinPartition};
use super::moments::{estimate_mean_variance, Moments};
use crate::error::{Error, Result};
use crate::sampling::{PairedDesign, SampleBatch};

/// Double-loop-reordering main effect of variable `i` from a single sample,
/// using that sample's own moments.
pub fn dlr_main_effect(batch: &SampleBatch, i: usize, n_bins: usize) -> Result<f64> {
    let moments = estimate_mean_variance(batch)?;
    let bins = partition_bins(batch, i, n_bins)?;
    dlr_from_bins(batch, &bins, &moments)
}

/// DLR main effect over a prepared partition.
///
/// Per bin `F_j = Σ f I / (Ī N_z)` and `p_j = Σ I / (Ī N_z)`;
/// `S = [(1/N_y) Σ_j F_j² / p_j - f0²] / D`, bins without feasible members
/// contributing nothing.
pub fn dlr_from_bins(batch: &SampleBatch, bins: &BinPartition, moments: &Moments) -> Result<f64> {
    let d = moments.variance()?;
    let (values, ind) = (batch.values(), batch.indicators());
    let mut acc = 0.0;
    let mut any = false;
    for bin in bins.bins() {
        let (mut fs, mut count) = (0.0, 0usize);
        for &l in bin {
            if ind[l] {
                fs += values[l];
                count += 1;
            }
        }
        if count > 0 {
            acc += fs * fs / count as f64;
            any = true;
        }
    }
    if !any {
        return Err(Error::NoFeasibleSamples);
    }
    let mean = acc / (moments.scaling * bins.bin_size() as f64) / bins.n_bins() as f64;
    Ok((mean - moments.f0 * moments.f0) / d)
}

/// Modified-Sobol' main effect from a paired design.
///
/// `S = 1/(Ī² D N) Σ f(B) I(B) [f(AB) I(AB) / p(y'_l) - f(A) I(A)]`, where
/// `AB` is `A` with coordinate `i` from `B` and `p(y'_l)` is the binned
/// marginal of `A` at `B`'s coordinate.
pub fn sk_main_effect(design: &PairedDesign, i: usize, n_bins: usize, moments: &Moments) -> Result<f64> {
    let d = moments.variance()?;
    let a = design.a();
    let bins = partition_bins(a, i, n_bins)?;
    let norm = moments.scaling * bins.bin_size() as f64;
    let marginal: Vec<f64> = bins
        .bins()
        .map(|bin| bin.iter().filter(|&&l| a.indicators()[l]).count() as f64 / norm)
        .collect();
    if marginal.iter().all(|&p| p == 0.0) {
        return Err(Error::NoFeasibleSamples);
    }
    let (b, ab) = (design.b(), design.hybrid(i));
    let mut acc = 0.0;
    for l in 0..design.len() {
        let fb = b.values()[l];
        if fb == 0.0 {
            continue;
        }
        let p = marginal[bins.locate(b.coord(l, i))];
        if p > 0.0 {
            acc += fb * (ab.values()[l] / p - a.values()[l]);
        }
    }
    let s = moments.scaling;
    Ok(acc / (s * s * d * design.len() as f64))
}

/// Total effect of variable `i` and the number of skipped terms.
///
/// `S^T = 1/(2 Ī² D N) Σ [f(A) - f(AB)]² I(A) I(AB) / p(z_l)` with
/// `p(z_l) = (1/(Ī N'_z)) Σ_q I(y_q, z_l)` from the design's auxiliary
/// counts. Terms whose marginal estimate is zero are skipped.
pub fn total_effect(design: &PairedDesign, i: usize, moments: &Moments) -> Result<(f64, usize)> {
    let d = moments.variance()?;
    let counts = design.aux_feasible(i).ok_or_else(|| {
        Error::Contract("total effect needs a design with auxiliary marginal counts".into())
    })?;
    let (a, ab) = (design.a(), design.hybrid(i));
    let norm = moments.scaling * design.aux_count() as f64;
    let mut acc = 0.0;
    let mut used = 0usize;
    let mut skipped = 0usize;
    for l in 0..design.len() {
        if !(a.indicators()[l] && ab.indicators()[l]) {
            continue;
        }
        if counts[l] == 0 {
            skipped += 1;
            continue;
        }
        let diff = a.values()[l] - ab.values()[l];
        acc += diff * diff * norm / counts[l] as f64;
        used += 1;
    }
    if used == 0 && skipped > 0 {
        return Err(Error::NoFeasibleSamples);
    }
    let s = moments.scaling;
    Ok((acc / (2.0 * s * s * d * design.len() as f64), skipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{builtin_problem, BuiltinConstraint, BuiltinModel, ConstrainedModel};
    use crate::estimators::moments::moments_of;
    use crate::sampling::{draw_batch, PointStream};

    const N: usize = 1 << 16;

    fn design(model: &ConstrainedModel, n: usize, qmc: bool) -> PairedDesign {
        let dim = PairedDesign::stream_dimension(model.dimension());
        let mut s = if qmc {
            PointStream::low_discrepancy(0, dim).unwrap()
        } else {
            PointStream::pseudorandom(17, dim).unwrap()
        };
        PairedDesign::draw(&mut s, model, n, 64).unwrap()
    }

    fn triangle() -> ConstrainedModel {
        builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle).unwrap()
    }

    #[test]
    fn dlr_single_variable_function() {
        let m = ConstrainedModel::new("x1", 2, |x| x[0]).unwrap();
        let mut s = PointStream::pseudorandom(1, 2).unwrap();
        let b = draw_batch(&mut s, &m, N).unwrap();
        let s1 = dlr_main_effect(&b, 0, 256).unwrap();
        let s2 = dlr_main_effect(&b, 1, 256).unwrap();
        assert!((s1 - 1.0).abs() < 2e-2, "{s1}");
        assert!(s2.abs() < 2e-2, "{s2}");
    }

    #[test]
    fn dlr_product_triangle() {
        let m = triangle();
        let mut s = PointStream::low_discrepancy(0, 2).unwrap();
        let b = draw_batch(&mut s, &m, N).unwrap();
        let s1 = dlr_main_effect(&b, 0, 256).unwrap();
        assert!((s1 - 7.0 / 27.0).abs() < 1e-2, "{s1}");
    }

    #[test]
    fn dlr_g_linear() {
        let m = builtin_problem(
            &BuiltinModel::GFunction { a: vec![0.0, 1.0] },
            &BuiltinConstraint::LinearAlpha(std::f64::consts::FRAC_PI_6),
        )
        .unwrap();
        let mut s = PointStream::low_discrepancy(0, 2).unwrap();
        let b = draw_batch(&mut s, &m, N).unwrap();
        let s1 = dlr_main_effect(&b, 0, 256).unwrap();
        assert!((s1 - 0.7703487112).abs() < 1e-2, "{s1}");
    }

    #[test]
    fn sk_and_total_product_triangle() {
        let m = triangle();
        let d = design(&m, 1 << 18, false);
        let mom = moments_of(&[d.a(), d.b()]).unwrap();
        let s1 = sk_main_effect(&d, 0, 512, &mom).unwrap();
        assert!((s1 - 7.0 / 27.0).abs() < 2e-2, "{s1}");
        let d = design(&m, N, true);
        let mom = moments_of(&[d.a(), d.b()]).unwrap();
        let (t2, skipped) = total_effect(&d, 1, &mom).unwrap();
        assert!((t2 - 20.0 / 27.0).abs() < 2e-2, "{t2}");
        assert!(skipped < 10);
    }

    #[test]
    fn total_single_variable_function() {
        let m = ConstrainedModel::new("x1", 2, |x| x[0]).unwrap();
        let d = design(&m, N, true);
        let mom = moments_of(&[d.a(), d.b()]).unwrap();
        let (t1, _) = total_effect(&d, 0, &mom).unwrap();
        let (t2, _) = total_effect(&d, 1, &mom).unwrap();
        assert!((t1 - 1.0).abs() < 2e-2, "{t1}");
        assert_eq!(t2, 0.0);
    }

    #[test]
    fn constant_model_is_degenerate() {
        let m = ConstrainedModel::new("c", 2, |_| 3.0)
            .unwrap()
            .with_constraints(BuiltinConstraint::UpperTriangle.build(2).unwrap());
        let d = design(&m, 1024, false);
        let mom = moments_of(&[d.a(), d.b()]).unwrap();
        assert!(mom.d.abs() < 1e-12);
        let mom = Moments { d: 0.0, ..mom };
        assert_eq!(sk_main_effect(&d, 0, 32, &mom), Err(Error::DegenerateVariance(0.0)));
        assert!(matches!(total_effect(&d, 0, &mom), Err(Error::DegenerateVariance(_))));
    }

    #[test]
    fn total_needs_aux_counts() {
        let m = triangle();
        let mut s = PointStream::pseudorandom(0, 5).unwrap();
        let d = PairedDesign::draw(&mut s, &m, 128, 0).unwrap();
        let mom = moments_of(&[d.a(), d.b()]).unwrap();
        assert!(matches!(total_effect(&d, 0, &mom), Err(Error::Contract(_))));
    }
}
