use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::SampleBatch;

/// Scaling factor, mean and variance of a sample, all with the indicator
/// folded in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    /// Feasible fraction `Ī`.
    pub scaling: f64,
    pub f0: f64,
    /// Raw variance estimate; may be slightly negative at tiny sample sizes.
    pub d: f64,
    /// Points the moments were computed from.
    pub n: usize,
}

impl Moments {
    pub fn negative_variance(&self) -> bool {
        self.d < 0.0
    }

    /// `D`, or an error when it vanishes relative to `f0²` (or is negative).
    pub(crate) fn variance(&self) -> Result<f64> {
        if self.d > 1e-12 * self.f0.powi(2).max(1.0) && self.d.is_finite() {
            Ok(self.d)
        } else {
            Err(Error::DegenerateVariance(self.d))
        }
    }
}

/// `Ī = (1/N) Σ I(x_l)`.
pub fn estimate_scaling(batch: &SampleBatch) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::Contract("empty batch".into()));
    }
    if batch.accepted_count() == 0 {
        return Err(Error::NoFeasibleSamples);
    }
    Ok(batch.accepted_count() as f64 / batch.len() as f64)
}

/// `f0 = Σ f I / (Ī N)` and `D = Σ f² I / (Ī N) - f0²`.
pub fn estimate_mean_variance(batch: &SampleBatch) -> Result<Moments> {
    moments_of(&[batch])
}

/// Moments of several batches taken together.
pub fn moments_of(parts: &[&SampleBatch]) -> Result<Moments> {
    let n: usize = parts.iter().map(|b| b.len()).sum();
    if n == 0 {
        return Err(Error::Contract("empty batch".into()));
    }
    let accepted: usize = parts.iter().map(|b| b.accepted_count()).sum();
    if accepted == 0 {
        return Err(Error::NoFeasibleSamples);
    }
    let (mut s1, mut s2) = (0.0, 0.0);
    for b in parts {
        for &v in b.values() {
            s1 += v;
            s2 += v * v;
        }
    }
    let f0 = s1 / accepted as f64;
    Ok(Moments {
        scaling: accepted as f64 / n as f64,
        f0,
        d: s2 / accepted as f64 - f0 * f0,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{builtin_problem, BuiltinConstraint, BuiltinModel};
    use crate::sampling::{draw_batch, PointStream};
    use proptest::prelude::*;

    fn batch(m: &BuiltinModel, c: BuiltinConstraint, qmc: bool, n: usize) -> SampleBatch {
        let model = builtin_problem(m, &c).unwrap();
        let mut s = if qmc {
            PointStream::low_discrepancy(0, model.dimension()).unwrap()
        } else {
            PointStream::pseudorandom(5, model.dimension()).unwrap()
        };
        draw_batch(&mut s, &model, n).unwrap()
    }

    #[test]
    fn scaling_factor() {
        let b = batch(&BuiltinModel::Product2d, BuiltinConstraint::None, false, 100);
        assert_eq!(estimate_scaling(&b).unwrap(), 1.0);
        // unscrambled Sobol' puts 279 of the first 2^16 points exactly on x1 + x2 = 1
        let b = batch(&BuiltinModel::Product2d, BuiltinConstraint::UpperTriangle, true, 1 << 16);
        assert!((estimate_scaling(&b).unwrap() - 0.5).abs() < 2.5e-3);
        let b = batch(&BuiltinModel::Product2d, BuiltinConstraint::UpperTriangle, false, 1 << 18);
        assert!((estimate_scaling(&b).unwrap() - 0.5).abs() < 3.0 / 1024.0);
        let g = BuiltinModel::GFunction { a: vec![0.0, 1.0] };
        let b = batch(&g, BuiltinConstraint::ParabolicBeta(4.0), true, 1 << 16);
        assert!((estimate_scaling(&b).unwrap() - 1.0 / 3.0).abs() < 2e-3);
    }

    #[test]
    fn product_moments() {
        let b = batch(&BuiltinModel::Product2d, BuiltinConstraint::UpperTriangle, false, 1 << 18);
        let m = estimate_mean_variance(&b).unwrap();
        assert!((m.f0 - 5.0 / 12.0).abs() < 1e-3, "{m:?}");
        assert!((m.d - 3.0 / 80.0).abs() < 1e-3, "{m:?}");
        let b = batch(&BuiltinModel::Product2d, BuiltinConstraint::None, true, 1 << 16);
        let m = estimate_mean_variance(&b).unwrap();
        assert!((m.f0 - 0.25).abs() < 1e-4);
        assert!((m.d - 7.0 / 144.0).abs() < 1e-4);
    }

    #[test]
    fn g_function_linear_moments() {
        let g = BuiltinModel::GFunction { a: vec![0.0, 1.0] };
        let b = batch(&g, BuiltinConstraint::LinearAlpha(std::f64::consts::FRAC_PI_4), true, 1 << 16);
        let m = estimate_mean_variance(&b).unwrap();
        assert!((m.f0 - 1.0).abs() < 1e-2);
        assert!((m.d - 4.0 / 9.0).abs() < 1e-2);
    }

    #[test]
    fn degenerate_variance() {
        let m = Moments { scaling: 1.0, f0: 2.0, d: 0.0, n: 10 };
        assert_eq!(m.variance(), Err(Error::DegenerateVariance(0.0)));
        let m = Moments { d: -1e-3, ..m };
        assert!(m.negative_variance());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn moments_invariant_under_row_permutation(seed in 0u64..1000, rot in 1usize..255) {
            let model = builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle).unwrap();
            let mut s = PointStream::pseudorandom(seed, 2).unwrap();
            let b = draw_batch(&mut s, &model, 256).unwrap();
            let mut pts = b.points().to_vec();
            pts.rotate_left(2 * rot);
            let p = SampleBatch::evaluate(&model, pts, None).unwrap();
            let (m1, m2) = (estimate_mean_variance(&b).unwrap(), estimate_mean_variance(&p).unwrap());
            prop_assert_eq!(m1.scaling, m2.scaling);
            prop_assert!((m1.f0 - m2.f0).abs() < 1e-12);
            prop_assert!((m1.d - m2.d).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&m1.scaling));
        }
    }
}
