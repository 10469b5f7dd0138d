//! Direct sampling from a constrained density by sequential inversion of
//! conditional CDFs: `xi_k = F_k^{-1}(gamma_k | xi_1, ..., xi_{k-1})`.

use super::batch::{PairedDesign, SampleBatch};
use super::stream::PointStream;
use crate::domain::{ConstrainedModel, InputPoint};
use crate::error::{Error, Result};

/// `F_k^{-1}(gamma | preceding coordinates)`.
pub type ConditionalInverseCdf = Box<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;

/// Applies the inverse conditional CDFs in order to a vector of uniforms.
pub fn sequential_conditional_sample(
    inverse_cdfs: &[ConditionalInverseCdf],
    gamma: &[f64],
) -> Result<InputPoint> {
    if inverse_cdfs.len() != gamma.len() {
        return Err(Error::DimensionMismatch {
            expected: inverse_cdfs.len(),
            actual: gamma.len(),
        });
    }
    let mut xi = Vec::with_capacity(gamma.len());
    for (k, (f, &g)) in inverse_cdfs.iter().zip(gamma).enumerate() {
        let v = f(g, &xi);
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Contract(format!(
                "inverse CDF {k} returned {v} outside [0, 1] for gamma = {g}"
            )));
        }
        xi.push(v);
    }
    InputPoint::new(xi)
}

/// Inverse CDFs of the uniform density on the upper triangle
/// `x1 + x2 >= 1`: `F_1(x1) = x1^2`, `F_2(x2 | x1) = (x1 + x2 - 1) / x1`.
pub fn triangle_inverse_cdfs() -> Vec<ConditionalInverseCdf> {
    vec![
        Box::new(|g, _| g.sqrt()),
        Box::new(|g, prev| prev[0] * (g - 1.0) + 1.0),
    ]
}

pub fn triangle_inverse_cdf(gamma1: f64, gamma2: f64) -> InputPoint {
    let x1 = gamma1.sqrt();
    InputPoint::new(vec![x1, x1 * (gamma2 - 1.0) + 1.0]).expect("triangle map stays in the unit square")
}

fn map_block(
    inverse_cdfs: &[ConditionalInverseCdf],
    raw: &[f64],
    stride: usize,
    offset: usize,
) -> Result<Vec<f64>> {
    let d = inverse_cdfs.len();
    let mut out = Vec::with_capacity(raw.len() / stride * d);
    for row in raw.chunks(stride) {
        out.extend(sequential_conditional_sample(inverse_cdfs, &row[offset..offset + d])?.into_inner());
    }
    Ok(out)
}

/// Draws `n` points directly from the constrained density.
pub fn draw_conditional_batch(
    stream: &mut PointStream,
    model: &ConstrainedModel,
    inverse_cdfs: &[ConditionalInverseCdf],
    n: usize,
) -> Result<SampleBatch> {
    let d = model.dimension();
    if inverse_cdfs.len() != d || stream.dimension() < d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: inverse_cdfs.len().min(stream.dimension()),
        });
    }
    let source = stream.descriptor();
    let raw = stream.take(n);
    let points = map_block(inverse_cdfs, &raw, stream.dimension(), 0)?;
    SampleBatch::evaluate(model, points, Some(source))
}

/// Pick-freeze design whose `A` and `B` are drawn directly from the
/// constrained density (stream dimension `2n`).
pub fn draw_conditional_design(
    stream: &mut PointStream,
    model: &ConstrainedModel,
    inverse_cdfs: &[ConditionalInverseCdf],
    n: usize,
) -> Result<PairedDesign> {
    let d = model.dimension();
    if inverse_cdfs.len() != d || stream.dimension() != 2 * d {
        return Err(Error::DimensionMismatch {
            expected: 2 * d,
            actual: stream.dimension(),
        });
    }
    let source = stream.descriptor();
    let raw = stream.take(n);
    let a = map_block(inverse_cdfs, &raw, 2 * d, 0)?;
    let b = map_block(inverse_cdfs, &raw, 2 * d, d)?;
    PairedDesign::from_points(model, a, b, None, 0, Some(source))
}
