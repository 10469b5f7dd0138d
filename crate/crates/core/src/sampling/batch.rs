use rayon::prelude::*;

use super::stream::{PointStream, StreamDescriptor};
use crate::domain::ConstrainedModel;
use crate::error::{Error, Result};

/// Points of the unit hypercube with their feasibility flags and extended
/// model values `f(x) I(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    dimension: usize,
    points: Vec<f64>,
    indicator: Vec<bool>,
    values: Vec<f64>,
    accepted: usize,
    source: Option<StreamDescriptor>,
}

impl SampleBatch {
    /// Evaluates `model` at every row of `points` (row-major, `model.dimension()` columns).
    pub fn evaluate(
        model: &ConstrainedModel,
        points: Vec<f64>,
        source: Option<StreamDescriptor>,
    ) -> Result<Self> {
        let d = model.dimension();
        if points.len() % d != 0 {
            return Err(Error::Contract(format!(
                "{} coordinates do not form rows of length {d}",
                points.len()
            )));
        }
        let evaluated: Vec<Option<f64>> = points
            .par_chunks(d)
            .map(|x| model.feasible_value(x))
            .collect::<Result<_>>()?;
        let indicator: Vec<bool> = evaluated.iter().map(Option::is_some).collect();
        let values = evaluated.iter().map(|v| v.unwrap_or(0.0)).collect();
        let accepted = indicator.iter().filter(|&&b| b).count();
        Ok(SampleBatch {
            dimension: d,
            points,
            indicator,
            values,
            accepted,
            source,
        })
    }

    pub fn len(&self) -> usize {
        self.indicator.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indicator.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn point(&self, l: usize) -> &[f64] {
        &self.points[l * self.dimension..(l + 1) * self.dimension]
    }

    #[inline]
    pub fn coord(&self, l: usize, i: usize) -> f64 {
        self.points[l * self.dimension + i]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn indicators(&self) -> &[bool] {
        &self.indicator
    }

    /// Extended model values, zero at infeasible points.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn accepted_count(&self) -> usize {
        self.accepted
    }

    pub fn acceptance_ratio(&self) -> f64 {
        self.accepted as f64 / self.len() as f64
    }

    pub fn source(&self) -> Option<&StreamDescriptor> {
        self.source.as_ref()
    }

    /// Stacks batches of equal dimension row-wise. The result has no source.
    pub fn concat(parts: &[&SampleBatch]) -> Result<SampleBatch> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Contract("nothing to concatenate".into()))?;
        let d = first.dimension;
        let mut out = SampleBatch {
            dimension: d,
            points: Vec::new(),
            indicator: Vec::new(),
            values: Vec::new(),
            accepted: 0,
            source: None,
        };
        for p in parts {
            if p.dimension != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: p.dimension,
                });
            }
            out.points.extend_from_slice(&p.points);
            out.indicator.extend_from_slice(&p.indicator);
            out.values.extend_from_slice(&p.values);
            out.accepted += p.accepted;
        }
        Ok(out)
    }
}

/// Maps stream rows onto model inputs: the first `model.dimension()`
/// columns of each row, pushed through the base density.
fn map_rows(model: &ConstrainedModel, raw: &[f64], stride: usize, offset: usize) -> Vec<f64> {
    let d = model.dimension();
    let base = model.base_density();
    let mut out = Vec::with_capacity(raw.len() / stride * d);
    for row in raw.chunks(stride) {
        for i in 0..d {
            out.push(base.transform_coord(i, row[offset + i]));
        }
    }
    out
}

/// Draws `n` points from the stream, i.e. from the unconstrained base
/// density, and evaluates the model with acceptance–rejection.
///
/// Extra stream columns beyond the model dimension are ignored.
pub fn draw_batch(stream: &mut PointStream, model: &ConstrainedModel, n: usize) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be >= 1".into()));
    }
    if stream.dimension() < model.dimension() {
        return Err(Error::DimensionMismatch {
            expected: model.dimension(),
            actual: stream.dimension(),
        });
    }
    let source = stream.descriptor();
    let raw = stream.take(n);
    let points = map_rows(model, &raw, stream.dimension(), 0);
    let batch = SampleBatch::evaluate(model, points, Some(source))?;
    if batch.accepted_count() == 0 {
        return Err(Error::EmptyFeasibleSample {
            n,
            constraints: model.constraints().description(),
        });
    }
    Ok(batch)
}

/// Pick-freeze layout: two independent samples `A = (y, z)` and
/// `B = (y', z')` plus, for every variable `i`, the hybrid `A` with column
/// `i` taken from `B`. The hybrid serves both the main-effect (`(y', z)`)
/// and the total-effect (`(y', z)` sharing `z` with `A`) estimators.
///
/// For the total effect the design also counts, at every point where both
/// `A` and the hybrid are feasible, how many of `aux_count` auxiliary values
/// `y_q` keep `(y_q, z)` feasible. The `y_q` form a randomly shifted
/// midpoint lattice, the shift coming from one extra stream column.
#[derive(Debug, Clone)]
pub struct PairedDesign {
    a: SampleBatch,
    b: SampleBatch,
    hybrids: Vec<SampleBatch>,
    aux_count: usize,
    aux_feasible: Vec<Vec<u32>>,
    source: Option<StreamDescriptor>,
}

impl PairedDesign {
    /// Stream dimension required for a model of dimension `n`.
    pub fn stream_dimension(n: usize) -> usize {
        2 * n + 1
    }

    pub fn draw(
        stream: &mut PointStream,
        model: &ConstrainedModel,
        n: usize,
        aux_count: usize,
    ) -> Result<Self> {
        let d = model.dimension();
        if stream.dimension() != Self::stream_dimension(d) {
            return Err(Error::DimensionMismatch {
                expected: Self::stream_dimension(d),
                actual: stream.dimension(),
            });
        }
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be >= 1".into()));
        }
        let source = stream.descriptor();
        let raw = stream.take(n);
        let stride = stream.dimension();
        let a = map_rows(model, &raw, stride, 0);
        let b = map_rows(model, &raw, stride, d);
        let shifts: Vec<f64> = raw.chunks(stride).map(|r| r[2 * d]).collect();
        let design = Self::from_points(model, a, b, Some(&shifts), aux_count, Some(source))?;
        if design.a.accepted_count() == 0 {
            return Err(Error::EmptyFeasibleSample {
                n,
                constraints: model.constraints().description(),
            });
        }
        Ok(design)
    }

    /// Builds the design from explicit `A` and `B` rows. Auxiliary counts are
    /// only computed when `shifts` is given.
    pub fn from_points(
        model: &ConstrainedModel,
        a_points: Vec<f64>,
        b_points: Vec<f64>,
        shifts: Option<&[f64]>,
        aux_count: usize,
        source: Option<StreamDescriptor>,
    ) -> Result<Self> {
        let d = model.dimension();
        if a_points.len() != b_points.len() {
            return Err(Error::Contract("A and B must have the same number of rows".into()));
        }
        let hybrid_points: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut h = a_points.clone();
                for (row, brow) in h.chunks_mut(d).zip(b_points.chunks(d)) {
                    row[i] = brow[i];
                }
                h
            })
            .collect();
        let a = SampleBatch::evaluate(model, a_points, source)?;
        let b = SampleBatch::evaluate(model, b_points, source)?;
        let hybrids = hybrid_points
            .into_iter()
            .map(|h| SampleBatch::evaluate(model, h, source))
            .collect::<Result<Vec<_>>>()?;

        let aux_feasible = match shifts {
            Some(shifts) if aux_count > 0 => {
                if shifts.len() != a.len() {
                    return Err(Error::Contract("one shift per row required".into()));
                }
                (0..d)
                    .map(|i| aux_counts(model, &a, &hybrids[i], i, shifts, aux_count))
                    .collect()
            }
            _ => Vec::new(),
        };

        Ok(PairedDesign {
            a,
            b,
            hybrids,
            aux_count: if aux_feasible.is_empty() { 0 } else { aux_count },
            aux_feasible,
            source,
        })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.a.dimension()
    }

    pub fn a(&self) -> &SampleBatch {
        &self.a
    }

    pub fn b(&self) -> &SampleBatch {
        &self.b
    }

    pub fn hybrid(&self, i: usize) -> &SampleBatch {
        &self.hybrids[i]
    }

    pub fn aux_count(&self) -> usize {
        self.aux_count
    }

    /// Feasible auxiliary counts for variable `i`; entries are zero where
    /// `A` or the hybrid is infeasible (they are never needed there).
    pub fn aux_feasible(&self, i: usize) -> Option<&[u32]> {
        self.aux_feasible.get(i).map(Vec::as_slice)
    }

    /// `A`, `B` and every hybrid: all `N (n + 2)` evaluated points.
    pub fn pool(&self) -> Vec<&SampleBatch> {
        let mut v = vec![&self.a, &self.b];
        v.extend(self.hybrids.iter());
        v
    }

    /// Model evaluations spent on the design, `N (n + 2)`.
    pub fn evaluations(&self) -> usize {
        self.len() * (self.dimension() + 2)
    }

    pub fn source(&self) -> Option<&StreamDescriptor> {
        self.source.as_ref()
    }
}

fn aux_counts(
    model: &ConstrainedModel,
    a: &SampleBatch,
    hybrid: &SampleBatch,
    i: usize,
    shifts: &[f64],
    aux_count: usize,
) -> Vec<u32> {
    let base = model.base_density();
    (0..a.len())
        .into_par_iter()
        .map_init(
            || vec![0.0; a.dimension()],
            |x, l| {
                if !(a.indicators()[l] && hybrid.indicators()[l]) {
                    return 0;
                }
                x.copy_from_slice(a.point(l));
                let mut count = 0;
                for q in 0..aux_count {
                    let u = ((q as f64 + 0.5) / aux_count as f64 + shifts[l]).fract();
                    x[i] = base.transform_coord(i, u);
                    if model.is_feasible(x) {
                        count += 1;
                    }
                }
                count
            },
        )
        .collect()
}
