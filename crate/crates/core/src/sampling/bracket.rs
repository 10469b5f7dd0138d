use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::ConstrainedModel;
use crate::error::{Error, Result};

/// Default ceiling on the number of grid nodes visited by grid routines.
pub const DEFAULT_NODE_BUDGET: u128 = 100_000_000;

/// Axis-aligned box `[lower_i, upper_i]` inside the unit hypercube.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoundingBox {
    pub fn unit(n: usize) -> Self {
        BoundingBox {
            lower: vec![0.0; n],
            upper: vec![1.0; n],
        }
    }

    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "box edge {i} = [{lo}, {hi}] is not inside [0, 1]"
                )));
            }
        }
        Ok(BoundingBox { lower, upper })
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .product()
    }
}

pub(crate) fn check_budget(k: usize, n: usize, budget: u128) -> Result<u128> {
    let nodes = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if nodes > budget {
        return Err(Error::BudgetExceeded { nodes, budget });
    }
    Ok(nodes)
}

/// Decodes a flat node number into per-axis indices (last axis fastest).
#[inline]
pub(crate) fn unflatten(mut flat: u64, k: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = (flat % k as u64) as usize;
        flat /= k as u64;
    }
}

/// Tightest box, on a closed probe grid of `probe_k` nodes per axis, that
/// encloses every feasible node, widened by one grid spacing per side and
/// clamped to the unit cube.
pub fn bracket_domain(model: &ConstrainedModel, probe_k: usize) -> Result<BoundingBox> {
    bracket_domain_with_budget(model, probe_k, DEFAULT_NODE_BUDGET)
}

pub fn bracket_domain_with_budget(
    model: &ConstrainedModel,
    probe_k: usize,
    budget: u128,
) -> Result<BoundingBox> {
    if probe_k < 4 {
        return Err(Error::InvalidParameter(format!(
            "probe grid needs at least 4 nodes per axis, got {probe_k}"
        )));
    }
    let n = model.dimension();
    if model.constraints().is_empty() {
        return Ok(BoundingBox::unit(n));
    }
    let nodes = check_budget(probe_k, n, budget)? as u64;
    let h = 1.0 / (probe_k - 1) as f64;
    let slab = (probe_k as u64).pow(n as u32 - 1);

    // per-axis (min, max) feasible node index, reduced over slabs of the first axis
    let extents: Vec<Option<(Vec<usize>, Vec<usize>)>> = (0..probe_k)
        .into_par_iter()
        .map(|j0| {
            let mut idx = vec![0; n];
            let mut x = vec![0.0; n];
            let mut ext: Option<(Vec<usize>, Vec<usize>)> = None;
            for r in 0..slab {
                unflatten(j0 as u64 * slab + r, probe_k, &mut idx);
                for (xi, &ji) in x.iter_mut().zip(&idx) {
                    *xi = ji as f64 * h;
                }
                if model.is_feasible(&x) {
                    let (lo, hi) = ext.get_or_insert_with(|| (idx.clone(), idx.clone()));
                    for a in 0..n {
                        lo[a] = lo[a].min(idx[a]);
                        hi[a] = hi[a].max(idx[a]);
                    }
                }
            }
            ext
        })
        .collect();
    debug_assert_eq!(slab * probe_k as u64, nodes);

    let mut total: Option<(Vec<usize>, Vec<usize>)> = None;
    for (lo, hi) in extents.into_iter().flatten() {
        match &mut total {
            None => total = Some((lo, hi)),
            Some((tl, th)) => {
                for a in 0..n {
                    tl[a] = tl[a].min(lo[a]);
                    th[a] = th[a].max(hi[a]);
                }
            }
        }
    }
    let (lo, hi) = total.ok_or(Error::DomainNotDetected { probe_k })?;
    let lower = lo
        .iter()
        .map(|&j| if j == 0 { 0.0 } else { ((j - 1) as f64 * h).max(0.0) })
        .collect();
    let upper = hi
        .iter()
        .map(|&j| if j + 1 >= probe_k { 1.0 } else { ((j + 1) as f64 * h).min(1.0) })
        .collect();
    BoundingBox::new(lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{builtin_problem, BuiltinConstraint, BuiltinModel, Constraint, ConstraintSet};

    fn product(c: BuiltinConstraint) -> ConstrainedModel {
        let m = BuiltinModel::Product2d.build().unwrap();
        let cs = c.build(2).unwrap();
        m.with_constraints(cs)
    }

    #[test]
    fn disk_is_bracketed_within_one_spacing() {
        let m = product(BuiltinConstraint::Disk {
            center: [0.5, 0.5],
            radius: 0.25,
        });
        let k = 64;
        let h = 1.0 / (k - 1) as f64;
        let b = bracket_domain(&m, k).unwrap();
        for i in 0..2 {
            assert!(b.lower[i] <= 0.25 && 0.25 - b.lower[i] <= h + 1e-12, "{b:?}");
            assert!(b.upper[i] >= 0.75 && b.upper[i] - 0.75 <= h + 1e-12, "{b:?}");
        }
    }

    #[test]
    fn triangle_touches_every_face() {
        let m = product(BuiltinConstraint::UpperTriangle);
        assert_eq!(bracket_domain(&m, 64).unwrap(), BoundingBox::unit(2));
    }

    #[test]
    fn unconstrained_box_is_the_cube() {
        let m = builtin_problem(&BuiltinModel::KFunction { n: 4 }, &BuiltinConstraint::None).unwrap();
        assert_eq!(bracket_domain(&m, 8).unwrap(), BoundingBox::unit(4));
    }

    #[test]
    fn invisible_domain_is_reported() {
        let m = BuiltinModel::Product2d.build().unwrap().with_constraints(
            ConstraintSet::new().with(Constraint::new("tiny disk", |x| {
                1e-6 - (x[0] - 0.51).powi(2) - (x[1] - 0.51).powi(2)
            })),
        );
        assert_eq!(
            bracket_domain(&m, 5),
            Err(Error::DomainNotDetected { probe_k: 5 })
        );
        assert!(bracket_domain(&m, 101).is_ok());
    }

    #[test]
    fn probe_grid_too_coarse() {
        let m = product(BuiltinConstraint::UpperTriangle);
        assert!(matches!(bracket_domain(&m, 3), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn budget_guard() {
        let m = builtin_problem(&BuiltinModel::KFunction { n: 4 }, &BuiltinConstraint::KI1).unwrap();
        assert!(matches!(
            bracket_domain_with_budget(&m, 100, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn box_encloses_all_feasible_probe_nodes() {
        let m = product(BuiltinConstraint::Disk {
            center: [0.3, 0.6],
            radius: 0.2,
        });
        let k = 33;
        let b = bracket_domain(&m, k).unwrap();
        let h = 1.0 / (k - 1) as f64;
        for i in 0..k {
            for j in 0..k {
                let x = [i as f64 * h, j as f64 * h];
                if m.is_feasible(&x) {
                    assert!(b.contains(&x));
                }
            }
        }
    }
}
