//! Tensor-product trapezoidal quadrature of `f0`, `D`, main and total
//! effects on a (possibly bracketed) box.
//!
//! Nodes carry the Heaviside weight of
//! [`ConstraintSet::quadrature_weight`](crate::domain::ConstraintSet::quadrature_weight),
//! so a node lying exactly on a constraint boundary counts one half.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::ConstrainedModel;
use crate::error::{Error, Result};
use crate::estimators::Moments;
use crate::sampling::{bracket_domain_with_budget, check_budget, unflatten, BoundingBox, DEFAULT_NODE_BUDGET};

/// Marginals below this fraction of their maximum are treated as zero.
const MARGINAL_REL_TOL: f64 = 1e-12;

/// Closed grid of `k` nodes per axis on a box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    k: usize,
    bbox: BoundingBox,
    budget: u128,
}

impl GridSpec {
    pub fn new(k: usize, bbox: BoundingBox) -> Result<Self> {
        if k < 4 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 4 nodes per axis, got {k}"
            )));
        }
        if bbox.dimension() == 0 {
            return Err(Error::InvalidParameter("grid dimension must be >= 1".into()));
        }
        Ok(GridSpec {
            k,
            bbox,
            budget: DEFAULT_NODE_BUDGET,
        })
    }

    /// Grid on the unit hypercube.
    pub fn unit(k: usize, dimension: usize) -> Result<Self> {
        Self::new(k, BoundingBox::unit(dimension))
    }

    /// Grid on the box found by probing the model's domain with the same `k`.
    pub fn bracketed(model: &ConstrainedModel, k: usize) -> Result<Self> {
        let bbox = bracket_domain_with_budget(model, k, DEFAULT_NODE_BUDGET)?;
        Self::new(k, bbox)
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dimension(&self) -> usize {
        self.bbox.dimension()
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    /// `k^n`, saturating.
    pub fn nodes(&self) -> u128 {
        (self.k as u128)
            .checked_pow(self.dimension() as u32)
            .unwrap_or(u128::MAX)
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.bbox.upper[axis] - self.bbox.lower[axis]) / (self.k - 1) as f64
    }

    #[inline]
    pub fn node(&self, axis: usize, j: usize) -> f64 {
        if j + 1 == self.k {
            self.bbox.upper[axis]
        } else {
            self.bbox.lower[axis] + j as f64 * self.spacing(axis)
        }
    }

    #[inline]
    pub fn weight(&self, axis: usize, j: usize) -> f64 {
        let h = self.spacing(axis);
        if j == 0 || j + 1 == self.k {
            h / 2.0
        } else {
            h
        }
    }

    fn check(&self) -> Result<u64> {
        Ok(check_budget(self.k, self.dimension(), self.budget)? as u64)
    }
}

/// Trapezoidal rule over the closed grid.
pub fn trapezoid_integrate<F>(integrand: F, grid: &GridSpec) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let total = grid.check()?;
    let (k, n) = (grid.k, grid.dimension());
    let slab = total / k as u64;
    let parts = (0..k)
        .into_par_iter()
        .map(|j0| {
            let mut idx = vec![0; n];
            let mut x = vec![0.0; n];
            let mut acc = 0.0;
            for r in 0..slab {
                unflatten(j0 as u64 * slab + r, k, &mut idx);
                let mut w = 1.0;
                for a in 0..n {
                    x[a] = grid.node(a, idx[a]);
                    w *= grid.weight(a, idx[a]);
                }
                let v = integrand(&x);
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        value: v,
                        point: x.clone(),
                    });
                }
                acc += w * v;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.iter().sum())
}

/// Indices of every variable from one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub f0: f64,
    pub d: f64,
    pub scaling: f64,
    pub main: Vec<f64>,
    pub total: Vec<f64>,
    pub k: usize,
    pub nodes: u128,
    pub bbox: BoundingBox,
}

impl QuadratureResult {
    pub fn dimension(&self) -> usize {
        self.main.len()
    }
}

/// Domain weight `h(x) = U(g(x)) p(x)` and, where it is positive, `f(x)`.
#[inline]
fn node_value(model: &ConstrainedModel, x: &[f64]) -> Result<Option<(f64, f64)>> {
    let h = model.constraints().quadrature_weight(x);
    if h == 0.0 {
        return Ok(None);
    }
    let h = h * model.base_density().density(x);
    let f = model.eval(x);
    if !f.is_finite() {
        return Err(Error::NonFinite {
            value: f,
            point: x.to_vec(),
        });
    }
    Ok(Some((h, f)))
}

fn check_model(model: &ConstrainedModel, grid: &GridSpec) -> Result<()> {
    if model.dimension() != grid.dimension() {
        return Err(Error::DimensionMismatch {
            expected: model.dimension(),
            actual: grid.dimension(),
        });
    }
    Ok(())
}

struct Sums {
    h: f64,
    fh: f64,
    f2h: f64,
    /// Per axis and node: `Σ_{others} W f h` and `Σ_{others} W h`.
    cond_f: Vec<Vec<f64>>,
    cond_p: Vec<Vec<f64>>,
}

impl Sums {
    fn new(n: usize, k: usize) -> Self {
        Sums {
            h: 0.0,
            fh: 0.0,
            f2h: 0.0,
            cond_f: vec![vec![0.0; k]; n],
            cond_p: vec![vec![0.0; k]; n],
        }
    }

    fn merge(&mut self, o: &Sums) {
        self.h += o.h;
        self.fh += o.fh;
        self.f2h += o.f2h;
        for (a, b) in self.cond_f.iter_mut().zip(&o.cond_f) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        for (a, b) in self.cond_p.iter_mut().zip(&o.cond_p) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }
}

fn first_pass(model: &ConstrainedModel, grid: &GridSpec) -> Result<Sums> {
    check_model(model, grid)?;
    let total = grid.check()?;
    let (k, n) = (grid.k, grid.dimension());
    let slab = total / k as u64;
    let parts = (0..k)
        .into_par_iter()
        .map(|j0| {
            let mut s = Sums::new(n, k);
            let mut idx = vec![0; n];
            let mut x = vec![0.0; n];
            let mut w = vec![0.0; n];
            for r in 0..slab {
                unflatten(j0 as u64 * slab + r, k, &mut idx);
                for a in 0..n {
                    x[a] = grid.node(a, idx[a]);
                    w[a] = grid.weight(a, idx[a]);
                }
                let Some((h, f)) = node_value(model, &x)? else {
                    continue;
                };
                let wall: f64 = w.iter().product();
                s.h += wall * h;
                s.fh += wall * f * h;
                s.f2h += wall * f * f * h;
                for a in 0..n {
                    let wo = if w[a] > 0.0 { wall / w[a] } else { 0.0 };
                    s.cond_f[a][idx[a]] += wo * f * h;
                    s.cond_p[a][idx[a]] += wo * h;
                }
            }
            Ok(s)
        })
        .collect::<Result<Vec<Sums>>>()?;
    let mut sums = Sums::new(n, k);
    for p in &parts {
        sums.merge(p);
    }
    if !(sums.h > 0.0) {
        return Err(Error::DomainNotDetected { probe_k: k });
    }
    Ok(sums)
}

fn moments_from(sums: &Sums, grid: &GridSpec) -> Moments {
    let f0 = sums.fh / sums.h;
    Moments {
        scaling: sums.h,
        f0,
        d: sums.f2h / sums.h - f0 * f0,
        n: grid.nodes().min(usize::MAX as u128) as usize,
    }
}

/// `Σ w N² / P` over the nodes whose marginal `P` is not negligible.
fn ratio_sum(entries: impl Iterator<Item = (f64, f64, f64)> + Clone) -> Result<f64> {
    let pmax = entries.clone().map(|(_, _, p)| p).fold(0.0, f64::max);
    if !(pmax > 0.0) {
        return Err(Error::NoFeasibleSamples);
    }
    Ok(entries
        .filter(|&(_, _, p)| p >= MARGINAL_REL_TOL * pmax)
        .map(|(w, nf, p)| w * nf * nf / p)
        .sum())
}

fn main_from(sums: &Sums, grid: &GridSpec, m: &Moments, i: usize) -> Result<f64> {
    let d = m.variance()?;
    let entries = (0..grid.k).map(|j| (grid.weight(i, j), sums.cond_f[i][j], sums.cond_p[i][j]));
    let outer = ratio_sum(entries)?;
    Ok((outer / m.scaling - m.f0 * m.f0) / d)
}

fn total_from(model: &ConstrainedModel, grid: &GridSpec, m: &Moments, i: usize) -> Result<f64> {
    let d = m.variance()?;
    let (k, n) = (grid.k, grid.dimension());
    let count = (k as u64).pow(n as u32 - 1);
    // (w_z, Σ_i w f h, Σ_i w h) for every node z of the complementary axes
    let inner = (0..count)
        .into_par_iter()
        .map_init(
            || (vec![0usize; n - 1], vec![0.0; n]),
            |(zidx, x), z| {
                unflatten(z, k, zidx);
                let mut wz = 1.0;
                for (b, a) in (0..n).filter(|&a| a != i).enumerate() {
                    x[a] = grid.node(a, zidx[b]);
                    wz *= grid.weight(a, zidx[b]);
                }
                let (mut nf, mut p) = (0.0, 0.0);
                for j in 0..k {
                    x[i] = grid.node(i, j);
                    if let Some((h, f)) = node_value(model, x)? {
                        let w = grid.weight(i, j);
                        nf += w * f * h;
                        p += w * h;
                    }
                }
                Ok((wz, nf, p))
            },
        )
        .collect::<Result<Vec<(f64, f64, f64)>>>()?;
    let outer = ratio_sum(inner.iter().copied())?;
    Ok(1.0 - (outer / m.scaling - m.f0 * m.f0) / d)
}

fn check_variable(grid: &GridSpec, i: usize) -> Result<()> {
    if i >= grid.dimension() {
        return Err(Error::InvalidParameter(format!(
            "variable {i} out of range for dimension {}",
            grid.dimension()
        )));
    }
    Ok(())
}

/// `Ī = ∫ p I`, `f0 = ∫ f p I / Ī`, `D = ∫ f² p I / Ī - f0²`.
pub fn quad_mean_variance(model: &ConstrainedModel, grid: &GridSpec) -> Result<Moments> {
    let sums = first_pass(model, grid)?;
    Ok(moments_from(&sums, grid))
}

/// Main effect: outer trapezoid over `x_i` of `[∫ f p^Ω dz]² / p^Ω(x_i)`.
pub fn quad_main_effect(model: &ConstrainedModel, grid: &GridSpec, i: usize) -> Result<f64> {
    check_variable(grid, i)?;
    let sums = first_pass(model, grid)?;
    let m = moments_from(&sums, grid);
    main_from(&sums, grid, &m, i)
}

/// Total effect: `1 - [∫ [∫ f p^Ω dx_i]² / p^Ω(z) dz - f0²] / D`.
pub fn quad_total_effect(model: &ConstrainedModel, grid: &GridSpec, i: usize) -> Result<f64> {
    check_variable(grid, i)?;
    let sums = first_pass(model, grid)?;
    let m = moments_from(&sums, grid);
    total_from(model, grid, &m, i)
}

/// Moments and every main and total effect.
pub fn quadrature_indices(model: &ConstrainedModel, grid: &GridSpec) -> Result<QuadratureResult> {
    let sums = first_pass(model, grid)?;
    let m = moments_from(&sums, grid);
    m.variance()?;
    let n = grid.dimension();
    let main = (0..n)
        .map(|i| main_from(&sums, grid, &m, i))
        .collect::<Result<Vec<_>>>()?;
    let total = (0..n)
        .map(|i| total_from(model, grid, &m, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadratureResult {
        f0: m.f0,
        d: m.d,
        scaling: m.scaling,
        main,
        total,
        k: grid.k,
        nodes: grid.nodes(),
        bbox: grid.bbox.clone(),
    })
}

/// One row of a constraint-parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub result: std::result::Result<QuadratureResult, String>,
}

/// Quadrature for each parameter of a model family. Failures are recorded
/// per row and do not stop the sweep.
pub fn sweep_constraint_parameter<F>(family: F, params: &[f64], k: usize, bracket: bool) -> Vec<SweepRow>
where
    F: Fn(f64) -> Result<ConstrainedModel>,
{
    params
        .iter()
        .map(|&param| {
            let result = family(param).and_then(|model| {
                let grid = if bracket {
                    GridSpec::bracketed(&model, k)?
                } else {
                    GridSpec::unit(k, model.dimension())?
                };
                quadrature_indices(&model, &grid)
            });
            SweepRow {
                param,
                result: result.map_err(|e| e.to_string()),
            }
        })
        .collect()
}

/// Header `param,f0,D,S_1,S_1^T,...,S_n,S_n^T,error`.
pub fn sweep_header(dimension: usize) -> Vec<String> {
    let mut h = vec!["param".to_string(), "f0".into(), "D".into()];
    for i in 1..=dimension {
        h.push(format!("S_{i}"));
        h.push(format!("S_{i}^T"));
    }
    h.push("error".into());
    h
}

/// Writes sweep rows as CSV; failed rows keep the parameter and the error
/// message and leave the numeric columns empty.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], dimension: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(sweep_header(dimension))?;
    for row in rows {
        let mut rec = vec![row.param.to_string()];
        match &row.result {
            Ok(r) => {
                rec.push(r.f0.to_string());
                rec.push(r.d.to_string());
                for i in 0..dimension {
                    rec.push(r.main[i].to_string());
                    rec.push(r.total[i].to_string());
                }
                rec.push(String::new());
            }
            Err(e) => {
                rec.extend(std::iter::repeat(String::new()).take(2 + 2 * dimension));
                rec.push(e.clone());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
