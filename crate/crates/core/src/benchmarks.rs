//! Exact reference values for the built-in problems and an independent
//! midpoint-rule oracle.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, LN_2, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::domain::{builtin_problem, BuiltinConstraint, BuiltinModel, ConstrainedModel};
use crate::error::{Error, Result};
use crate::sampling::{check_budget, DEFAULT_NODE_BUDGET};

/// Known `f0`, `D` and indices of a built-in problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCase {
    pub id: String,
    pub model: String,
    pub model_params: Vec<f64>,
    pub constraint: String,
    pub constraint_params: Vec<f64>,
    pub f0: f64,
    pub d: f64,
    pub main: Vec<f64>,
    pub total: Vec<f64>,
    /// How the values were obtained.
    pub source: String,
}

impl ReferenceCase {
    pub fn dimension(&self) -> usize {
        self.main.len()
    }

    pub fn problem(&self) -> Result<ConstrainedModel> {
        let m = BuiltinModel::from_name(&self.model, &self.model_params)?;
        let c = BuiltinConstraint::from_name(&self.constraint, &self.constraint_params)?;
        builtin_problem(&m, &c)
    }

    /// `S_1..S_n` followed by `S_1^T..S_n^T`.
    pub fn indices(&self) -> Vec<f64> {
        self.main.iter().chain(&self.total).copied().collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn case(
    id: &str,
    model: &str,
    model_params: &[f64],
    constraint: &str,
    constraint_params: &[f64],
    f0: f64,
    d: f64,
    main: &[f64],
    total: &[f64],
    source: &str,
) -> ReferenceCase {
    ReferenceCase {
        id: id.into(),
        model: model.into(),
        model_params: model_params.to_vec(),
        constraint: constraint.into(),
        constraint_params: constraint_params.to_vec(),
        f0,
        d,
        main: main.to_vec(),
        total: total.to_vec(),
        source: source.into(),
    }
}

/// Totals of a 2D case from `S_1^T = 1 - S_2`, `S_2^T = 1 - S_1`.
fn totals_2d(main: &[f64; 2]) -> [f64; 2] {
    [1.0 - main[1], 1.0 - main[0]]
}

/// Unconstrained g-function: `f0 = 1`, `V_i = 1 / (3 (1 + a_i)²)`,
/// `D = Π (1 + V_i) - 1`, `S_i = V_i / D`, `S_i^T = V_i Π_{j≠i} (1 + V_j) / D`.
pub fn g_function_unconstrained(a: &[f64]) -> ReferenceCase {
    let v: Vec<f64> = a.iter().map(|ai| 1.0 / (3.0 * (1.0 + ai).powi(2))).collect();
    let prod: f64 = v.iter().map(|vi| 1.0 + vi).product();
    let d = prod - 1.0;
    let main: Vec<f64> = v.iter().map(|vi| vi / d).collect();
    let total: Vec<f64> = v.iter().map(|vi| vi * prod / (1.0 + vi) / d).collect();
    case(
        "g_unconstrained",
        "gfunction",
        a,
        "none",
        &[],
        1.0,
        d,
        &main,
        &total,
        "closed form",
    )
}

/// Main effects of the unconstrained K-function of dimension `n >= 3`.
pub fn k_function_main_effects(n: usize) -> Vec<f64> {
    let nf = n as i32;
    let denom = 1.5 - 0.6 * (-1f64).powi(nf) * 0.5f64.powi(nf - 1) + 0.1 * (1.0 / 3.0f64).powi(nf - 3)
        - 3.0 * 0.5f64.powi(2 * nf);
    (1..=nf)
        .map(|i| (0.5f64.powi(2 * i - 2) + (-0.5f64).powi(nf + i - 2) + 0.5f64.powi(2 * nf)) / denom)
        .collect()
}

/// Every stored case.
pub fn reference_cases() -> Vec<ReferenceCase> {
    let g_pi6 = [0.7703487112, 0.3214987100];
    let g_pi4 = [-93.0 / 40.0 + 4.5 * LN_2, -9.0 / 20.0 + 9.0 / 8.0 * LN_2];
    let q = 144.0 * SQRT_2 - 521.0;
    let g_par = [
        3.0 * (384.0 * SQRT_2 - 575.0) / q,
        -3.0 * (264.0 * SQRT_2 - 293.0) / (2.0 * q),
    ];
    let r = |num: &[f64], den: f64| num.iter().map(|v| v / den).collect::<Vec<f64>>();
    let g = [0.0, 1.0];
    vec![
        case(
            "product_triangle",
            "product2d",
            &[],
            "upper_triangle",
            &[],
            5.0 / 12.0,
            3.0 / 80.0,
            &[7.0 / 27.0; 2],
            &[20.0 / 27.0; 2],
            "closed form",
        ),
        case(
            "product_unconstrained",
            "product2d",
            &[],
            "none",
            &[],
            0.25,
            7.0 / 144.0,
            &[3.0 / 7.0; 2],
            &[4.0 / 7.0; 2],
            "closed form",
        ),
        g_function_unconstrained(&g),
        case(
            "g_linear_pi6",
            "gfunction",
            &g,
            "linear_alpha",
            &[FRAC_PI_6],
            0.9714128589,
            0.4483218079,
            &g_pi6,
            &totals_2d(&g_pi6),
            "tabulated decimals; totals from the two-variable identity",
        ),
        case(
            "g_linear_pi4",
            "gfunction",
            &g,
            "linear_alpha",
            &[FRAC_PI_4],
            1.0,
            4.0 / 9.0,
            &g_pi4,
            &totals_2d(&g_pi4),
            "closed form; totals from the two-variable identity",
        ),
        case(
            "g_parabolic_4",
            "gfunction",
            &g,
            "parabolic_beta",
            &[4.0],
            1.5,
            521.0 / 1260.0 - 4.0 / 35.0 * SQRT_2,
            &g_par,
            &totals_2d(&g_par),
            "closed form, grouping confirmed by the midpoint oracle; totals from the two-variable identity",
        ),
        case(
            "k_unconstrained",
            "kfunction",
            &[4.0],
            "none",
            &[],
            -5.0 / 16.0,
            1111.0 / 20736.0,
            &r(&[675.0, 243.0, 27.0, 27.0], 1111.0),
            &[784.0 / 1111.0, 32.0 / 101.0, 64.0 / 1111.0, 64.0 / 1111.0],
            "exact rationals from symbolic integration, checked by the midpoint oracle",
        ),
        case(
            "k_i1",
            "kfunction",
            &[4.0],
            "k_i1",
            &[],
            -13.0 / 48.0,
            1039.0 / 20736.0,
            &[4977.0 / 5195.0, 1953.0 / 5195.0, 3.0 / 1039.0, 3.0 / 1039.0],
            &[640.0 / 1039.0, 176.0 / 5195.0, 32.0 / 5195.0, 32.0 / 5195.0],
            "exact rationals from symbolic integration, checked by the midpoint oracle",
        ),
        case(
            "k_i2",
            "kfunction",
            &[4.0],
            "k_i2",
            &[],
            -5.0 / 16.0,
            1111.0 / 20736.0,
            &[675.0 / 1111.0, 243.0 / 1111.0, 27.0 / 505.0, 27.0 / 1111.0],
            &[784.0 / 1111.0, 32.0 / 101.0, 64.0 / 1111.0, 32.0 / 5555.0],
            "exact rationals from symbolic integration, checked by the midpoint oracle",
        ),
        case(
            "k_i3",
            "kfunction",
            &[4.0],
            "k_i3",
            &[],
            -3.0 / 16.0,
            2819.0 / 103680.0,
            &r(&[1593.0, 735.0, 297.0, 15.0], 2819.0),
            &r(&[1616.0, 1184.0, 32.0, 32.0], 2819.0),
            "exact rationals from symbolic integration, checked by the midpoint oracle",
        ),
    ]
}

pub fn reference(case_id: &str) -> Result<ReferenceCase> {
    reference_cases()
        .into_iter()
        .find(|c| c.id == case_id)
        .ok_or_else(|| Error::Unknown {
            kind: "reference case",
            name: case_id.to_string(),
        })
}

/// The whole reference table as pretty-printed JSON.
pub fn reference_table_json() -> Result<String> {
    Ok(serde_json::to_string_pretty(&reference_cases())?)
}

/// Oracle values at one resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleValues {
    pub f0: f64,
    pub d: f64,
    pub main: Vec<f64>,
    pub total: Vec<f64>,
}

impl OracleValues {
    fn flat(&self) -> Vec<f64> {
        let mut v = vec![self.f0, self.d];
        v.extend(&self.main);
        v.extend(&self.total);
        v
    }

    fn from_flat(v: &[f64], n: usize) -> Self {
        OracleValues {
            f0: v[0],
            d: v[1],
            main: v[2..2 + n].to_vec(),
            total: v[2 + n..2 + 2 * n].to_vec(),
        }
    }
}

/// Midpoint-rule values at `resolution` and `resolution / 2`, with error
/// estimates `|fine - coarse| / 3` and the second-order extrapolation
/// `(4 fine - coarse) / 3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub resolution: usize,
    pub values: OracleValues,
    pub coarse: OracleValues,
    pub error: OracleValues,
    pub extrapolated: OracleValues,
}

/// Brute-force oracle on the unit cube with the default node budget.
pub fn oracle_indices(model: &ConstrainedModel, resolution: usize) -> Result<OracleResult> {
    oracle_indices_with_budget(model, resolution, DEFAULT_NODE_BUDGET)
}

pub fn oracle_indices_with_budget(model: &ConstrainedModel, resolution: usize, budget: u128) -> Result<OracleResult> {
    if resolution < 8 {
        return Err(Error::InvalidParameter(format!(
            "oracle resolution must be >= 8, got {resolution}"
        )));
    }
    check_budget(resolution, model.dimension(), budget)?;
    let n = model.dimension();
    let fine = midpoint(model, resolution)?;
    let coarse = midpoint(model, resolution / 2)?;
    let (f, c) = (fine.flat(), coarse.flat());
    let err: Vec<f64> = f.iter().zip(&c).map(|(a, b)| (a - b).abs() / 3.0).collect();
    let ext: Vec<f64> = f.iter().zip(&c).map(|(a, b)| (4.0 * a - b) / 3.0).collect();
    Ok(OracleResult {
        resolution,
        values: fine,
        coarse,
        error: OracleValues::from_flat(&err, n),
        extrapolated: OracleValues::from_flat(&ext, n),
    })
}

/// One serial sweep over the `m^n` cell midpoints accumulating, with unit
/// weights, the feasible mass, first and second moments, the per-axis
/// conditional sums and the complementary conditional sums.
fn midpoint(model: &ConstrainedModel, m: usize) -> Result<OracleValues> {
    let n = model.dimension();
    let coords: Vec<f64> = (0..m).map(|j| (j as f64 + 0.5) / m as f64).collect();
    let comp_len = m.pow(n as u32 - 1);
    let mut axis_f = vec![vec![0.0; m]; n];
    let mut axis_p = vec![vec![0.0; m]; n];
    let mut comp_f = vec![vec![0.0; comp_len]; n];
    let mut comp_p = vec![vec![0.0; comp_len]; n];
    let (mut mass, mut s1, mut s2) = (0.0, 0.0, 0.0);

    let mut idx = vec![0usize; n];
    let mut x = vec![coords[0]; n];
    loop {
        let mut h = model.constraints().quadrature_weight(&x);
        if h > 0.0 {
            h *= model.base_density().density(&x);
            let f = model.eval(&x);
            if !f.is_finite() {
                return Err(Error::NonFinite { value: f, point: x });
            }
            mass += h;
            s1 += f * h;
            s2 += f * f * h;
            for i in 0..n {
                axis_f[i][idx[i]] += f * h;
                axis_p[i][idx[i]] += h;
                let mut c = 0;
                for (a, &ja) in idx.iter().enumerate() {
                    if a != i {
                        c = c * m + ja;
                    }
                }
                comp_f[i][c] += f * h;
                comp_p[i][c] += h;
            }
        }
        // odometer, last axis fastest
        let mut a = n;
        loop {
            if a == 0 {
                return finish(mass, s1, s2, &axis_f, &axis_p, &comp_f, &comp_p);
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < m {
                x[a] = coords[idx[a]];
                break;
            }
            idx[a] = 0;
            x[a] = coords[0];
        }
    }
}

fn conditional_term(nf: &[f64], p: &[f64]) -> f64 {
    let pmax = p.iter().copied().fold(0.0, f64::max);
    nf.iter()
        .zip(p)
        .filter(|(_, &pv)| pv > 0.0 && pv >= 1e-12 * pmax)
        .map(|(&a, &b)| a * a / b)
        .sum()
}

fn finish(
    mass: f64,
    s1: f64,
    s2: f64,
    axis_f: &[Vec<f64>],
    axis_p: &[Vec<f64>],
    comp_f: &[Vec<f64>],
    comp_p: &[Vec<f64>],
) -> Result<OracleValues> {
    if !(mass > 0.0) {
        return Err(Error::NoFeasibleSamples);
    }
    let f0 = s1 / mass;
    let d = s2 / mass - f0 * f0;
    if !(d > 0.0) {
        return Err(Error::DegenerateVariance(d));
    }
    let main = axis_f
        .iter()
        .zip(axis_p)
        .map(|(nf, p)| (conditional_term(nf, p) / mass - f0 * f0) / d)
        .collect();
    let total = comp_f
        .iter()
        .zip(comp_p)
        .map(|(nf, p)| 1.0 - (conditional_term(nf, p) / mass - f0 * f0) / d)
        .collect();
    Ok(OracleValues { f0, d, main, total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        assert_eq!(reference("product_triangle").unwrap().main[0], 7.0 / 27.0);
        let pi4 = reference("g_linear_pi4").unwrap();
        assert!((pi4.main[0] - 0.7941624).abs() < 1e-7);
        assert!((pi4.main[1] - 0.3297906).abs() < 1e-7);
        assert_eq!(reference("g_linear_pi6").unwrap().d, 0.4483218079);
        assert!(matches!(reference("nope"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn stored_values_are_consistent() {
        for c in reference_cases() {
            assert!(c.d > 0.0 && c.f0.is_finite(), "{}", c.id);
            assert!(c.indices().iter().all(|v| (0.0..=1.0).contains(v)), "{}", c.id);
            if c.dimension() == 2 {
                assert!((c.main[0] + c.total[1] - 1.0).abs() < 1e-12, "{}", c.id);
                assert!((c.main[1] + c.total[0] - 1.0).abs() < 1e-12, "{}", c.id);
            }
            let p = c.problem().unwrap();
            assert_eq!(p.dimension(), c.dimension());
        }
    }

    #[test]
    fn parabolic_constants() {
        let c = reference("g_parabolic_4").unwrap();
        assert!((c.main[0] - 0.3019537).abs() < 1e-7);
        assert!((c.main[1] - 0.3797931).abs() < 1e-7);
        assert!((c.d - 0.2518677).abs() < 1e-7);
    }

    #[test]
    fn k_function_formula_matches_rationals() {
        let s = k_function_main_effects(4);
        let c = reference("k_unconstrained").unwrap();
        for (a, b) in s.iter().zip(&c.main) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn g_unconstrained_closed_form() {
        let c = g_function_unconstrained(&[0.0, 1.0]);
        assert!((c.main[0] - 0.75).abs() < 1e-15);
        assert!((c.main[1] - 3.0 / 16.0).abs() < 1e-15);
        assert!((c.total[0] - 13.0 / 16.0).abs() < 1e-15);
        assert!((c.total[1] - 0.25).abs() < 1e-15);
        let big = g_function_unconstrained(&[1e6, 1e6]);
        assert!(big.d < 1e-12);
    }

    #[test]
    fn json_export_round_trips() {
        let text = reference_table_json().unwrap();
        let back: Vec<ReferenceCase> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, reference_cases());
    }

    #[test]
    fn oracle_on_product_triangle() {
        let m = reference("product_triangle").unwrap().problem().unwrap();
        let o = oracle_indices(&m, 1025).unwrap();
        assert!((o.values.main[0] - 7.0 / 27.0).abs() < 1e-4, "{o:?}");
        assert!((o.values.f0 - 5.0 / 12.0).abs() < 1e-5);
        assert!(o.error.main[0] < 1e-4);
    }

    #[test]
    fn oracle_budget_and_resolution() {
        let m = reference("k_unconstrained").unwrap().problem().unwrap();
        assert!(matches!(
            oracle_indices_with_budget(&m, 200, 1_000_000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(oracle_indices(&m, 4).is_err());
    }

    #[test]
    fn oracle_k_function_coarse() {
        let m = reference("k_i3").unwrap().problem().unwrap();
        let c = reference("k_i3").unwrap();
        let o = oracle_indices(&m, 24).unwrap();
        for i in 0..4 {
            assert!((o.values.main[i] - c.main[i]).abs() < 1e-2, "{o:?}");
            assert!((o.values.total[i] - c.total[i]).abs() < 1e-2, "{o:?}");
        }
    }
}
