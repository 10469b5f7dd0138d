//! Model functions, inequality constraints and the built-in test problems.
//!
//! Every model lives on the unit hypercube `[0,1]^n`. A [`ConstraintSet`]
//! carves the feasible domain out of the cube as the conjunction of
//! `g_j(x) >= 0`; points exactly on a boundary (`g_j(x) = 0`) are feasible.
//! Outside the feasible domain the model is continued by zero, see
//! [`ConstrainedModel::eval_extended`].

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Scalar function of a point in the unit hypercube.
pub type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Scalar function of one coordinate.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Constraint values with `|g| <= BOUNDARY_TOL` are treated as lying on the
/// boundary by [`ConstraintSet::quadrature_weight`].
pub const BOUNDARY_TOL: f64 = 1e-12;

/// A validated point of the unit hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct InputPoint(Vec<f64>);

impl InputPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: 0,
            });
        }
        if let Some((index, &value)) = coords
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::OutOfUnitCube { index, value });
        }
        Ok(InputPoint(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for InputPoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A single inequality constraint `g(x) >= 0`.
#[derive(Clone)]
pub struct Constraint {
    description: String,
    g: PointFn,
}

impl Constraint {
    pub fn new<F>(description: impl Into<String>, g: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Constraint {
            description: description.into(),
            g: Arc::new(g),
        }
    }

    /// Wraps a boolean predicate. The predicate has no boundary, so
    /// quadrature treats it as a plain step.
    pub fn from_predicate<F>(description: impl Into<String>, inside: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        Constraint::new(description, move |x| if inside(x) { 1.0 } else { -1.0 })
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.g)(x)
    }

    pub fn is_satisfied(&self, x: &[f64]) -> bool {
        self.value(x) >= 0.0
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Constraint({})", self.description)
    }
}

/// Conjunction of inequality constraints. An empty set admits the whole cube.
#[derive(Clone, Debug, Default)]
pub struct ConstraintSet {
    constraints: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, constraint: Constraint) -> Self {
        self.constraints.push(constraint);
        self
    }

    pub fn push(&mut self, constraint: Constraint) {
        self.constraints.push(constraint);
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter()
    }

    /// 1 iff every constraint holds.
    pub fn indicator(&self, x: &[f64]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    /// Heaviside weight with `U(0) = 1/2`: 1 strictly inside, 0 outside and
    /// one half per constraint whose value vanishes (within [`BOUNDARY_TOL`]).
    ///
    /// Grid rules use this instead of [`indicator`](Self::indicator) so that
    /// nodes falling exactly on a boundary carry the trapezoid's half weight.
    pub fn quadrature_weight(&self, x: &[f64]) -> f64 {
        let mut w = 1.0;
        for c in &self.constraints {
            let g = c.value(x);
            if g.abs() <= BOUNDARY_TOL {
                w *= 0.5;
            } else if g < 0.0 {
                return 0.0;
            }
        }
        w
    }

    pub fn description(&self) -> String {
        if self.constraints.is_empty() {
            "no constraints".to_string()
        } else {
            self.constraints
                .iter()
                .map(|c| c.description())
                .collect::<Vec<_>>()
                .join(" and ")
        }
    }
}

/// One-dimensional marginal of a product base density on `[0,1]`.
#[derive(Clone)]
pub struct Marginal {
    pub pdf: ScalarFn,
    pub inverse_cdf: ScalarFn,
}

impl Marginal {
    pub fn new<P, Q>(pdf: P, inverse_cdf: Q) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        Q: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Marginal {
            pdf: Arc::new(pdf),
            inverse_cdf: Arc::new(inverse_cdf),
        }
    }
}

/// Unconstrained joint density `p(x)` of the inputs on the unit hypercube.
///
/// Non-uniform densities are products of independent marginals, each with a
/// caller-supplied inverse CDF used to draw from it.
#[derive(Clone, Default)]
pub enum BaseDensity {
    #[default]
    Uniform,
    Product(Vec<Marginal>),
}

impl BaseDensity {
    pub fn is_uniform(&self) -> bool {
        matches!(self, BaseDensity::Uniform)
    }

    pub fn density(&self, x: &[f64]) -> f64 {
        match self {
            BaseDensity::Uniform => 1.0,
            BaseDensity::Product(m) => m.iter().zip(x).map(|(m, &xi)| (m.pdf)(xi)).product(),
        }
    }

    pub fn marginal_density(&self, i: usize, xi: f64) -> f64 {
        match self {
            BaseDensity::Uniform => 1.0,
            BaseDensity::Product(m) => (m[i].pdf)(xi),
        }
    }

    /// Maps a unit uniform onto coordinate `i` of the base density.
    pub fn transform_coord(&self, i: usize, u: f64) -> f64 {
        match self {
            BaseDensity::Uniform => u,
            BaseDensity::Product(m) => (m[i].inverse_cdf)(u),
        }
    }
}

impl fmt::Debug for BaseDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseDensity::Uniform => write!(f, "Uniform"),
            BaseDensity::Product(m) => write!(f, "Product({} marginals)", m.len()),
        }
    }
}

/// Explicitly known constrained density `p^Ω` together with the marginals
/// needed by the known-pdf estimators.
#[derive(Clone)]
pub struct ExplicitPdf {
    /// Joint constrained density, zero outside the feasible domain.
    pub joint: PointFn,
    /// `marginal(i, x_i)`: marginal density of coordinate `i`.
    pub marginal: Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>,
    /// `complement(i, x)`: marginal density of all coordinates except `i`,
    /// evaluated at `x` (the `i`-th entry is ignored).
    pub complement: Arc<dyn Fn(usize, &[f64]) -> f64 + Send + Sync>,
}

impl ExplicitPdf {
    /// Uniform density 2 on the upper triangle `x1 + x2 >= 1`, with
    /// marginals `2 x_i`.
    pub fn upper_triangle() -> Self {
        ExplicitPdf {
            joint: Arc::new(|x| if x[0] + x[1] >= 1.0 { 2.0 } else { 0.0 }),
            marginal: Arc::new(|_, xi| 2.0 * xi),
            complement: Arc::new(|i, x| 2.0 * x[1 - i]),
        }
    }
}

impl fmt::Debug for ExplicitPdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExplicitPdf")
    }
}

/// Model function on `[0,1]^n`, its feasible domain and input density.
#[derive(Clone)]
pub struct ConstrainedModel {
    name: String,
    dimension: usize,
    function: PointFn,
    constraints: ConstraintSet,
    base: BaseDensity,
    explicit_pdf: Option<ExplicitPdf>,
}

impl ConstrainedModel {
    pub fn new<F>(name: impl Into<String>, dimension: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dimension == 0 {
            return Err(Error::InvalidParameter(
                "model dimension must be at least 1".into(),
            ));
        }
        Ok(ConstrainedModel {
            name: name.into(),
            dimension,
            function: Arc::new(f),
            constraints: ConstraintSet::new(),
            base: BaseDensity::Uniform,
            explicit_pdf: None,
        })
    }

    pub fn with_constraints(mut self, constraints: ConstraintSet) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn with_base_density(mut self, base: BaseDensity) -> Result<Self> {
        if let BaseDensity::Product(m) = &base {
            if m.len() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    actual: m.len(),
                });
            }
        }
        self.base = base;
        Ok(self)
    }

    pub fn with_explicit_pdf(mut self, pdf: ExplicitPdf) -> Self {
        self.explicit_pdf = Some(pdf);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    pub fn base_density(&self) -> &BaseDensity {
        &self.base
    }

    pub fn explicit_pdf(&self) -> Option<&ExplicitPdf> {
        self.explicit_pdf.as_ref()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// Raw model value, no domain handling.
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.function)(x)
    }

    #[inline]
    pub fn is_feasible(&self, x: &[f64]) -> bool {
        self.constraints.indicator(x)
    }

    pub fn indicator(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.is_feasible(x))
    }

    /// `f(x) I(x)`: the model continued by zero outside the feasible domain.
    pub fn eval_extended(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.feasible_value(x)?.unwrap_or(0.0))
    }

    /// `Some(f(x))` for feasible points, `None` otherwise.
    pub(crate) fn feasible_value(&self, x: &[f64]) -> Result<Option<f64>> {
        if !self.is_feasible(x) {
            return Ok(None);
        }
        let v = self.eval(x);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                value: v,
                point: x.to_vec(),
            });
        }
        Ok(Some(v))
    }
}

impl fmt::Debug for ConstrainedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstrainedModel")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("constraints", &self.constraints.description())
            .field("base", &self.base)
            .finish()
    }
}

/// Built-in benchmark functions.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinModel {
    /// `f(x1, x2) = x1 x2`.
    Product2d,
    /// `prod_i (|4 x_i - 2| + a_i) / (1 + a_i)`.
    GFunction { a: Vec<f64> },
    /// `sum_i (-1)^i prod_{j <= i} x_j`.
    KFunction { n: usize },
}

impl BuiltinModel {
    /// Parses a CLI/config name. Empty `params` select the defaults
    /// (`a = (0, 1)` for the g-function, `n = 4` for the K-function).
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let m = match name {
            "product2d" | "product" => BuiltinModel::Product2d,
            "gfunction" | "g" => BuiltinModel::GFunction {
                a: if params.is_empty() {
                    vec![0.0, 1.0]
                } else {
                    params.to_vec()
                },
            },
            "kfunction" | "k" => {
                let n = match params {
                    [] => 4,
                    [n] if *n >= 1.0 && n.fract() == 0.0 => *n as usize,
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "kfunction takes one positive integer, got {params:?}"
                        )))
                    }
                };
                BuiltinModel::KFunction { n }
            }
            other => {
                return Err(Error::Unknown {
                    kind: "model",
                    name: other.to_string(),
                })
            }
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        match self {
            BuiltinModel::Product2d => Ok(()),
            BuiltinModel::GFunction { a } => {
                if a.is_empty() {
                    return Err(Error::InvalidParameter(
                        "g-function needs at least one coefficient".into(),
                    ));
                }
                if let Some(bad) = a.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                    return Err(Error::InvalidParameter(format!(
                        "g-function coefficients must be >= 0, got {bad}"
                    )));
                }
                Ok(())
            }
            BuiltinModel::KFunction { n } => {
                if *n == 0 {
                    return Err(Error::InvalidParameter(
                        "K-function dimension must be >= 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            BuiltinModel::Product2d => 2,
            BuiltinModel::GFunction { a } => a.len(),
            BuiltinModel::KFunction { n } => *n,
        }
    }

    pub fn build(&self) -> Result<ConstrainedModel> {
        self.validate()?;
        match self {
            BuiltinModel::Product2d => ConstrainedModel::new("product2d", 2, |x| x[0] * x[1]),
            BuiltinModel::GFunction { a } => {
                let a = a.clone();
                ConstrainedModel::new("gfunction", a.len(), move |x| g_function(&a, x))
            }
            BuiltinModel::KFunction { n } => ConstrainedModel::new("kfunction", *n, k_function),
        }
    }
}

pub fn g_function(a: &[f64], x: &[f64]) -> f64 {
    a.iter()
        .zip(x)
        .map(|(&ai, &xi)| ((4.0 * xi - 2.0).abs() + ai) / (1.0 + ai))
        .product()
}

pub fn k_function(x: &[f64]) -> f64 {
    let mut prod = 1.0;
    let mut sum = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        prod *= xi;
        if i % 2 == 0 {
            sum -= prod;
        } else {
            sum += prod;
        }
    }
    sum
}

/// Built-in constraint families.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinConstraint {
    None,
    /// `x1 + x2 - 1 >= 0`.
    UpperTriangle,
    /// `1 - tan(alpha) x1 - x2 >= 0`, `alpha` in `[0, pi/2)`.
    LinearAlpha(f64),
    /// `x2 - beta x1 (1 - x1) >= 0`, `beta >= 0`.
    ParabolicBeta(f64),
    /// `x1 + x2 <= 1`.
    KI1,
    /// `x3 + x4 <= 1`.
    KI2,
    /// `x1 + x3 <= 1`.
    KI3,
    /// `r^2 - |x - c|^2 >= 0` in the first two coordinates.
    Disk { center: [f64; 2], radius: f64 },
}

impl BuiltinConstraint {
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let one = |what: &str| -> Result<f64> {
            match params {
                [v] => Ok(*v),
                _ => Err(Error::InvalidParameter(format!(
                    "{what} takes exactly one parameter, got {params:?}"
                ))),
            }
        };
        let c = match name {
            "none" | "unconstrained" => BuiltinConstraint::None,
            "upper_triangle" | "triangle" => BuiltinConstraint::UpperTriangle,
            "linear_alpha" | "linear" => BuiltinConstraint::LinearAlpha(one("linear_alpha")?),
            "parabolic_beta" | "parabolic" => {
                BuiltinConstraint::ParabolicBeta(one("parabolic_beta")?)
            }
            "k_i1" => BuiltinConstraint::KI1,
            "k_i2" => BuiltinConstraint::KI2,
            "k_i3" => BuiltinConstraint::KI3,
            "disk" => match params {
                [cx, cy, r] => BuiltinConstraint::Disk {
                    center: [*cx, *cy],
                    radius: *r,
                },
                _ => {
                    return Err(Error::InvalidParameter(
                        "disk takes center x, center y and radius".into(),
                    ))
                }
            },
            other => {
                return Err(Error::Unknown {
                    kind: "constraint",
                    name: other.to_string(),
                })
            }
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            BuiltinConstraint::LinearAlpha(alpha) => {
                if !(0.0..FRAC_PI_2).contains(&alpha) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha must lie in [0, pi/2), got {alpha}"
                    )));
                }
            }
            BuiltinConstraint::ParabolicBeta(beta) => {
                if !(beta.is_finite() && beta >= 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "beta must be >= 0, got {beta}"
                    )));
                }
            }
            BuiltinConstraint::Disk { radius, .. } => {
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "disk radius must be positive, got {radius}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn min_dimension(&self) -> usize {
        match self {
            BuiltinConstraint::None => 1,
            BuiltinConstraint::KI2 => 4,
            BuiltinConstraint::KI3 => 3,
            _ => 2,
        }
    }

    pub fn build(&self, dimension: usize) -> Result<ConstraintSet> {
        self.validate()?;
        if dimension < self.min_dimension() {
            return Err(Error::InvalidParameter(format!(
                "{self:?} needs at least {} dimensions, model has {dimension}",
                self.min_dimension()
            )));
        }
        let c = match *self {
            BuiltinConstraint::None => return Ok(ConstraintSet::new()),
            BuiltinConstraint::UpperTriangle => {
                Constraint::new("x1 + x2 - 1 >= 0", |x| x[0] + x[1] - 1.0)
            }
            BuiltinConstraint::LinearAlpha(alpha) => {
                let t = alpha.tan();
                Constraint::new(format!("1 - tan({alpha}) x1 - x2 >= 0"), move |x| {
                    1.0 - t * x[0] - x[1]
                })
            }
            BuiltinConstraint::ParabolicBeta(beta) => {
                Constraint::new(format!("x2 - {beta} x1 (1 - x1) >= 0"), move |x| {
                    x[1] - beta * x[0] * (1.0 - x[0])
                })
            }
            BuiltinConstraint::KI1 => Constraint::new("x1 + x2 <= 1", |x| 1.0 - x[0] - x[1]),
            BuiltinConstraint::KI2 => Constraint::new("x3 + x4 <= 1", |x| 1.0 - x[2] - x[3]),
            BuiltinConstraint::KI3 => Constraint::new("x1 + x3 <= 1", |x| 1.0 - x[0] - x[2]),
            BuiltinConstraint::Disk { center, radius } => Constraint::new(
                format!("|x - ({}, {})| <= {radius}", center[0], center[1]),
                move |x| {
                    let dx = x[0] - center[0];
                    let dy = x[1] - center[1];
                    radius * radius - dx * dx - dy * dy
                },
            ),
        };
        Ok(ConstraintSet::new().with(c))
    }
}

/// Builds a built-in model with a built-in constraint attached.
pub fn builtin_problem(
    model: &BuiltinModel,
    constraint: &BuiltinConstraint,
) -> Result<ConstrainedModel> {
    let m = model.build()?;
    let cs = constraint.build(m.dimension())?;
    let m = m.with_constraints(cs);
    if *model == BuiltinModel::Product2d && *constraint == BuiltinConstraint::UpperTriangle {
        return Ok(m.with_explicit_pdf(ExplicitPdf::upper_triangle()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn triangle() -> ConstrainedModel {
        builtin_problem(&BuiltinModel::Product2d, &BuiltinConstraint::UpperTriangle).unwrap()
    }

    #[test]
    fn triangle_indicator() {
        let m = triangle();
        assert!(m.indicator(&[0.8, 0.5]).unwrap());
        assert!(!m.indicator(&[0.2, 0.5]).unwrap());
    }

    #[test]
    fn empty_constraint_set_admits_everything() {
        let m = BuiltinModel::Product2d.build().unwrap();
        for x in [[0.0, 0.0], [1.0, 1.0], [0.3, 0.1]] {
            assert!(m.indicator(&x).unwrap());
        }
    }

    #[test]
    fn indicator_rejects_wrong_dimension() {
        let m = triangle();
        assert_eq!(
            m.indicator(&[0.5]),
            Err(Error::DimensionMismatch {
                expected: 2,
                actual: 1
            })
        );
    }

    #[test]
    fn eval_extended_zero_outside() {
        let m = triangle();
        assert_eq!(m.eval_extended(&[0.5, 0.75]).unwrap(), 0.375);
        assert_eq!(m.eval_extended(&[0.1, 0.1]).unwrap(), 0.0);
        let g = BuiltinModel::GFunction { a: vec![0.0, 1.0] }.build().unwrap();
        assert_eq!(g.eval_extended(&[0.5, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn eval_extended_reports_non_finite() {
        let m = ConstrainedModel::new("pole", 1, |x| 1.0 / (x[0] - 0.5)).unwrap();
        assert!(matches!(
            m.eval_extended(&[0.5]),
            Err(Error::NonFinite { .. })
        ));
        let fenced = m.with_constraints(ConstraintSet::new().with(Constraint::new("x < 0.4", |x| 0.4 - x[0])));
        assert_eq!(fenced.eval_extended(&[0.5]).unwrap(), 0.0);
    }

    #[test]
    fn builtin_values() {
        let g = BuiltinModel::from_name("gfunction", &[0.0, 1.0])
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(g.eval(&[0.25, 0.75]), 1.0);
        let k2 = BuiltinModel::from_name("kfunction", &[2.0]).unwrap().build().unwrap();
        assert_eq!(k2.eval(&[0.5, 0.5]), -0.25);
        let k4 = BuiltinModel::from_name("kfunction", &[]).unwrap().build().unwrap();
        assert_eq!(k4.eval(&[1.0; 4]), 0.0);
    }

    #[test]
    fn builtin_model_errors() {
        assert!(matches!(
            BuiltinModel::from_name("banana", &[]),
            Err(Error::Unknown { .. })
        ));
        assert!(BuiltinModel::from_name("gfunction", &[-1.0]).is_err());
        assert!(BuiltinModel::from_name("kfunction", &[0.0]).is_err());
        assert!(BuiltinModel::from_name("kfunction", &[2.5]).is_err());
    }

    #[test]
    fn builtin_constraints() {
        let lin = BuiltinConstraint::LinearAlpha(FRAC_PI_4).build(2).unwrap();
        assert!(lin.indicator(&[0.5, 0.5]));
        let par = BuiltinConstraint::ParabolicBeta(4.0).build(2).unwrap();
        assert!(!par.indicator(&[0.5, 0.5]));
        let ki1 = BuiltinConstraint::KI1.build(4).unwrap();
        assert!(ki1.indicator(&[0.3, 0.6, 0.9, 0.9]));
        assert!(BuiltinConstraint::KI2.build(3).is_err());
    }

    #[test]
    fn builtin_constraint_parameter_errors() {
        assert!(BuiltinConstraint::from_name("linear_alpha", &[FRAC_PI_2]).is_err());
        assert!(BuiltinConstraint::from_name("linear_alpha", &[-0.1]).is_err());
        assert!(BuiltinConstraint::from_name("parabolic_beta", &[-1.0]).is_err());
        assert!(BuiltinConstraint::from_name("linear_alpha", &[FRAC_PI_6]).is_ok());
        assert!(matches!(
            BuiltinConstraint::from_name("ellipse", &[]),
            Err(Error::Unknown { .. })
        ));
    }

    #[test]
    fn g_function_large_a_tends_to_one() {
        let g = BuiltinModel::GFunction { a: vec![1e6; 3] }.build().unwrap();
        for x in [[0.0, 0.5, 1.0], [0.1, 0.9, 0.3], [0.5, 0.5, 0.5]] {
            assert!((g.eval(&x) - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn quadrature_weight_halves_on_boundary() {
        let cs = BuiltinConstraint::UpperTriangle.build(2).unwrap();
        assert_eq!(cs.quadrature_weight(&[0.25, 0.75]), 0.5);
        assert_eq!(cs.quadrature_weight(&[0.8, 0.75]), 1.0);
        assert_eq!(cs.quadrature_weight(&[0.1, 0.1]), 0.0);
        // both sides of the corner lie on two boundaries
        let two = cs
            .clone()
            .with(Constraint::new("x1 <= 0.25", |x| 0.25 - x[0]));
        assert_eq!(two.quadrature_weight(&[0.25, 0.75]), 0.25);
    }

    #[test]
    fn input_point_validation() {
        assert!(InputPoint::new(vec![0.0, 1.0]).is_ok());
        assert!(matches!(
            InputPoint::new(vec![0.5, 1.5]),
            Err(Error::OutOfUnitCube { index: 1, .. })
        ));
        assert!(InputPoint::new(vec![]).is_err());
    }
}
