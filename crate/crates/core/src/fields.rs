//! Scalar fields used as sources, exterior data and reference solutions, plus
//! a name-based registry for the built-in test problems.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist, norm};
use crate::kernels::constants;
use crate::specfun::ln_gamma_unchecked;

/// A real function on ℝⁿ.
pub trait ScalarField: Send + Sync + fmt::Debug {
    fn eval(&self, x: &[f64]) -> f64;

    /// True when the field vanishes identically; lets the walk skip source draws.
    fn is_zero(&self) -> bool {
        false
    }

    /// The limit as |x| → ∞, if it exists.
    fn far_field(&self) -> Option<f64> {
        None
    }
}

pub type Field = Arc<dyn ScalarField>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero;

impl ScalarField for Zero {
    fn eval(&self, _: &[f64]) -> f64 {
        0.0
    }
    fn is_zero(&self) -> bool {
        true
    }
    fn far_field(&self) -> Option<f64> {
        Some(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl ScalarField for Constant {
    fn eval(&self, _: &[f64]) -> f64 {
        self.0
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
    fn far_field(&self) -> Option<f64> {
        Some(self.0)
    }
}

/// Wraps a closure; `far` is reported as the far-field value.
pub struct FnField<F> {
    f: F,
    far: Option<f64>,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnField<F> {
    pub fn new(f: F) -> Self {
        FnField { f, far: None }
    }

    pub fn with_far_field(mut self, value: f64) -> Self {
        self.far = Some(value);
        self
    }
}

impl<F> fmt::Debug for FnField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnField").field("far", &self.far).finish_non_exhaustive()
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> ScalarField for FnField<F> {
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
    fn far_field(&self) -> Option<f64> {
        self.far
    }
}

/// exp(−|x − x′|²).
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub x_prime: Vec<f64>,
}

impl ScalarField for Gaussian {
    fn eval(&self, x: &[f64]) -> f64 {
        (-dist(x, &self.x_prime).powi(2)).exp()
    }
    fn far_field(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Fundamental solution of (−Δ)ˢ centred at x′: a(n,s)|x−x′|^{2s−n}, or
/// (1/π)log|x−x′| when n = 1, s = ½.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalSolution {
    pub x_prime: Vec<f64>,
    coef: f64,
    exponent: f64,
    log: bool,
}

impl FundamentalSolution {
    pub fn new(n: usize, s: f64, x_prime: Vec<f64>) -> Result<Self> {
        check_len("example2_g", n, &x_prime)?;
        let k = constants(n, s)?;
        if n == 1 && s == 0.5 {
            return Ok(FundamentalSolution { x_prime, coef: 1.0 / PI, exponent: 0.0, log: true });
        }
        let coef = match k.a_ns {
            Some(a) => a,
            None => {
                // n = 1, s > ½: Γ(½−s) = Γ(3/2−s)/(½−s) is negative
                let g = ln_gamma_unchecked(1.5 - s).exp() / (0.5 - s);
                g / ((2.0 * s) * 2f64.ln() + 0.5 * PI.ln() + ln_gamma_unchecked(s)).exp()
            }
        };
        Ok(FundamentalSolution { x_prime, coef, exponent: 2.0 * s - n as f64, log: false })
    }
}

impl ScalarField for FundamentalSolution {
    fn eval(&self, x: &[f64]) -> f64 {
        let d = dist(x, &self.x_prime);
        if self.log {
            self.coef * d.ln()
        } else {
            self.coef * d.powf(self.exponent)
        }
    }
    fn far_field(&self) -> Option<f64> {
        (!self.log && self.exponent < 0.0).then_some(0.0)
    }
}

/// Source whose solution on the unit ball with zero exterior data is
/// (1−|x|²)₊^{1+s} (n ≥ 2) or x(1−x²)₊ˢ (n = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSource {
    n: usize,
    s: f64,
    coef: f64,
}

impl BumpSource {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        constants(n, s)?;
        let lg = ln_gamma_unchecked;
        let h = n as f64 / 2.0;
        let ln4s = 2.0 * s * 2f64.ln();
        let coef = if n == 1 {
            (ln4s + lg(1.0 + s) + lg(s + 1.5) - lg(1.5)).exp()
        } else {
            (ln4s + lg(2.0 + s) + lg(h + s) - lg(h)).exp()
        };
        Ok(BumpSource { n, s, coef })
    }
}

impl ScalarField for BumpSource {
    fn eval(&self, x: &[f64]) -> f64 {
        if self.n == 1 {
            self.coef * x[0]
        } else {
            let q = norm(x).powi(2);
            self.coef * (1.0 - (1.0 + 2.0 * self.s / self.n as f64) * q)
        }
    }
}

/// The exact solution paired with [`BumpSource`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSolution {
    n: usize,
    s: f64,
}

impl BumpSolution {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        constants(n, s)?;
        Ok(BumpSolution { n, s })
    }
}

impl ScalarField for BumpSolution {
    fn eval(&self, x: &[f64]) -> f64 {
        let q = 1.0 - norm(x).powi(2);
        if q <= 0.0 {
            return 0.0;
        }
        if self.n == 1 {
            x[0] * q.powf(self.s)
        } else {
            q.powf(1.0 + self.s)
        }
    }
    fn far_field(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Serializable description of a registry field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub name: String,
    /// Value of `constant`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Centre x′ of `example1_g` and `example2_g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_prime: Option<Vec<f64>>,
}

impl FieldSpec {
    pub fn named(name: impl Into<String>) -> Self {
        FieldSpec { name: name.into(), c: None, x_prime: None }
    }

    pub fn constant(c: f64) -> Self {
        FieldSpec { c: Some(c), ..FieldSpec::named("constant") }
    }

    pub fn centred(name: impl Into<String>, x_prime: Vec<f64>) -> Self {
        FieldSpec { x_prime: Some(x_prime), ..FieldSpec::named(name) }
    }

    /// Builds the field for dimension n and order s.
    pub fn resolve(&self, n: usize, s: f64) -> Result<Field> {
        let name = self.name.as_str();
        let centre = || -> Result<Vec<f64>> {
            let xp = self.x_prime.clone().ok_or_else(|| bad(name, "missing x_prime"))?;
            check_len(name, n, &xp)?;
            Ok(xp)
        };
        Ok(match name {
            "zero" => Arc::new(Zero),
            "constant" => {
                let c = self.c.ok_or_else(|| bad(name, "missing c"))?;
                if !c.is_finite() {
                    return Err(bad(name, "c must be finite"));
                }
                Arc::new(Constant(c))
            }
            "example1_g" => Arc::new(Gaussian { x_prime: centre()? }),
            "example2_g" => Arc::new(FundamentalSolution::new(n, s, centre()?)?),
            "example3_f" => Arc::new(BumpSource::new(n, s)?),
            "example3_exact" => Arc::new(BumpSolution::new(n, s)?),
            "example4_f" => Arc::new(Constant(1.0)),
            _ => return Err(Error::UnknownField(self.name.clone())),
        })
    }
}

/// Names accepted by [`FieldSpec::resolve`].
pub const FIELD_NAMES: [&str; 7] = ["zero", "constant", "example1_g", "example2_g", "example3_f", "example3_exact", "example4_f"];

fn bad(name: &str, reason: &str) -> Error {
    Error::FieldParams { name: name.into(), reason: reason.into() }
}

fn check_len(name: &str, n: usize, x: &[f64]) -> Result<()> {
    if x.len() != n {
        return Err(bad(name, &format!("x_prime has {} coordinates, expected {n}", x.len())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(bad(name, "x_prime must be finite"));
    }
    Ok(())
}
