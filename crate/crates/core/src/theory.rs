//! Upper bound on the expected number of walk steps in a ball, the
//! Green-function bound constants it rests on, and an empirical check.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fields::Zero;
use crate::geometry::{dist, norm, Domain, Point};
use crate::kernels::constants;
use crate::specfun::{ln_beta_unchecked, ln_gamma_unchecked};
use crate::wos::{estimate, ProblemSpec};

/// Parameters of the step bound for a walk from x₀ in B_r(0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepBoundInputs {
    pub n: usize,
    pub s: f64,
    pub r: f64,
    pub x0_norm: f64,
    /// s for s ≤ ⅓, (1 − s)/2 above.
    pub s1: f64,
    /// −[(1+s₁+s)(s₁−n)/(1−s₁−s) + n], positive for n ≥ 2.
    pub a_s: f64,
    /// |x₀|/r.
    pub rho: f64,
}

/// The exponent split used by the bound.
pub fn split_exponent(s: f64) -> f64 {
    if s <= 1.0 / 3.0 {
        s
    } else {
        (1.0 - s) / 2.0
    }
}

impl StepBoundInputs {
    pub fn new(n: usize, s: f64, r: f64, x0_norm: f64) -> Result<Self> {
        if n < 2 {
            return domain("the step bound needs n >= 2");
        }
        constants(n, s)?;
        if !(r > 0.0 && r.is_finite()) {
            return domain("radius must be positive and finite");
        }
        if !(x0_norm >= 0.0 && x0_norm < r) {
            return domain("starting point must lie inside the ball");
        }
        let s1 = split_exponent(s);
        let q = 1.0 + s1 + s;
        let e = q * (s1 - n as f64) / (1.0 - s1 - s) + n as f64;
        Ok(StepBoundInputs { n, s, r, x0_norm, s1, a_s: -e, rho: x0_norm / r })
    }
}

/// Constants of the Green-function bounds and of the simplified step bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenBoundConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

/// C₁ … C₆ for n ≥ 2 and s ∈ (0, 1).
pub fn green_bound_constants(n: usize, s: f64) -> Result<GreenBoundConstants> {
    if n < 2 {
        return domain("green bound constants need n >= 2");
    }
    constants(n, s)?;
    let lg = ln_gamma_unchecked;
    let h = n as f64 / 2.0;
    let ln_pi = h * PI.ln();
    let ln4s = 2.0 * s * 2f64.ln();
    let c1 = (lg(h) - ln_pi - lg(s) - lg(s + 1.0)).exp();
    let c2 = (lg(h - s) - ln4s - ln_pi - lg(s)).exp();
    let c3 = ln4s.exp() * c1.max(c2);
    let c4 = (-ln_pi - lg(s)).exp() * (ln4s + lg(h) - lg(1.0 + s)).exp().max(lg(h - s).exp());
    let c5 = ((6.0 * s + 1.0) * 2f64.ln() - ln_beta_unchecked(s, h)).exp();
    let c6 = ((4.0 * s + 1.0) * 2f64.ln() + s.ln() + lg(s + h) + lg(h - s) - 2.0 * lg(h)).exp();
    Ok(GreenBoundConstants { c1, c2, c3, c4, c5, c6 })
}

/// Right-hand sides of the three Green-function bounds at (x, y) in B_r(0):
/// C₁d(x)ˢd(y)ˢ/|x−y|ⁿ, C₃d(x)ˢ/(d(y)ˢ|x−y|^{n−2s}) and
/// C₄d(x)ˢd(y)^{s−s₁}/|x−y|^{n−s₁}, with d the distance to the sphere.
pub fn green_bounds(c: &GreenBoundConstants, n: usize, s: f64, r: f64, x: &[f64], y: &[f64], s1: f64) -> Result<[f64; 3]> {
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: if x.len() != n { x.len() } else { y.len() } });
    }
    if !(s1 > 0.0 && s1 < 2.0 * s) {
        return domain("s1 must lie in (0, 2s)");
    }
    let (dx, dy) = (r - norm(x), r - norm(y));
    if dx <= 0.0 || dy <= 0.0 {
        return domain("both points must lie in the open ball");
    }
    let d = dist(x, y);
    let nf = n as f64;
    Ok([
        c.c1 * dx.powf(s) * dy.powf(s) / d.powf(nf),
        c.c3 * dx.powf(s) / (dy.powf(s) * d.powf(nf - 2.0 * s)),
        c.c4 * dx.powf(s) * dy.powf(s - s1) / d.powf(nf - s1),
    ])
}

/// Upper bound on E(l) for walks from |x₀| in B_r.
pub fn expected_steps_bound(inp: &StepBoundInputs) -> Result<f64> {
    let chk = StepBoundInputs::new(inp.n, inp.s, inp.r, inp.x0_norm)?;
    let StepBoundInputs { n, s, r, x0_norm: x, s1, a_s, .. } = chk;
    let lg = ln_gamma_unchecked;
    let h = n as f64 / 2.0;
    let c4 = green_bound_constants(n, s)?.c4;
    let ln_pref = (4.0 * s + 1.0) * 2f64.ln() + h * PI.ln() + lg(s + h) + lg(s + 1.0) - 2.0 * lg(h) + c4.ln();
    let q = 1.0 + s1 + s;
    let e = -a_s;
    // [(r+x)^e − ((r−x)/2)^e]/e with e < 0, in logs
    let half = (r - x) / 2.0;
    let ln_i22 = e * half.ln() + (-(e * ((r + x) / half).ln()).exp_m1()).ln() - a_s.ln();
    let ln_i21 = (n as f64 - q / 2.0) * r.ln() + ln_beta_unchecked(1.0 - q / 2.0, n as f64);
    let ln_second = s * (r - x).ln() + 2.0 * (s1 + s) / q * ln_i21 + (1.0 - s1 - s) / q * ln_i22;
    let first = 2f64.powf(s) / s1;
    Ok(ln_pref.exp() * (first + ln_second.exp()))
}

/// Mean steps of `samples` walks from x0 in B_r(0), with the bound and
/// whether mean + 3·stderr stays below it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepCheck {
    pub mean_steps: f64,
    pub std_error: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn empirical_step_check(
    n: usize,
    s: f64,
    r: f64,
    x0: &Point,
    samples: u64,
    seed: u64,
    parallelism: usize,
) -> Result<StepCheck> {
    if x0.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.dim() });
    }
    let bound = expected_steps_bound(&StepBoundInputs::new(n, s, r, x0.norm())?)?;
    let domain = Domain::ball(Point::origin(n), r)?;
    let p = ProblemSpec::new(domain, s, Arc::new(Zero), Arc::new(Zero))?;
    let sm = estimate(&p, x0, samples, seed, parallelism)?;
    let std_error = sm.steps_std_error;
    Ok(StepCheck { mean_steps: sm.avg_steps, std_error, bound, pass: sm.avg_steps + 3.0 * std_error <= bound })
}
