//! Constants, Poisson kernel and Green function of the ball, the normalizing
//! masses used by the walk, and the s → 1 limit of the Green function.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::geometry::{dist, Point};
use crate::specfun::{inc_beta_pair, ln_beta_unchecked, ln_gamma_unchecked};

/// The constant family of a given (n, s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracConstants {
    pub n: usize,
    pub s: f64,
    /// C(n,s) of the singular-integral definition of (−Δ)ˢ.
    pub c_ns: f64,
    /// α(n,s), Poisson kernel constant.
    pub alpha: f64,
    /// κ(n,s), Green function constant. For n = 1 this is 1/π, the value
    /// paired with the logarithmic s = 1/2 Green function.
    pub kappa: f64,
    /// Γ(n/2)/(2^{2s}π^{n/2}Γ(s)²) for every n; equals `kappa` for n ≥ 2 and is
    /// the constant in front of the integral form of G when n = 1.
    pub kappa_integral: f64,
    /// a(n,s) = Γ(n/2−s)/(2^{2s}π^{n/2}Γ(s)), defined when n/2 > s.
    pub a_ns: Option<f64>,
    /// ω_{n−1} = |S^{n−1}|.
    pub omega: f64,
    ln_b_interior: Option<f64>,
}

/// Evaluates the constant family for dimension n ≥ 1 and order s ∈ (0,1).
pub fn constants(n: usize, s: f64) -> Result<FracConstants> {
    if n < 1 {
        return domain("dimension must be at least 1");
    }
    if !(s > 0.0 && s < 1.0) {
        return domain(format!("order s must lie in (0,1), got {s}"));
    }
    let h = n as f64 / 2.0;
    let lg = ln_gamma_unchecked;
    let ln_pi_h = h * PI.ln();
    let ln4s = 2.0 * s * 2f64.ln();
    let c_ns = (s.ln() + ln4s + lg(h + s) - ln_pi_h - lg(1.0 - s)).exp();
    let alpha = (lg(h) - ln_pi_h - PI.ln()).exp() * (PI * s).sin();
    let kappa_integral = (lg(h) - ln4s - ln_pi_h - 2.0 * lg(s)).exp();
    let kappa = if n == 1 { 1.0 / PI } else { kappa_integral };
    let a_ns = (h > s).then(|| (lg(h - s) - ln4s - ln_pi_h - lg(s)).exp());
    let omega = (2f64.ln() + ln_pi_h - lg(h)).exp();
    let ln_b_interior = (h > s).then(|| ln_beta_unchecked(h - s, s));
    Ok(FracConstants { n, s, c_ns, alpha, kappa, kappa_integral, a_ns, omega, ln_b_interior })
}

impl FracConstants {
    /// a(x₀) = κB(s, n/2)ω_{n−1}r^{2s}/(2s).
    pub fn exit_mass(&self, r: f64) -> f64 {
        let h = self.n as f64 / 2.0;
        self.kappa_integral * ln_beta_unchecked(self.s, h).exp() * self.omega * r.powf(2.0 * self.s) / (2.0 * self.s)
    }

    /// b(x₀) = κB(n/2−s, s)r^{2s}π^{n/2}/(sΓ(n/2)), when n/2 > s.
    pub fn green_mass(&self, r: f64) -> Option<f64> {
        let h = self.n as f64 / 2.0;
        let lb = self.ln_b_interior?;
        Some(self.kappa_integral * (lb + h * PI.ln() - ln_gamma_unchecked(h)).exp() * r.powf(2.0 * self.s) / self.s)
    }

    /// Interior weight b·(1 − I(ρ²/r²; n/2−s, s)) at distance ρ from the centre.
    pub fn interior_weight_at(&self, r: f64, rho: f64) -> Option<f64> {
        let b = self.green_mass(r)?;
        let h = self.n as f64 / 2.0;
        let q = (rho / r).powi(2);
        let (_, upper) = inc_beta_pair(q, h - self.s, self.s, self.ln_b_interior?);
        Some(b * upper.max(0.0))
    }

    /// p₂*(y) = sΓ(n/2)/(r^{2s}π^{n/2})·ρ^{2s−n}, the interior sampling density.
    pub fn interior_density_at(&self, r: f64, rho: f64) -> f64 {
        let h = self.n as f64 / 2.0;
        self.s * (ln_gamma_unchecked(h) - h * PI.ln()).exp() * r.powf(-2.0 * self.s) * rho.powf(2.0 * self.s - self.n as f64)
    }
}

/// A ball B_r(c) together with the constants of its (n, s).
#[derive(Debug, Clone, PartialEq)]
pub struct BallContext {
    pub center: Point,
    pub radius: f64,
    pub constants: FracConstants,
}

impl BallContext {
    pub fn new(center: Point, radius: f64, constants: FracConstants) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return domain(format!("ball radius must be positive and finite, got {radius}"));
        }
        if center.dim() != constants.n {
            return Err(Error::DimensionMismatch { expected: constants.n, got: center.dim() });
        }
        Ok(BallContext { center, radius, constants })
    }

    /// Unit-radius ball at the origin.
    pub fn unit(n: usize, s: f64) -> Result<Self> {
        BallContext::new(Point::origin(n), 1.0, constants(n, s)?)
    }

    fn check(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.constants.n {
            return Err(Error::DimensionMismatch { expected: self.constants.n, got: x.len() });
        }
        Ok(dist(x, &self.center))
    }
}

/// P_r(x, y) = α((r²−|x−c|²)/(|y−c|²−r²))ˢ/|x−y|ⁿ.
pub fn poisson_kernel(ctx: &BallContext, x: &[f64], y: &[f64]) -> Result<f64> {
    let rx = ctx.check(x)?;
    let ry = ctx.check(y)?;
    let r = ctx.radius;
    if rx >= r {
        return domain("poisson_kernel: x must lie inside the ball");
    }
    if ry <= r {
        return domain("poisson_kernel: y must lie outside the closed ball");
    }
    let k = &ctx.constants;
    let ratio = ((r - rx) * (r + rx)) / ((ry - r) * (ry + r));
    Ok(k.alpha * ratio.powf(k.s) / dist(x, y).powi(k.n as i32))
}

fn r_star(r: f64, rx: f64, ry: f64, d: f64) -> (f64, f64) {
    // returns (A, r²|x−y|²) with r* = A / (r²|x−y|²)
    ((r - rx) * (r + rx) * (r - ry) * (r + ry), r * r * d * d)
}

/// Green function of the ball, G(x, y).
pub fn green_function(ctx: &BallContext, x: &[f64], y: &[f64]) -> Result<f64> {
    let rx = ctx.check(x)?;
    let ry = ctx.check(y)?;
    let r = ctx.radius;
    if rx >= r || ry >= r {
        return domain("green_function: both points must lie in the open ball");
    }
    let d = dist(x, y);
    if d == 0.0 {
        return Err(Error::Singular("green_function at x = y".into()));
    }
    let k = &ctx.constants;
    let (num, den) = r_star(r, rx, ry, d);
    if k.n == 1 {
        if (k.s - 0.5).abs() > 1e-15 {
            return Err(Error::Unsupported("one-dimensional Green function is defined for s = 1/2 only".into()));
        }
        let (x, y) = (x[0] - ctx.center[0], y[0] - ctx.center[0]);
        let arg = (r * r - x * y + ((r * r - x * x) * (r * r - y * y)).sqrt()) / (r * d);
        return Ok(k.kappa * arg.ln());
    }
    let h = k.n as f64 / 2.0;
    // ∫₀^{r*} t^{s−1}(1+t)^{−n/2} dt = B(s, n/2−s)·I(r*/(1+r*); s, n/2−s)
    let z = num / (num + den);
    let ln_b = ln_beta_unchecked(k.s, h - k.s);
    let (inc, _) = inc_beta_pair(z, k.s, h - k.s, ln_b);
    Ok(k.kappa * d.powf(2.0 * k.s - k.n as f64) * ln_b.exp() * inc)
}

/// a(x₀) for the ball of `ctx`.
pub fn exit_mass_a(ctx: &BallContext) -> f64 {
    ctx.constants.exit_mass(ctx.radius)
}

/// b(x₀) for the ball of `ctx`; requires n/2 > s.
pub fn green_mass_b(ctx: &BallContext) -> Result<f64> {
    ctx.constants.green_mass(ctx.radius).ok_or_else(|| {
        Error::Unsupported("green mass needs n/2 > s; one-dimensional s >= 1/2 uses the dedicated 1D weights".into())
    })
}

/// Source weight b·(1 − I(|y−c|²/r²; n/2−s, s)) of an interior sample y.
pub fn interior_weight(ctx: &BallContext, y: &[f64]) -> Result<f64> {
    let ry = ctx.check(y)?;
    if ry >= ctx.radius {
        return domain("interior_weight: y must lie inside the ball");
    }
    green_mass_b(ctx)?;
    Ok(ctx.constants.interior_weight_at(ctx.radius, ry).unwrap_or(0.0))
}

/// p₂*(y), the density of interior samples around the centre.
pub fn interior_density(ctx: &BallContext, y: &[f64]) -> Result<f64> {
    let ry = ctx.check(y)?;
    if ry >= ctx.radius || ry == 0.0 {
        return domain("interior_density: y must lie in the punctured open ball");
    }
    Ok(ctx.constants.interior_density_at(ctx.radius, ry))
}

/// Green function of the classical Laplacian on the ball (the s → 1 limit).
pub fn classical_green_limit(ctx: &BallContext, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = ctx.constants.n;
    if n < 2 {
        return Err(Error::Unsupported("classical limit needs n >= 2".into()));
    }
    let rx = ctx.check(x)?;
    let ry = ctx.check(y)?;
    let r = ctx.radius;
    if rx >= r || ry >= r {
        return domain("classical_green_limit: both points must lie in the open ball");
    }
    let d = dist(x, y);
    if d == 0.0 {
        return Err(Error::Singular("classical_green_limit at x = y".into()));
    }
    let (num, den) = r_star(r, rx, ry, d);
    let rs = num / den;
    let h = n as f64 / 2.0;
    let kappa1 = (ln_gamma_unchecked(h) - 2f64.ln() * 2.0 - h * PI.ln()).exp();
    if n == 2 {
        Ok(kappa1 * rs.ln_1p())
    } else {
        let m = h - 1.0;
        Ok(kappa1 / m * d.powf(2.0 - n as f64) * (1.0 - (-m * rs.ln_1p()).exp()))
    }
}
