//! Exact samplers for the exit and interior laws of a ball: inverse-transform
//! radii, sinᵐ angular laws by rejection, and isotropic directions.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};
use crate::geometry::{unit_direction, Point};
use crate::kernels::BallContext;
use crate::specfun::{erf, inv_reg_inc_beta_unchecked, ln_beta_unchecked, sin_power_integral};

/// Random stream of one walk, keyed by (master_seed, stream_index).
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        RngStream { master_seed, stream_index, rng }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = self.rng.random::<f64>();
            if u > 0.0 {
                return u;
            }
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// ±1 with probability 1/2 each.
    pub fn sign(&mut self) -> f64 {
        if self.rng.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

const U_MAX: f64 = 1.0 - f64::EPSILON / 2.0;
const FAR_LIMIT: f64 = 1e30;

fn check_u(u: f64) -> Result<()> {
    if !(u > 0.0 && u < 1.0) {
        return domain(format!("uniform variate must lie in (0,1), got {u}"));
    }
    Ok(())
}

fn check_order(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return domain(format!("order s must lie in (0,1), got {s}"));
    }
    Ok(())
}

/// Radial exit law with CDF 1 − I(r²/ρ²; s, 1−s) on (r, ∞).
#[derive(Debug, Clone, Copy)]
pub struct ExitRadiusLaw {
    s: f64,
    ln_b: f64,
}

impl ExitRadiusLaw {
    pub fn new(s: f64) -> Result<Self> {
        check_order(s)?;
        Ok(ExitRadiusLaw { s, ln_b: ln_beta_unchecked(s, 1.0 - s) })
    }

    /// ρ = r·(I⁻¹(1−u; s, 1−s))^{−1/2}.
    pub fn radius(&self, r: f64, u: f64) -> f64 {
        let u = u.min(U_MAX);
        let x = inv_reg_inc_beta_unchecked(1.0 - u, self.s, 1.0 - self.s, self.ln_b);
        let rho = r / x.sqrt();
        // ρ − r below one ulp of r rounds onto the sphere; keep the draw outside
        if rho > r {
            rho
        } else {
            f64::from_bits(r.to_bits() + 1)
        }
    }

    /// Draws ρ, redrawing the (probability < 1e−25) cases beyond 1e30·r.
    pub fn sample(&self, r: f64, rng: &mut RngStream) -> f64 {
        loop {
            let rho = self.radius(r, rng.uniform_open());
            if rho > r && rho <= FAR_LIMIT * r {
                return rho;
            }
        }
    }
}

/// ρ = r·(I⁻¹(1−u; s, 1−s))^{−1/2}, a draw from the radial exit law.
pub fn sample_exit_radius(r: f64, s: f64, u: f64) -> Result<f64> {
    check_u(u)?;
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("radius must be positive, got {r}"));
    }
    Ok(ExitRadiusLaw::new(s)?.radius(r, u))
}

/// ρ = r·u^{1/(2s)}, a draw from the radial interior law with CDF (ρ/r)^{2s}.
pub fn sample_interior_radius(r: f64, s: f64, u: f64) -> Result<f64> {
    check_u(u)?;
    check_order(s)?;
    Ok(r * u.powf(0.5 / s))
}

/// Rejection sampler for the density sinᵐ(φ)/I_m on (0, π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularLaw {
    pub m: u32,
    /// Shape m/2 of the Gaussian proposal exp(−α_m(x − π/2)²).
    pub alpha_m: f64,
    /// I_m/(√(2π/m)·erf(√(m/2)·π)).
    pub eta: f64,
    sd: f64,
}

/// One accepted angle with the proposal counts that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularDraw {
    pub angle: f64,
    /// Gaussian draws, including those redrawn for falling outside (0, π).
    pub proposals: u32,
    /// Draws that landed in (0, π).
    pub in_range: u32,
}

impl AngularLaw {
    pub fn new(m: u32) -> Result<Self> {
        if m < 1 {
            return domain("angular exponent m must be at least 1");
        }
        let mf = m as f64;
        let eta = sin_power_integral(m) / ((TAU / mf).sqrt() * erf((mf / 2.0).sqrt() * PI));
        Ok(AngularLaw { m, alpha_m: mf / 2.0, eta, sd: 1.0 / mf.sqrt() })
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        if self.m == 1 {
            return (1.0 - 2.0 * rng.uniform()).clamp(-1.0, 1.0).acos();
        }
        self.sample_counted(rng).angle
    }

    /// The m ≥ 2 rejection loop with its bookkeeping; m = 1 is drawn in closed form.
    pub fn sample_counted(&self, rng: &mut RngStream) -> AngularDraw {
        if self.m == 1 {
            let angle = (1.0 - 2.0 * rng.uniform()).clamp(-1.0, 1.0).acos();
            return AngularDraw { angle, proposals: 1, in_range: 1 };
        }
        let mut proposals = 0;
        let mut in_range = 0;
        loop {
            proposals += 1;
            let t = self.sd * rng.standard_normal();
            let x = FRAC_PI_2 + t;
            if !(x > 0.0 && x < PI) {
                continue;
            }
            in_range += 1;
            let w = rng.uniform();
            // sinᵐ(x)·exp((m/2)(x − π/2)²) = (cos t · e^{t²/2})ᵐ ≤ 1
            let ratio = (t.cos() * (0.5 * t * t).exp()).powi(self.m as i32);
            if w <= ratio {
                return AngularDraw { angle: x, proposals, in_range };
            }
        }
    }
}

/// Draws φ with density sinᵐ(φ)/I_m.
pub fn sample_sin_power_angle(m: u32, rng: &mut RngStream) -> Result<f64> {
    Ok(AngularLaw::new(m)?.sample(rng))
}

/// Angles (θ, φ₁..φ_{n−2}) of an isotropic direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phis: Vec<f64>,
}

/// Isotropic direction sampler in ℝⁿ; φ_i uses the law with m = n − 1 − i.
#[derive(Debug, Clone)]
pub struct DirectionSampler {
    n: usize,
    laws: Vec<AngularLaw>,
}

impl DirectionSampler {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return domain("dimension must be at least 1");
        }
        let laws = (1..n.saturating_sub(1)).map(|i| AngularLaw::new((n - 1 - i) as u32)).collect::<Result<_>>()?;
        Ok(DirectionSampler { n, laws })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Fills `phis` (length n − 2) and returns θ.
    pub fn angles(&self, rng: &mut RngStream, phis: &mut [f64]) -> f64 {
        let theta = TAU * rng.uniform();
        for (p, law) in phis.iter_mut().zip(&self.laws) {
            *p = law.sample(rng);
        }
        theta
    }

    /// Writes a unit vector into `out`; `scratch` holds n − 2 angles.
    pub fn unit(&self, rng: &mut RngStream, scratch: &mut [f64], out: &mut [f64]) {
        if self.n == 1 {
            out[0] = rng.sign();
            return;
        }
        let theta = self.angles(rng, scratch);
        unit_direction(theta, scratch, out);
    }
}

/// θ uniform on [0, 2π) and φᵢ with density sin^{n−1−i}/I_{n−1−i}.
pub fn sample_direction(n: usize, rng: &mut RngStream) -> Result<Direction> {
    if n < 2 {
        return domain("sample_direction needs n >= 2");
    }
    let sampler = DirectionSampler::new(n)?;
    let mut phis = vec![0.0; n - 2];
    let theta = sampler.angles(rng, &mut phis);
    Ok(Direction { theta, phis })
}

fn place(ctx: &BallContext, rho: f64, dir: &[f64]) -> Point {
    let coords = ctx.center.iter().zip(dir).map(|(c, d)| c + rho * d).collect();
    Point::new(coords).expect("finite sample")
}

/// Draws X from the exit distribution of B_r(c) started at c.
pub fn sample_exit_point(ctx: &BallContext, rng: &mut RngStream) -> Result<Point> {
    let n = ctx.constants.n;
    let law = ExitRadiusLaw::new(ctx.constants.s)?;
    let rho = law.sample(ctx.radius, rng);
    let sampler = DirectionSampler::new(n)?;
    let mut scratch = vec![0.0; n.saturating_sub(2)];
    let mut dir = vec![0.0; n];
    sampler.unit(rng, &mut scratch, &mut dir);
    Ok(place(ctx, rho, &dir))
}

/// Draws Y from the interior density p₂* on B_r(c).
pub fn sample_interior_point(ctx: &BallContext, rng: &mut RngStream) -> Result<Point> {
    let n = ctx.constants.n;
    let rho = ctx.radius * rng.uniform_open().powf(0.5 / ctx.constants.s);
    let sampler = DirectionSampler::new(n)?;
    let mut scratch = vec![0.0; n.saturating_sub(2)];
    let mut dir = vec![0.0; n];
    sampler.unit(rng, &mut scratch, &mut dir);
    Ok(place(ctx, rho, &dir))
}
