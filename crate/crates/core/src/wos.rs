//! The fractional walk-on-spheres engine: single walks, the one-dimensional
//! source weights and the parallel Monte Carlo estimator.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fields::{Field, ScalarField};
use crate::geometry::{Domain, Point};
use crate::kernels::{constants, FracConstants};
use crate::sampling::{DirectionSampler, ExitRadiusLaw, RngStream};
use crate::specfun::gauss_2f1;
use crate::summation::Moments;

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// (−Δ)ˢu = f in Ω, u = g outside.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    domain: Domain,
    s: f64,
    source: Field,
    boundary: Field,
    exact: Option<Field>,
    max_steps: u64,
}

impl ProblemSpec {
    pub fn new(domain: Domain, s: f64, source: Field, boundary: Field) -> Result<Self> {
        constants(domain.dim(), s)?;
        Ok(ProblemSpec { domain, s, source, boundary, exact: None, max_steps: DEFAULT_MAX_STEPS })
    }

    pub fn with_exact(mut self, exact: Field) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Result<Self> {
        if max_steps < 1 {
            return domain("max_steps must be at least 1");
        }
        self.max_steps = max_steps;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn domain(&self) -> &Domain {
        &self.domain
    }
    pub fn source(&self) -> &Field {
        &self.source
    }
    pub fn boundary(&self) -> &Field {
        &self.boundary
    }
    pub fn exact(&self) -> Option<&Field> {
        self.exact.as_ref()
    }
    pub fn max_steps(&self) -> u64 {
        self.max_steps
    }
}

/// Outcome of one walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkResult {
    pub score: f64,
    pub steps: u64,
    pub capped: bool,
}

/// Monte Carlo summary over the uncapped walks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub estimate: f64,
    pub sample_variance: f64,
    pub std_error: f64,
    /// Mean step count of the uncapped walks.
    pub avg_steps: f64,
    /// Standard error of `avg_steps`.
    #[serde(default)]
    pub steps_std_error: f64,
    /// Uncapped walks entering the estimate.
    pub n_samples: u64,
    pub n_capped: u64,
    pub wall_seconds: f64,
    #[serde(default)]
    pub exact: Option<f64>,
    #[serde(default)]
    pub abs_error: Option<f64>,
}

/// One-dimensional source weight of a sample at distance ρ ∈ (0, r) from the
/// ball centre; the sample itself is drawn by [`Source1d::draw_rho`].
#[derive(Debug, Clone, Copy)]
pub struct Source1d {
    k: FracConstants,
}

impl Source1d {
    pub fn new(s: f64) -> Result<Self> {
        Ok(Source1d { k: constants(1, s)? })
    }

    /// ρ = r·u^{1/(2s)} for s < ½, uniform on (0, r) otherwise.
    pub fn draw_rho(&self, r: f64, rng: &mut RngStream) -> f64 {
        loop {
            let u = rng.uniform_open();
            let rho = if self.k.s < 0.5 { r * u.powf(0.5 / self.k.s) } else { r * u };
            if rho > 0.0 {
                return rho;
            }
        }
    }

    pub fn weight(&self, r: f64, rho: f64) -> f64 {
        let s = self.k.s;
        if rho >= r {
            return 0.0;
        }
        if s < 0.5 {
            return self.k.interior_weight_at(r, rho).unwrap_or(0.0);
        }
        if s == 0.5 {
            return 2.0 / PI * r * ((r + ((r - rho) * (r + rho)).sqrt()) / rho).ln();
        }
        let a = rho * rho;
        let b = (r - rho) * (r + rho);
        let z = -b / a;
        let f1 = gauss_2f1(-0.5, s, s + 1.0, z).expect("valid 2F1 parameters");
        let f2 = gauss_2f1(0.5, s + 1.0, s + 2.0, z).expect("valid 2F1 parameters");
        let bracket = a.powf(-1.5) * b.powf(s) / (s * (s + 1.0)) * (a * (s + 1.0) * f1 - b * s * f2);
        2.0 * self.k.kappa_integral * r * bracket
    }
}

/// One-dimensional source term weight·f(Y) for the ball (x_k − r_k, x_k + r_k).
pub fn source_contribution_1d(x_k: f64, r_k: f64, s: f64, f: &dyn ScalarField, rng: &mut RngStream) -> Result<f64> {
    if !(r_k > 0.0 && r_k.is_finite()) {
        return domain("source_contribution_1d: radius must be positive");
    }
    let src = Source1d::new(s)?;
    Ok(contribution_1d(&src, x_k, r_k, f, rng))
}

fn contribution_1d(src: &Source1d, x: f64, r: f64, f: &dyn ScalarField, rng: &mut RngStream) -> f64 {
    let rho = src.draw_rho(r, rng);
    let y = x + rng.sign() * rho;
    src.weight(r, rho) * f.eval(&[y])
}

/// A problem with its per-(n, s) sampling state prepared.
#[derive(Debug)]
pub struct Walker<'a> {
    problem: &'a ProblemSpec,
    k: FracConstants,
    exit: ExitRadiusLaw,
    dirs: DirectionSampler,
    src1d: Option<Source1d>,
    with_source: bool,
}

impl<'a> Walker<'a> {
    pub fn new(problem: &'a ProblemSpec) -> Result<Self> {
        let (n, s) = (problem.dim(), problem.s);
        let src1d = if n == 1 { Some(Source1d::new(s)?) } else { None };
        Ok(Walker {
            problem,
            k: constants(n, s)?,
            exit: ExitRadiusLaw::new(s)?,
            dirs: DirectionSampler::new(n)?,
            src1d,
            with_source: !problem.source.is_zero(),
        })
    }

    /// Runs one walk from x0, which must lie in the domain.
    pub fn walk(&self, x0: &[f64], rng: &mut RngStream) -> Result<WalkResult> {
        let p = self.problem;
        if !p.domain.contains(x0)? {
            return domain("walk start point must lie inside the domain");
        }
        let n = p.dim();
        let mut x = x0.to_vec();
        let mut dir = vec![0.0; n];
        let mut scratch = vec![0.0; n.saturating_sub(2)];
        let mut y = vec![0.0; n];
        let mut score = 0.0;
        let mut steps = 0u64;
        loop {
            let r = p.domain.depth(&x);
            if self.with_source {
                score += match &self.src1d {
                    Some(src) => contribution_1d(src, x[0], r, p.source.as_ref(), rng),
                    None => {
                        let rho = r * rng.uniform_open().powf(0.5 / self.k.s);
                        self.dirs.unit(rng, &mut scratch, &mut dir);
                        for i in 0..n {
                            y[i] = x[i] + rho * dir[i];
                        }
                        let w = self.k.interior_weight_at(r, rho).unwrap_or(0.0);
                        w * p.source.eval(&y)
                    }
                };
            }
            let rho = self.exit.sample(r, rng);
            self.dirs.unit(rng, &mut scratch, &mut dir);
            for i in 0..n {
                x[i] += rho * dir[i];
            }
            steps += 1;
            if !(p.domain.depth(&x) > 0.0) {
                score += p.boundary.eval(&x);
                return Ok(WalkResult { score, steps, capped: false });
            }
            if steps >= p.max_steps {
                return Ok(WalkResult { score, steps, capped: true });
            }
        }
    }
}

/// Single walk with stream `rng`.
pub fn run_walk(p: &ProblemSpec, x0: &Point, rng: &mut RngStream) -> Result<WalkResult> {
    Walker::new(p)?.walk(x0, rng)
}

const BLOCK: u64 = 1024;

#[derive(Debug, Clone, Copy, Default)]
struct Block {
    moments: Moments,
    step_moments: Moments,
    steps: u64,
    capped: u64,
}

/// Runs walks with stream indices 0..n_samples under `master_seed`.
/// `parallelism` is the worker count; 0 lets the runtime decide. Results do
/// not depend on it: walks are grouped in fixed blocks whose partial moments
/// are merged in index order.
pub fn estimate(p: &ProblemSpec, x0: &Point, n_samples: u64, master_seed: u64, parallelism: usize) -> Result<EstimatorSummary> {
    if n_samples < 2 {
        return domain("estimate needs at least two samples");
    }
    if x0.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: x0.dim() });
    }
    if !p.domain.contains(x0)? {
        return domain("evaluation point must lie inside the domain");
    }
    let start = Instant::now();
    let walker = Walker::new(p)?;
    let n_blocks = n_samples.div_ceil(BLOCK);
    let run_block = |b: u64| -> Result<Block> {
        let lo = b * BLOCK;
        let hi = (lo + BLOCK).min(n_samples);
        let mut scores = Vec::with_capacity((hi - lo) as usize);
        let mut step_counts = Vec::with_capacity((hi - lo) as usize);
        let mut block = Block::default();
        for idx in lo..hi {
            let mut rng = RngStream::new(master_seed, idx);
            let w = walker.walk(x0, &mut rng)?;
            if w.capped {
                block.capped += 1;
            } else {
                block.steps += w.steps;
                scores.push(w.score);
                step_counts.push(w.steps as f64);
            }
        }
        block.moments = Moments::of(&scores);
        block.step_moments = Moments::of(&step_counts);
        Ok(block)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let blocks: Vec<Block> = pool.install(|| (0..n_blocks).into_par_iter().map(run_block).collect::<Result<Vec<_>>>())?;
    let parts: Vec<Moments> = blocks.iter().map(|b| b.moments).collect();
    let m = Moments::merge_all(&parts);
    let n_capped: u64 = blocks.iter().map(|b| b.capped).sum();
    if m.count == 0 {
        return Err(Error::AllCapped(n_samples as usize));
    }
    let steps: u64 = blocks.iter().map(|b| b.steps).sum();
    let step_parts: Vec<Moments> = blocks.iter().map(|b| b.step_moments).collect();
    let sm = Moments::merge_all(&step_parts);
    let variance = m.variance();
    let exact = p.exact.as_ref().map(|u| u.eval(x0));
    Ok(EstimatorSummary {
        estimate: m.mean,
        sample_variance: variance,
        std_error: (variance / m.count as f64).sqrt(),
        avg_steps: steps as f64 / m.count as f64,
        steps_std_error: (sm.variance() / sm.count as f64).sqrt(),
        n_samples: m.count,
        n_capped,
        wall_seconds: start.elapsed().as_secs_f64(),
        exact,
        abs_error: exact.map(|u| (m.mean - u).abs()),
    })
}

#[cfg(test)]
mod tests;
