//! Fast invariant suites behind the `checks` command.

use std::sync::Arc;

use fracwalk_core::fields::{FieldSpec, Zero};
use fracwalk_core::kernels::{constants, green_function, interior_density, interior_weight, BallContext};
use fracwalk_core::quadrature::{weights_a, weights_b};
use fracwalk_core::specfun::{inv_reg_inc_beta, reg_inc_beta};
use fracwalk_core::theory::{expected_steps_bound, green_bound_constants, green_bounds, split_exponent, StepBoundInputs};
use fracwalk_core::{estimate, Domain, Point, ProblemSpec, RngStream};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn point_in_ball(rng: &mut RngStream, n: usize, r: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..n).map(|_| r * (2.0 * rng.uniform_open() - 1.0)).collect();
        if norm(&p) < 0.999 * r {
            return p;
        }
    }
}

fn kernel_identity(rng: &mut RngStream) -> CheckResult {
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let n = 2 + (rng.uniform() * 5.0) as usize;
        let s = 0.02 + 0.96 * rng.uniform();
        let r = 0.1 + 3.0 * rng.uniform();
        let c: Vec<f64> = (0..n).map(|_| 2.0 * rng.uniform() - 1.0).collect();
        let ctx = BallContext::new(Point::new(c.clone()).unwrap(), r, constants(n, s).unwrap()).unwrap();
        let mut y = point_in_ball(rng, n, r);
        if norm(&y) == 0.0 {
            continue;
        }
        for (yi, ci) in y.iter_mut().zip(&c) {
            *yi += ci;
        }
        let g = green_function(&ctx, &c, &y).unwrap();
        let w = interior_weight(&ctx, &y).unwrap() * interior_density(&ctx, &y).unwrap();
        worst = worst.max((g - w).abs() / g.abs());
    }
    CheckResult { name: "Green function = weight × density", pass: worst <= 1e-10, detail: format!("max rel {worst:.1e}") }
}

fn beta_round_trip(rng: &mut RngStream) -> CheckResult {
    let mut worst: f64 = 0.0;
    for _ in 0..5000 {
        let s = 0.02 + 0.96 * rng.uniform();
        let n = 2 + (rng.uniform() * 9.0) as usize;
        let (z, w) = if rng.uniform() < 0.5 { (s, 1.0 - s) } else { (n as f64 / 2.0 - s, s) };
        let x = rng.uniform();
        let back = inv_reg_inc_beta(reg_inc_beta(x, z, w).unwrap(), z, w).unwrap();
        worst = worst.max((back - x).abs());
    }
    CheckResult { name: "incomplete beta inverse round trip", pass: worst <= 1e-10, detail: format!("max abs {worst:.1e}") }
}

fn green_bound_pairs(rng: &mut RngStream) -> CheckResult {
    let mut violations = 0;
    let mut total = 0;
    for n in [2usize, 3, 5] {
        for s in [0.25, 0.5, 0.75] {
            let c = green_bound_constants(n, s).unwrap();
            let ctx = BallContext::unit(n, s).unwrap();
            for _ in 0..1000 {
                let x = point_in_ball(rng, n, 1.0);
                let y = point_in_ball(rng, n, 1.0);
                let g = green_function(&ctx, &x, &y).unwrap();
                let b = green_bounds(&c, n, s, 1.0, &x, &y, split_exponent(s)).unwrap();
                violations += b.iter().filter(|&&bk| g > bk * (1.0 + 1e-12)).count();
                total += 3;
            }
        }
    }
    CheckResult { name: "Green function bounds", pass: violations == 0, detail: format!("{violations}/{total} violations") }
}

fn bound_monotone() -> CheckResult {
    let mut bad = 0;
    for n in [2usize, 3, 5, 10] {
        let mut by_s = [0.0; 19];
        for (k, slot) in by_s.iter_mut().enumerate() {
            let s = 0.05 * (k + 1) as f64;
            let mut prev = 0.0;
            for i in 0..50 {
                let b = expected_steps_bound(&StepBoundInputs::new(n, s, 1.0, 0.98 * i as f64 / 49.0).unwrap()).unwrap();
                bad += usize::from(b < prev);
                prev = b;
                if i == 25 {
                    *slot = b;
                }
            }
        }
        bad += by_s.windows(2).filter(|w| w[1] < w[0]).count();
    }
    CheckResult { name: "step bound monotone in s and |x0|", pass: bad == 0, detail: format!("{bad} decreases") }
}

fn quadrature_weights() -> CheckResult {
    let mut worst: f64 = 0.0;
    for s in [0.1, 0.25, 0.5, 0.75, 0.9] {
        for k in 0..16 {
            let (a, b) = (k as f64 / 16.0, (k + 1) as f64 / 16.0);
            // the two hat weights sum to (b − a) times the integral of the singular factor
            let (p, q) = weights_a(s, a, b);
            let exact_a = (b - a) * 2f64.powf(1.0 - 2.0 * s) * (b.powf(2.0 * s) - a.powf(2.0 * s)) / (2.0 * s);
            worst = worst.max((p + q - exact_a).abs() / exact_a);
            let (p, q) = weights_b(s, a, b);
            let e = (b - a) * ((1.0 - a).powf(1.0 - s) - (1.0 - b).powf(1.0 - s)) / (1.0 - s) * 2f64.powf(s);
            worst = worst.max((p + q - e).abs() / e);
        }
    }
    CheckResult { name: "product quadrature weights", pass: worst <= 1e-12, detail: format!("max rel {worst:.1e}") }
}

fn registry_exterior() -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut rng = RngStream::new(5, 5);
    for n in [1usize, 2, 3, 5] {
        for s in [0.25, 0.5, 0.75] {
            let u = FieldSpec::named("example3_exact").resolve(n, s).unwrap();
            for _ in 0..200 {
                let dir: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
                let rho = 1.0 + 3.0 * rng.uniform();
                let y: Vec<f64> = dir.iter().map(|d| rho * d / norm(&dir)).collect();
                // zero boundary data outside the ball
                worst = worst.max(u.eval(&y).abs());
            }
        }
    }
    CheckResult { name: "exact source solution vanishes outside", pass: worst <= 1e-12, detail: format!("max {worst:.1e}") }
}

fn determinism() -> CheckResult {
    let n = 2;
    let p = ProblemSpec::new(
        Domain::unit_ball(n),
        0.5,
        Arc::new(Zero),
        FieldSpec::centred("example1_g", vec![3.0, 0.0]).resolve(n, 0.5).unwrap(),
    )
    .unwrap();
    let x = Point::new(vec![0.6, 0.6]).unwrap();
    let a = estimate(&p, &x, 5000, 11, 1).unwrap();
    let b = estimate(&p, &x, 5000, 11, 4).unwrap();
    let same = a.estimate.to_bits() == b.estimate.to_bits()
        && a.sample_variance.to_bits() == b.sample_variance.to_bits()
        && a.avg_steps.to_bits() == b.avg_steps.to_bits();
    CheckResult { name: "thread-count independence", pass: same, detail: "1 vs 4 threads".into() }
}

pub fn run_checks() -> Vec<CheckResult> {
    let mut rng = RngStream::new(2024, 0);
    vec![
        kernel_identity(&mut rng),
        beta_round_trip(&mut rng),
        green_bound_pairs(&mut rng),
        bound_monotone(),
        quadrature_weights(),
        registry_exterior(),
        determinism(),
    ]
}
