use std::sync::Arc;

use super::*;
use crate::fields::{Constant, FieldSpec, FnField, Zero};
use crate::integrate::integrate;

fn ball_problem(n: usize, s: f64, source: Field, boundary: Field) -> ProblemSpec {
    ProblemSpec::new(Domain::unit_ball(n), s, source, boundary).unwrap()
}

/// ∫₀^b t^{s−1}(t+a)^{−1/2} dt after t = v^{1/s}, which removes the endpoint singularity.
fn radial_green_integral(s: f64, a: f64, b: f64) -> f64 {
    let q = integrate(|v| (v.powf(1.0 / s) + a).powf(-0.5) / s, 0.0, b.powf(s), 1e-15, 1e-14);
    assert!(q.converged);
    q.value
}

#[test]
fn constant_exterior_data_is_reproduced_exactly() {
    for (n, s) in [(1, 0.3), (1, 0.5), (1, 0.8), (2, 0.25), (3, 0.75), (6, 0.5)] {
        let p = ball_problem(n, s, Arc::new(Zero), Arc::new(Constant(2.5)));
        let x0 = Point::splat(n, 0.3 / (n as f64).sqrt()).unwrap();
        for idx in 0..200 {
            let w = run_walk(&p, &x0, &mut RngStream::new(3, idx)).unwrap();
            assert_eq!(w.score, 2.5);
            assert!(w.steps >= 1 && !w.capped);
        }
    }
    let cube = ProblemSpec::new(Domain::unit_cube(4), 0.6, Arc::new(Zero), Arc::new(Constant(-1.0))).unwrap();
    let x0 = Point::splat(4, 0.2).unwrap();
    let summary = estimate(&cube, &x0, 500, 11, 2).unwrap();
    assert_eq!(summary.estimate, -1.0);
    assert_eq!(summary.sample_variance, 0.0);
}

#[test]
fn walks_end_outside_the_ball() {
    // exit radii sit within rounding of the sphere with positive probability,
    // so "outside" means |X| ≥ 1 in floating point
    for s in [0.2, 0.5, 0.9] {
        let outside = FnField::new(|x: &[f64]| if x.iter().map(|v| v * v).sum::<f64>().sqrt() >= 1.0 { 1.0 } else { 0.0 });
        let p = ball_problem(3, s, Arc::new(Zero), Arc::new(outside));
        let x0 = Point::new(vec![0.5, -0.4, 0.3]).unwrap();
        for idx in 0..300 {
            let w = run_walk(&p, &x0, &mut RngStream::new(5, idx)).unwrap();
            assert_eq!(w.score, 1.0);
        }
    }
}

#[test]
fn walk_from_centre_takes_one_step() {
    let p = ball_problem(5, 0.7, Arc::new(Constant(1.0)), Arc::new(Zero));
    for idx in 0..100 {
        let w = run_walk(&p, &Point::origin(5), &mut RngStream::new(1, idx)).unwrap();
        assert_eq!(w.steps, 1);
    }
}

#[test]
fn zero_problem_gives_zero() {
    let p = ball_problem(2, 0.5, Arc::new(Zero), Arc::new(Zero));
    let s = estimate(&p, &Point::new(vec![0.6, 0.6]).unwrap(), 1000, 0, 1).unwrap();
    assert_eq!((s.estimate, s.sample_variance, s.std_error), (0.0, 0.0, 0.0));
    assert_eq!(s.n_samples, 1000);
    assert_eq!(s.n_capped, 0);
}

#[test]
fn estimate_is_independent_of_thread_count() {
    let s = 0.6;
    let p = ball_problem(3, s, FieldSpec::named("example3_f").resolve(3, s).unwrap(), Arc::new(Zero));
    let x0 = Point::new(vec![0.5, 0.1, -0.2]).unwrap();
    let a = estimate(&p, &x0, 5000, 42, 1).unwrap();
    for threads in [2, 3, 8] {
        let b = estimate(&p, &x0, 5000, 42, threads).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.sample_variance.to_bits(), b.sample_variance.to_bits());
        assert_eq!(a.avg_steps.to_bits(), b.avg_steps.to_bits());
    }
    let c = estimate(&p, &x0, 5000, 43, 1).unwrap();
    assert_ne!(a.estimate, c.estimate);
}

#[test]
fn estimator_errors() {
    let p = ball_problem(2, 0.5, Arc::new(Zero), Arc::new(Constant(1.0)));
    assert!(matches!(estimate(&p, &Point::new(vec![1.0, 0.5]).unwrap(), 10, 0, 1), Err(Error::Domain(_))));
    assert!(matches!(estimate(&p, &Point::origin(2), 1, 0, 1), Err(Error::Domain(_))));
    assert!(matches!(estimate(&p, &Point::origin(3), 10, 0, 1), Err(Error::DimensionMismatch { .. })));
    let mut rng = RngStream::new(0, 0);
    assert!(run_walk(&p, &Point::new(vec![2.0, 0.0]).unwrap(), &mut rng).is_err());
    assert!(p.clone().with_max_steps(0).is_err());

    // a "domain" that is everywhere interior never releases the walker
    let trap = Domain::generic(2, 1.0, |_: &[f64]| 1.0).unwrap();
    let p = ProblemSpec::new(trap, 0.5, Arc::new(Zero), Arc::new(Zero)).unwrap().with_max_steps(7).unwrap();
    let w = run_walk(&p, &Point::origin(2), &mut rng).unwrap();
    assert!(w.capped && w.steps == 7);
    assert!(matches!(estimate(&p, &Point::origin(2), 20, 0, 1), Err(Error::AllCapped(20))));
}

#[test]
fn one_dimensional_weight_examples() {
    let half = Source1d::new(0.5).unwrap();
    assert_eq!(half.weight(1.0, 1.0), 0.0);
    let expect = 2.0 / PI * ((1.0 + 0.75f64.sqrt()) / 0.5).ln();
    assert!((half.weight(1.0, 0.5) - expect).abs() < 1e-15);
    assert!((expect - 0.8384).abs() < 5e-5);

    let k = constants(1, 0.75).unwrap();
    let oracle = 2.0 * k.kappa_integral * radial_green_integral(0.75, 0.25, 0.75);
    let w = Source1d::new(0.75).unwrap().weight(1.0, 0.5);
    assert!((w - oracle).abs() < 1e-8, "{w} vs {oracle}");
}

#[test]
fn one_dimensional_weights_match_green_function() {
    // weight × density of Y equals G(centre, Y) for every branch
    for s in [0.2, 0.35, 0.5, 0.6, 0.75, 0.9] {
        let src = Source1d::new(s).unwrap();
        let k = constants(1, s).unwrap();
        for r in [0.3, 1.0, 2.5] {
            for t in [0.01, 0.2, 0.5, 0.77, 0.99] {
                let rho = t * r;
                let (a, b) = (rho * rho, r * r - rho * rho);
                let green = k.kappa_integral * radial_green_integral(s, a, b);
                let density = if s < 0.5 { s * rho.powf(2.0 * s - 1.0) / r.powf(2.0 * s) } else { 0.5 / r };
                let got = src.weight(r, rho) * density;
                assert!((got - green).abs() <= 1e-8 * green, "s={s} r={r} rho={rho}: {got} vs {green}");
            }
        }
    }
}

#[test]
fn source_contribution_1d_checks_radius() {
    let mut rng = RngStream::new(0, 0);
    assert!(source_contribution_1d(0.0, 0.0, 0.5, &Zero, &mut rng).is_err());
    assert!(source_contribution_1d(0.0, 1.0, 1.5, &Zero, &mut rng).is_err());
    let v = source_contribution_1d(0.0, 1.0, 0.5, &Constant(1.0), &mut rng).unwrap();
    assert!(v >= 0.0 && v.is_finite());
}

fn radial(f: fn(f64) -> f64) -> Field {
    Arc::new(FnField::new(move |x: &[f64]| f(x.iter().map(|v| v * v).sum::<f64>().sqrt())))
}

/// From the centre every walk stops after one ball, so the mean score is
/// ∫ P(0,y) g(y) dy + ∫ G(0,y) f(y) dy, integrated here radially.
#[test]
fn one_step_mean_matches_representation() {
    let n = 3;
    let area = 4.0 * std::f64::consts::PI;
    let g = |r: f64| (-r * r).exp();
    let f = |r: f64| 1.0 / (1.0 + r * r);
    for s in [0.3, 0.7] {
        let ctx = crate::kernels::BallContext::unit(n, s).unwrap();
        let at = |r: f64| [r, 0.0, 0.0];
        // integrable (ρ − 1)^{−s} at the sphere; the rule never evaluates endpoints
        let outer = integrate(
            |rho| match crate::kernels::poisson_kernel(&ctx, &[0.0; 3], &at(rho)) {
                Ok(p) => p * g(rho) * area * rho * rho,
                // nodes of the innermost subintervals can round onto the sphere
                Err(_) => 0.0,
            },
            1.0,
            9.0,
            1e-10,
            1e-9,
        );
        // ρ = w^{1/(2s)} absorbs ρ^{2s−n} ρ^{n−1}
        let inner = integrate(
            |w| {
                let rho = w.powf(0.5 / s);
                let jac = w.powf(0.5 / s - 1.0) / (2.0 * s);
                crate::kernels::green_function(&ctx, &[0.0; 3], &at(rho)).unwrap() * f(rho) * area * rho * rho * jac
            },
            0.0,
            1.0,
            1e-14,
            1e-12,
        );
        assert!(outer.converged && inner.converged, "{outer:?} {inner:?}");
        let want = outer.value + inner.value;
        let p = ball_problem(n, s, radial(f), radial(g));
        let sm = estimate(&p, &Point::origin(n), 100_000, 41, 0).unwrap();
        assert_eq!(sm.avg_steps, 1.0);
        assert!((sm.estimate - want).abs() <= 4.0 * sm.std_error, "s={s}: {} vs {want} ± {}", sm.estimate, sm.std_error);
    }
}

#[test]
fn step_counts_do_not_depend_on_the_data() {
    let (n, s) = (2, 0.5);
    let x0 = Point::new(vec![0.6, 0.6]).unwrap();
    let g1 = FieldSpec::centred("example1_g", vec![3.0, 0.0]).resolve(n, s).unwrap();
    let g2 = FieldSpec::centred("example2_g", vec![2f64.sqrt(); 2]).resolve(n, s).unwrap();
    let p1 = ball_problem(n, s, Arc::new(Constant(1.0)), g1);
    let p2 = ball_problem(n, s, FieldSpec::named("example3_f").resolve(n, s).unwrap(), g2);
    // same streams and both sources nonzero: identical paths
    let a = estimate(&p1, &x0, 20_000, 9, 0).unwrap();
    let b = estimate(&p2, &x0, 20_000, 9, 0).unwrap();
    assert_eq!(a.avg_steps, b.avg_steps);
    // independent streams: agreement within two combined standard errors
    let c = estimate(&p2, &x0, 20_000, 10, 0).unwrap();
    let se = a.steps_std_error.hypot(c.steps_std_error);
    assert!((a.avg_steps - c.avg_steps).abs() <= 2.0 * se, "{} vs {} ± {se}", a.avg_steps, c.avg_steps);
}

#[test]
fn mean_steps_grow_with_s() {
    let x0 = Point::new(vec![0.5, -0.3, 0.2]).unwrap();
    let steps: Vec<f64> = [0.25, 0.5, 0.75]
        .iter()
        .map(|&s| estimate(&ball_problem(3, s, Arc::new(Zero), Arc::new(Constant(1.0))), &x0, 20_000, 2, 0).unwrap().avg_steps)
        .collect();
    assert!(steps.windows(2).all(|w| w[1] > w[0]), "{steps:?}");
}

#[test]
fn smooth_exact_solutions() {
    let n = 3;
    let p = ball_problem(n, 0.5, FieldSpec::named("example3_f").resolve(n, 0.5).unwrap(), Arc::new(Zero));
    let sm = estimate(&p, &Point::splat(n, 0.5).unwrap(), 100_000, 12, 0).unwrap();
    assert!((sm.estimate - 0.125).abs() <= 4.0 * sm.std_error, "{sm:?}");

    let g = FieldSpec::centred("example2_g", vec![2f64.sqrt(); 2]).resolve(2, 0.5).unwrap();
    let p = ball_problem(2, 0.5, Arc::new(Zero), g);
    let x0 = Point::new(vec![0.6, 0.6]).unwrap();
    let sm = estimate(&p, &x0, 100_000, 12, 0).unwrap();
    let exact = crate::kernels::constants(2, 0.5).unwrap().a_ns.unwrap() / (2.0 * (2f64.sqrt() - 0.6).powi(2)).sqrt();
    assert!((exact - 0.13822).abs() < 1e-5);
    assert!((sm.estimate - exact).abs() <= 4.0 * sm.std_error, "{sm:?} vs {exact}");
}
