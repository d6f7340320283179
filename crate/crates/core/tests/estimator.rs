//! Statistical checks of the walk estimator against closed-form solutions.

use std::sync::Arc;

use fracwalk_core::fields::{FieldSpec, Zero};
use fracwalk_core::{estimate, Domain, EstimatorSummary, Point, ProblemSpec};

fn run(n: usize, s: f64, source: &str, boundary: FieldSpec, exact: &str, x: Vec<f64>, samples: u64) -> EstimatorSummary {
    let p = ProblemSpec::new(
        Domain::unit_ball(n),
        s,
        FieldSpec::named(source).resolve(n, s).unwrap(),
        boundary.resolve(n, s).unwrap(),
    )
    .unwrap()
    .with_exact(exact_spec(exact, n).resolve(n, s).unwrap());
    estimate(&p, &Point::new(x).unwrap(), samples, 20240601, 0).unwrap()
}

fn exact_spec(name: &str, n: usize) -> FieldSpec {
    if name == "example2_g" {
        FieldSpec::centred(name, vec![2f64.sqrt(); n])
    } else {
        FieldSpec::named(name)
    }
}

fn within(summary: &EstimatorSummary, k: f64) {
    let err = summary.abs_error.unwrap();
    assert!(err <= k * summary.std_error, "error {err:e} vs {k}·{:e} ({summary:?})", summary.std_error);
}

#[test]
fn green_data_in_two_dimensions() {
    let xp = vec![2f64.sqrt(); 2];
    let sm = run(2, 0.5, "zero", FieldSpec::centred("example2_g", xp), "example2_g", vec![0.6, 0.6], 100_000);
    within(&sm, 4.0);
    assert!((sm.exact.unwrap() - 0.13822).abs() < 1e-5);
    assert!((sm.avg_steps - 3.0).abs() < 0.1, "{}", sm.avg_steps);
}

#[test]
fn bump_solution_in_three_dimensions() {
    for s in [0.5, 0.75] {
        let sm = run(3, s, "example3_f", FieldSpec::named("zero"), "example3_exact", vec![0.5; 3], 100_000);
        within(&sm, 4.0);
    }
}

#[test]
fn bump_solution_in_one_dimension() {
    for s in [0.25, 0.5, 0.75] {
        let sm = run(1, s, "example3_f", FieldSpec::named("zero"), "example3_exact", vec![0.5], 100_000);
        assert!((sm.exact.unwrap() - 0.5 * 0.75f64.powf(s)).abs() < 1e-15);
        within(&sm, 4.0);
    }
}

#[test]
fn fundamental_solution_in_one_dimension() {
    for s in [0.25, 0.5, 0.75] {
        let p = ProblemSpec::new(
            Domain::unit_ball(1),
            s,
            Arc::new(Zero),
            FieldSpec::centred("example2_g", vec![2.0]).resolve(1, s).unwrap(),
        )
        .unwrap()
        .with_exact(FieldSpec::centred("example2_g", vec![2.0]).resolve(1, s).unwrap());
        let sm = estimate(&p, &Point::new(vec![0.5]).unwrap(), 100_000, 9, 0).unwrap();
        within(&sm, 4.0);
    }
}

#[test]
fn step_counts_do_not_depend_on_the_data() {
    let x = vec![0.6, 0.6];
    let a = run(2, 0.5, "zero", FieldSpec::centred("example1_g", vec![3.0, 0.0]), "zero", x.clone(), 50_000);
    let b = run(2, 0.5, "zero", FieldSpec::centred("example2_g", vec![2f64.sqrt(); 2]), "zero", x, 50_000);
    // same seed, same walks: the step sequences coincide
    assert_eq!(a.avg_steps, b.avg_steps);
}

#[test]
fn steps_grow_with_order() {
    let mut last = 0.0;
    for s in [0.25, 0.5, 0.75] {
        let sm = run(2, s, "zero", FieldSpec::named("zero"), "zero", vec![0.6, 0.6], 20_000);
        assert!(sm.avg_steps > last);
        last = sm.avg_steps;
    }
}
