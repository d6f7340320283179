//! Shared fixtures for the criterion benchmarks.

use fracwalk_core::{Domain, FieldSpec, Point, ProblemSpec};

/// Gaussian exterior data on the unit ball with the source switched off.
pub fn gaussian_ball(n: usize, s: f64) -> ProblemSpec {
    let mut x_prime = vec![0.0; n];
    x_prime[0] = 3.0;
    let g = FieldSpec::centred("example1_g", x_prime).resolve(n, s).expect("registered field");
    let f = FieldSpec::named("zero").resolve(n, s).expect("registered field");
    ProblemSpec::new(Domain::unit_ball(n), s, f, g).expect("valid problem")
}

/// Smooth source with zero exterior data on the unit ball.
pub fn source_ball(n: usize, s: f64) -> ProblemSpec {
    let f = FieldSpec::named("example3_f").resolve(n, s).expect("registered field");
    let g = FieldSpec::named("zero").resolve(n, s).expect("registered field");
    ProblemSpec::new(Domain::unit_ball(n), s, f, g).expect("valid problem")
}

/// f ≡ 1 on the unit cube.
pub fn unit_cube(n: usize, s: f64) -> ProblemSpec {
    let f = FieldSpec::named("example4_f").resolve(n, s).expect("registered field");
    let g = FieldSpec::named("zero").resolve(n, s).expect("registered field");
    ProblemSpec::new(Domain::unit_cube(n), s, f, g).expect("valid problem")
}

/// The point (c/√n)·1, at distance c from the origin.
pub fn diagonal(n: usize, c: f64) -> Point {
    Point::splat(n, c / (n as f64).sqrt()).expect("finite point")
}
