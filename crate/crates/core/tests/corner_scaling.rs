//! With f ≡ 1 near a vertex of the unit cube, u(λx) = λ^{2s} u(x) while the walks stay near the vertex.

use std::sync::Arc;

use fracwalk_core::fields::{Constant, Zero};
use fracwalk_core::{estimate, Domain, Point, ProblemSpec};

#[test]
fn vertex_scaling() {
    let n = 10;
    for s in [0.25, 0.5, 0.75] {
        let p = ProblemSpec::new(Domain::unit_cube(n), s, Arc::new(Constant(1.0)), Arc::new(Zero)).unwrap();
        let far = estimate(&p, &Point::splat(n, 0.1).unwrap(), 4000, 3, 0).unwrap();
        let near = estimate(&p, &Point::splat(n, 0.001).unwrap(), 4000, 3, 0).unwrap();
        let want = 0.01f64.powf(2.0 * s);
        assert!((near.estimate / far.estimate / want - 1.0).abs() < 1e-3, "s={s}: {} / {}", near.estimate, far.estimate);
        assert!((near.avg_steps - far.avg_steps).abs() < 0.05 * far.avg_steps);
    }
}
