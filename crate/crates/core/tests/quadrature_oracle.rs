//! Scheme I against nested adaptive quadrature of the Poisson-kernel integral.

use std::f64::consts::{PI, TAU};

use fracwalk_core::fields::Gaussian;
use fracwalk_core::integrate::integrate;
use fracwalk_core::kernels::constants;
use fracwalk_core::quadrature::{scheme1_homogeneous, GridSpec};

/// ∫_{|y|>1} P(x, y)·exp(−|y − x′|²) dy in polar coordinates about the origin,
/// with (ρ − 1) = w^{1/(1−s)} absorbing the kernel singularity at the sphere.
fn oracle(n: usize, s: f64, x: &[f64], xp: &[f64]) -> f64 {
    let alpha = constants(n, s).unwrap().alpha;
    let x2: f64 = x.iter().map(|v| v * v).sum();
    let rho_max = 1.0 + xp.iter().map(|v| v * v).sum::<f64>().sqrt() + 8.0;
    let w_max = (rho_max - 1.0).powf(1.0 - s);
    let radial = |dir: &[f64]| -> f64 {
        let q = integrate(
            |w| {
                let d = w.powf(1.0 / (1.0 - s));
                let rho = 1.0 + d;
                let y: Vec<f64> = dir.iter().map(|c| rho * c).collect();
                let dxy2: f64 = y.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum();
                let dg2: f64 = y.iter().zip(xp).map(|(a, b)| (a - b).powi(2)).sum();
                // (ρ² − 1)^{−s} = d^{−s}(ρ + 1)^{−s}; d^{−s}dρ = dw/(1 − s)
                (1.0 - x2).powf(s) * (rho + 1.0).powf(-s) / (1.0 - s)
                    * (-dg2).exp()
                    * dxy2.powf(-(n as f64) / 2.0)
                    * rho.powi(n as i32 - 1)
            },
            0.0,
            w_max,
            1e-16,
            1e-11,
        );
        q.value
    };
    let total = if n == 2 {
        integrate(|t| radial(&[t.cos(), t.sin()]), 0.0, TAU, 1e-16, 1e-10).value
    } else {
        integrate(
            |p| integrate(|t| radial(&[p.sin() * t.cos(), p.sin() * t.sin(), p.cos()]), 0.0, TAU, 1e-16, 1e-10).value * p.sin(),
            0.0,
            PI,
            1e-16,
            1e-10,
        )
        .value
    };
    alpha * total
}

#[test]
fn two_dimensional_reference_values() {
    let g = Gaussian { x_prime: vec![3.0, 0.0] };
    for (s, reference) in [(0.25, 0.023400922), (0.5, 0.018758250), (0.75, 0.009907793)] {
        let exact = oracle(2, s, &[0.6, 0.6], &[3.0, 0.0]);
        assert!((exact - reference).abs() < 1e-9, "s={s}: oracle {exact}");
        let v = scheme1_homogeneous(2, s, 1.0, &g, &[0.6, 0.6], &GridSpec::uniform(256).unwrap()).unwrap();
        assert!((v - exact).abs() < 5e-7, "s={s}: {v} vs {exact}");
    }
}

#[test]
fn three_dimensional_reference_value() {
    let x = [0.5, 0.5, 0.5];
    let exact = oracle(3, 0.5, &x, &[3.0, 0.0, 0.0]);
    let g = Gaussian { x_prime: vec![3.0, 0.0, 0.0] };
    let v = scheme1_homogeneous(3, 0.5, 1.0, &g, &x, &GridSpec::uniform(64).unwrap()).unwrap();
    println!("3D oracle {exact:.10}, scheme {v:.10}");
    assert!((v - exact).abs() < 1e-4, "{v} vs {exact}");
}
