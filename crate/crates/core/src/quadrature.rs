//! Deterministic tensor-grid quadrature of the ball representation formula
//! ("Scheme I"): exterior data through the Poisson kernel for n ∈ {2, 3}, and
//! the Green-function source term in two dimensions.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fields::ScalarField;
use crate::geometry::{norm, Reflection};
use crate::kernels::constants;
use crate::summation::{pairwise_sum, CompensatedSum};

/// Uniform grid counts; each step size is 1/count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_rho: usize,
    pub n_theta: usize,
    /// Polar angle count (n = 3 only).
    pub n_phi: usize,
    /// Count for the auxiliary t variable of the source scheme.
    pub n_t: usize,
}

impl GridSpec {
    /// Every step equal to 1/n.
    pub fn uniform(n: usize) -> Result<Self> {
        let g = GridSpec { n_rho: n, n_theta: n, n_phi: n, n_t: n };
        g.validate()?;
        Ok(g)
    }

    /// From step sizes, each of which must be the reciprocal of an integer ≥ 2.
    pub fn from_steps(h_rho: f64, h_theta: f64, h_phi: f64, h_t: f64) -> Result<Self> {
        let count = |h: f64| -> Result<usize> {
            let n = (1.0 / h).round();
            if !(h > 0.0) || n < 2.0 || ((1.0 / h) - n).abs() > 1e-9 * n {
                return domain(format!("grid step {h} is not 1/N for an integer N >= 2"));
            }
            Ok(n as usize)
        };
        Ok(GridSpec { n_rho: count(h_rho)?, n_theta: count(h_theta)?, n_phi: count(h_phi)?, n_t: count(h_t)? })
    }

    pub fn validate(&self) -> Result<()> {
        if [self.n_rho, self.n_theta, self.n_phi, self.n_t].iter().any(|&c| c < 2) {
            return domain("every grid count must be at least 2");
        }
        Ok(())
    }

    pub fn h_rho(&self) -> f64 {
        1.0 / self.n_rho as f64
    }
    pub fn h_theta(&self) -> f64 {
        1.0 / self.n_theta as f64
    }
    pub fn h_phi(&self) -> f64 {
        1.0 / self.n_phi as f64
    }
    pub fn h_t(&self) -> f64 {
        1.0 / self.n_t as f64
    }
}

/// ∫_{a}^{b} (ρ/2)^{2s−1}(b − ρ) dρ and ∫_{a}^{b} (ρ/2)^{2s−1}(ρ − a) dρ.
pub fn weights_a(s: f64, a: f64, b: f64) -> (f64, f64) {
    let c = 2f64.powf(1.0 - 2.0 * s);
    let d0 = (b.powf(2.0 * s) - a.powf(2.0 * s)) / (2.0 * s);
    let d1 = (b.powf(2.0 * s + 1.0) - a.powf(2.0 * s + 1.0)) / (2.0 * s + 1.0);
    (c * (b * d0 - d1), c * (d1 - a * d0))
}

/// ∫_{a}^{b} ((1−ρ)/2)^{−s}(b − ρ) dρ and ∫_{a}^{b} ((1−ρ)/2)^{−s}(ρ − a) dρ.
pub fn weights_b(s: f64, a: f64, b: f64) -> (f64, f64) {
    let (wa, wb) = (1.0 - a, 1.0 - b);
    let c = 2f64.powf(s);
    let e1 = (wa.powf(1.0 - s) - wb.powf(1.0 - s)) / (1.0 - s);
    let e2 = (wa.powf(2.0 - s) - wb.powf(2.0 - s)) / (2.0 - s);
    (c * (e2 - wb * e1), c * (wa * e1 - e2))
}

/// Product-trapezoid radial rule on ρ ∈ [0, 1] for the substituted integrand
/// ρ^{2s−1}(1−ρ²)^{−s}·smooth(ρ): nodes and weights including every factor but
/// the smooth part.
fn radial_rule(s: f64, n: usize) -> Vec<(f64, f64)> {
    let h = 1.0 / n as f64;
    let node = |i: usize| i as f64 * h;
    // node i collects the right weight of cell i and the left weight of cell i+1
    let collect = |w: &dyn Fn(f64, f64) -> (f64, f64)| -> Vec<f64> {
        let mut out = vec![0.0; n + 1];
        for i in 1..=n {
            let (left, right) = w(node(i - 1), node(i));
            out[i - 1] += left;
            out[i] += right;
        }
        out.iter().map(|v| v / h).collect()
    };
    let mut rule = Vec::with_capacity(2 * n + 2);
    if s < 0.5 {
        // [0, ½]: ρ = ρ′/2, singular weight (ρ′/2)^{2s−1}
        let wa = collect(&|a, b| weights_a(s, a, b));
        for (i, w) in wa.iter().enumerate() {
            let rho = node(i) / 2.0;
            rule.push((rho, 0.5 * w * (1.0 - rho * rho).powf(-s)));
        }
        // [½, 1]: ρ = (ρ′+1)/2, singular weight ((1−ρ′)/2)^{−s}
        let wb = collect(&|a, b| weights_b(s, a, b));
        for (i, w) in wb.iter().enumerate() {
            let p = node(i);
            let rho = (p + 1.0) / 2.0;
            rule.push((rho, 0.5 * w * ((3.0 + p) / 2.0).powf(-s) * rho.powf(2.0 * s - 1.0)));
        }
    } else {
        // (1−ρ)^{−s} = 2^{−s}((1−ρ)/2)^{−s}
        let wb = collect(&|a, b| weights_b(s, a, b));
        let c = 2f64.powf(-s);
        for (i, w) in wb.iter().enumerate() {
            let rho = node(i);
            let smooth = if rho == 0.0 {
                if s == 0.5 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (1.0 + rho).powf(-s) * rho.powf(2.0 * s - 1.0)
            };
            rule.push((rho, c * w * smooth));
        }
    }
    rule
}

struct AngularNode {
    dir: Vec<f64>,
    cos_psi: f64,
    weight: f64,
}

/// Trapezoid nodes on θ ∈ [0, 2π] (and φ ∈ [0, π] with the sin φ Jacobian for n = 3).
fn angular_rule(n: usize, grid: &GridSpec) -> Vec<AngularNode> {
    let trap = |count: usize, len: f64| -> Vec<(f64, f64)> {
        let h = len / count as f64;
        (0..=count).map(|j| (j as f64 * h, if j == 0 || j == count { h / 2.0 } else { h })).collect()
    };
    let thetas = trap(grid.n_theta, TAU);
    let mut out = Vec::new();
    if n == 2 {
        for (t, w) in thetas {
            out.push(AngularNode { dir: vec![t.sin(), t.cos()], cos_psi: t.cos(), weight: w });
        }
    } else {
        for (p, wp) in trap(grid.n_phi, PI) {
            let sp = p.sin();
            if sp == 0.0 || wp == 0.0 {
                continue;
            }
            for &(t, wt) in &thetas {
                out.push(AngularNode { dir: vec![sp * t.sin(), sp * t.cos(), p.cos()], cos_psi: p.cos(), weight: wp * wt * sp });
            }
        }
    }
    out
}

/// Distance standing in for the point at infinity when a field has no far-field value.
const FAR_FACTOR: f64 = 1e12;

/// Scheme I for (−Δ)ˢu = 0 in B_r(0), u = g outside, evaluated at x (n ∈ {2, 3}).
pub fn scheme1_homogeneous(n: usize, s: f64, r: f64, g: &dyn ScalarField, x: &[f64], grid: &GridSpec) -> Result<f64> {
    if n != 2 && n != 3 {
        return Err(Error::Unsupported(format!("homogeneous quadrature covers n = 2, 3, not {n}")));
    }
    check_ball(n, r, x)?;
    grid.validate()?;
    let k = constants(n, s)?;
    let xn = norm(x);
    let refl = Reflection::to_last_axis(x);
    let radial = radial_rule(s, grid.n_rho);
    let angular = angular_rule(n, grid);
    let far = g.far_field();
    let nf = n as f64;

    let rows: Vec<f64> = radial
        .par_iter()
        .map(|&(rho, w)| {
            if w == 0.0 {
                return 0.0;
            }
            let mut y_rot = vec![0.0; n];
            let mut y = vec![0.0; n];
            let mut acc = CompensatedSum::new();
            for a in &angular {
                let value = if rho == 0.0 {
                    let gv = far.unwrap_or_else(|| {
                        for (yi, di) in y_rot.iter_mut().zip(&a.dir) {
                            *yi = FAR_FACTOR * r * di;
                        }
                        refl.apply(&y_rot, &mut y);
                        g.eval(&y)
                    });
                    gv / r.powi(n as i32)
                } else {
                    for (yi, di) in y_rot.iter_mut().zip(&a.dir) {
                        *yi = r / rho * di;
                    }
                    refl.apply(&y_rot, &mut y);
                    let den = r * r + rho * rho * xn * xn - 2.0 * r * rho * xn * a.cos_psi;
                    g.eval(&y) * den.powf(-nf / 2.0)
                };
                acc.add(a.weight * value);
            }
            w * acc.value()
        })
        .collect();
    let total = pairwise_sum(&rows);
    Ok(k.alpha * ((r - xn) * (r + xn)).powf(s) * r.powf(nf - 2.0 * s) * total)
}

fn check_ball(n: usize, r: f64, x: &[f64]) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return domain("ball radius must be positive and finite");
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    if !(norm(x) < r) {
        return domain("evaluation point must lie inside the ball");
    }
    Ok(())
}

/// Scheme I for (−Δ)ˢu = f in B_r(0) ⊂ ℝ², u = 0 outside. A square of half-width
/// `h_excl` around x is dropped (at x = 0, the annulus r − h_excl < |y| < r).
pub fn scheme1_source_2d(s: f64, r: f64, f: &dyn ScalarField, x: &[f64], grid: &GridSpec, h_excl: f64) -> Result<f64> {
    check_ball(2, r, x)?;
    grid.validate()?;
    let k = constants(2, s)?;
    if !(h_excl > 0.0) {
        return domain("exclusion size must be positive");
    }
    let xn = norm(x);
    let a = (r - xn) * (r + xn);
    let (cb, sb) = if xn > 0.0 { (x[0] / xn, x[1] / xn) } else { (1.0, 0.0) };

    // t-rule: midpoints with the exact weight of t^{s−1}
    let nt = grid.n_t;
    let t_rule: Vec<(f64, f64)> = (1..=nt)
        .map(|j| {
            let (t0, t1) = ((j - 1) as f64 / nt as f64, j as f64 / nt as f64);
            ((t0 + t1) / 2.0, (t1.powf(s) - t0.powf(s)) / s)
        })
        .collect();

    // integrand at a point given in the rotated frame where x = (|x|, 0)
    let integrand = |y0: f64, y1: f64| -> f64 {
        let b = r * r - y0 * y0 - y1 * y1;
        if b <= 0.0 {
            return 0.0;
        }
        let fv = f.eval(&[cb * y0 - sb * y1, sb * y0 + cb * y1]);
        if fv == 0.0 {
            return 0.0;
        }
        let rd2 = r * r * ((y0 - xn).powi(2) + y1 * y1);
        let ab = a * b;
        let mut acc = 0.0;
        for &(t, c) in &t_rule {
            acc += c / (ab * t + rd2);
        }
        b.powf(s) * fv * acc
    };

    let (nr, nth) = (grid.n_rho, grid.n_theta);
    let mid = |i: usize, count: usize| (i as f64 + 0.5) / count as f64;
    // each region: θ(θ′), ρ-range (lo, hi)(θ), and the polar origin
    let region = |theta: &(dyn Fn(f64) -> f64 + Sync),
                  dtheta: f64,
                  range: &(dyn Fn(f64) -> (f64, f64) + Sync),
                  origin: (f64, f64),
                  flip: bool|
     -> f64 {
        let rows: Vec<f64> = (0..nth)
            .into_par_iter()
            .map(|j| {
                let th = theta(mid(j, nth));
                let (lo, hi) = range(th);
                let (c, sn) = (th.cos(), th.sin());
                let mut acc = CompensatedSum::new();
                for i in 0..nr {
                    let rho = lo + (hi - lo) * mid(i, nr);
                    let y1 = if flip { origin.1 - rho * sn } else { origin.1 + rho * sn };
                    acc.add(rho * integrand(origin.0 + rho * c, y1));
                }
                acc.value() * (hi - lo) / nr as f64 * dtheta / nth as f64
            })
            .collect();
        pairwise_sum(&rows)
    };

    let total = if xn == 0.0 {
        if h_excl >= r {
            return domain("exclusion size must be smaller than the radius");
        }
        region(&|t| TAU * t, TAU, &|_| (0.0, r - h_excl), (0.0, 0.0), false)
    } else {
        let h = h_excl;
        if xn - h <= 0.0 {
            return domain("exclusion square must not contain the centre");
        }
        let phi = (h / (xn - h)).atan();
        if (xn + h) / phi.cos() >= r {
            return domain("exclusion square too large for the distance to the boundary");
        }
        let parts = [
            region(&|t| phi + (TAU - 2.0 * phi) * t, TAU - 2.0 * phi, &|_| (0.0, r), (0.0, 0.0), false),
            region(&|t| -phi + 2.0 * phi * t, 2.0 * phi, &|th| (0.0, (xn - h) / th.cos()), (0.0, 0.0), false),
            region(&|t| -phi + 2.0 * phi * t, 2.0 * phi, &|th| ((xn + h) / th.cos(), r), (0.0, 0.0), false),
            region(&|t| phi * t, phi, &|th| (0.0, 2.0 * h / th.cos()), (xn - h, h), false),
            region(&|t| phi * t, phi, &|th| (0.0, 2.0 * h / th.cos()), (xn - h, -h), true),
        ];
        pairwise_sum(&parts)
    };
    Ok(k.kappa * r.powf(2.0 - 2.0 * s) * a.powf(s) * total)
}

/// One level of a grid-halving study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    /// 1/h.
    pub inv_h: usize,
    pub value: f64,
    /// |u_{2h} − u_h|, or |u_h − exact| when an exact value is supplied.
    pub error: Option<f64>,
    /// log₂(E(2h)/E(h)).
    pub rate: Option<f64>,
    pub seconds: f64,
}

/// Runs `op(1/h)` for 1/h = coarsest, 2·coarsest, … (`halvings` + 1 levels).
pub fn convergence_study<F>(mut op: F, coarsest: usize, halvings: usize, exact: Option<f64>) -> Result<Vec<ConvergenceRow>>
where
    F: FnMut(usize) -> Result<f64>,
{
    if halvings < 2 {
        return domain("a convergence study needs at least two halvings");
    }
    if coarsest < 2 {
        return domain("coarsest grid count must be at least 2");
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(halvings + 1);
    for level in 0..=halvings {
        let inv_h = coarsest << level;
        let start = Instant::now();
        let value = op(inv_h)?;
        let seconds = start.elapsed().as_secs_f64();
        let error = match exact {
            Some(u) => Some((value - u).abs()),
            None => rows.last().map(|prev| (prev.value - value).abs()),
        };
        let rate = match (rows.last().and_then(|p| p.error), error) {
            (Some(e2h), Some(eh)) => Some((e2h / eh).log2()),
            _ => None,
        };
        rows.push(ConvergenceRow { inv_h, value, error, rate, seconds });
    }
    Ok(rows)
}
