//! Points, domains with containment and inscribed-ball radii, hyperspherical
//! coordinates, and the reflection that moves a point onto the last axis.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A point of ℝⁿ with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return domain("a point needs at least one coordinate");
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return domain(format!("point coordinates must be finite, got {c}"));
        }
        Ok(Point(coords))
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![0.0; n.max(1)])
    }

    /// `value` repeated in every coordinate.
    pub fn splat(n: usize, value: f64) -> Result<Self> {
        Point::new(vec![value; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Distance-to-boundary oracle: positive inside, non-positive outside.
pub type DistanceFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum DomainKind {
    Ball { center: Point, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Generic { distance: DistanceFn, scale: f64 },
}

impl fmt::Debug for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Ball { center, radius } => {
                f.debug_struct("Ball").field("center", center).field("radius", radius).finish()
            }
            DomainKind::Box { lo, hi } => f.debug_struct("Box").field("lo", lo).field("hi", hi).finish(),
            DomainKind::Generic { scale, .. } => f.debug_struct("Generic").field("scale", scale).finish_non_exhaustive(),
        }
    }
}

/// Open bounded region Ω ⊂ ℝⁿ.
#[derive(Debug, Clone)]
pub struct Domain {
    kind: DomainKind,
    dim: usize,
}

impl Domain {
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return domain(format!("ball radius must be positive and finite, got {radius}"));
        }
        let dim = center.dim();
        Ok(Domain { kind: DomainKind::Ball { center, radius }, dim })
    }

    pub fn unit_ball(n: usize) -> Self {
        Domain { kind: DomainKind::Ball { center: Point::origin(n), radius: 1.0 }, dim: n.max(1) }
    }

    pub fn cuboid(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if lo.is_empty() {
            return domain("box needs at least one axis");
        }
        for (a, b) in lo.iter().zip(&hi) {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return domain(format!("box bounds must satisfy lo < hi, got [{a}, {b}]"));
            }
        }
        let dim = lo.len();
        Ok(Domain { kind: DomainKind::Box { lo, hi }, dim })
    }

    pub fn unit_cube(n: usize) -> Self {
        Domain { kind: DomainKind::Box { lo: vec![0.0; n], hi: vec![1.0; n] }, dim: n }
    }

    /// Domain given by a distance-to-boundary oracle, positive inside; `scale`
    /// is its characteristic length.
    pub fn generic<F>(dim: usize, scale: f64, distance: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dim == 0 {
            return domain("dimension must be at least 1");
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return domain(format!("domain scale must be positive, got {scale}"));
        }
        Ok(Domain { kind: DomainKind::Generic { distance: Arc::new(distance), scale }, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    /// Characteristic length: radius, longest box side, or the supplied scale.
    pub fn scale(&self) -> f64 {
        match &self.kind {
            DomainKind::Ball { radius, .. } => *radius,
            DomainKind::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| b - a).fold(0.0, f64::max),
            DomainKind::Generic { scale, .. } => *scale,
        }
    }

    /// Returns the ball parameters when Ω is a ball.
    pub fn as_ball(&self) -> Option<(&Point, f64)> {
        match &self.kind {
            DomainKind::Ball { center, radius } => Some((center, *radius)),
            _ => None,
        }
    }

    /// Signed distance: positive inside, non-positive outside.
    pub(crate) fn depth(&self, x: &[f64]) -> f64 {
        match &self.kind {
            DomainKind::Ball { center, radius } => radius - dist(x, center),
            DomainKind::Box { lo, hi } => {
                let mut d = f64::INFINITY;
                for ((v, a), b) in x.iter().zip(lo).zip(hi) {
                    d = d.min(v - a).min(b - v);
                }
                d
            }
            DomainKind::Generic { distance, .. } => distance(x),
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// True iff x lies in the open domain.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.depth(x) > 0.0)
    }

    /// Radius of the largest ball centred at x contained in Ω.
    pub fn inscribed_radius(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let d = self.depth(x);
        if !(d > 0.0) {
            return domain("inscribed radius requested at an exterior point");
        }
        Ok(d)
    }
}

/// Writes the unit vector of the hyperspherical angles into `out`:
/// x₁ = sinφ₁⋯sinφ_{n−2} sinθ, x₂ = sinφ₁⋯sinφ_{n−2} cosθ, …, x_n = cosφ₁.
pub(crate) fn unit_direction(theta: f64, phis: &[f64], out: &mut [f64]) {
    let n = out.len();
    let mut prod = 1.0;
    for (k, phi) in phis.iter().enumerate() {
        let (s, c) = phi.sin_cos();
        out[n - 1 - k] = prod * c;
        prod *= s;
    }
    let (s, c) = theta.sin_cos();
    out[0] = prod * s;
    out[1] = prod * c;
}

/// center + ρ·(unit vector of (θ, φ₁..φ_{n−2})).
pub fn spherical_to_cartesian(center: &Point, rho: f64, theta: f64, phis: &[f64]) -> Result<Point> {
    let n = center.dim();
    if n < 2 {
        return domain("hyperspherical coordinates need n >= 2");
    }
    if phis.len() != n - 2 {
        return Err(Error::DimensionMismatch { expected: n - 2, got: phis.len() });
    }
    if !(rho >= 0.0 && rho.is_finite()) {
        return domain(format!("radius must be finite and non-negative, got {rho}"));
    }
    if !(0.0..=std::f64::consts::TAU).contains(&theta) {
        return domain(format!("theta must lie in [0, 2π], got {theta}"));
    }
    if let Some(p) = phis.iter().find(|p| !(0.0..=std::f64::consts::PI).contains(*p)) {
        return domain(format!("polar angles must lie in [0, π], got {p}"));
    }
    let mut out = vec![0.0; n];
    unit_direction(theta, phis, &mut out);
    for (o, c) in out.iter_mut().zip(center.iter()) {
        *o = c + rho * *o;
    }
    Point::new(out)
}

/// Householder reflection H = I − 2vvᵀ/vᵀv exchanging x/|x| and e_n.
#[derive(Debug, Clone)]
pub struct Reflection {
    v: Vec<f64>,
    scale: f64,
}

impl Reflection {
    /// Reflection with H(x/|x|) = e_n; the identity when x is already on the
    /// positive e_n axis or x = 0.
    pub fn to_last_axis(x: &[f64]) -> Self {
        let n = x.len();
        let r = norm(x);
        let mut v: Vec<f64> = if r > 0.0 { x.iter().map(|c| c / r).collect() } else { vec![0.0; n] };
        if r > 0.0 {
            v[n - 1] -= 1.0;
        }
        let vv: f64 = v.iter().map(|c| c * c).sum();
        let scale = if vv > 1e-30 { 2.0 / vv } else { 0.0 };
        Reflection { v, scale }
    }

    pub fn apply(&self, y: &[f64], out: &mut [f64]) {
        let dot: f64 = self.v.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() * self.scale;
        for ((o, yi), vi) in out.iter_mut().zip(y).zip(&self.v) {
            *o = yi - dot * vi;
        }
    }
}
