//! Scalar special functions: log-gamma, beta, regularized incomplete beta and
//! its inverse, ₂F₁ at non-positive argument, erf, and the sin-power integrals.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};
use std::sync::OnceLock;

use crate::error::{domain, Result};
use crate::integrate::integrate;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

const ZETA_TERMS: usize = 40;

/// ζ(k) − 1 for k = 2..ZETA_TERMS+1.
fn zeta_minus_one() -> &'static [f64; ZETA_TERMS] {
    static TABLE: OnceLock<[f64; ZETA_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; ZETA_TERMS];
        let p2 = PI * PI;
        t[0] = p2 / 6.0 - 1.0;
        t[1] = 0.202_056_903_159_594_285_4;
        t[2] = p2 * p2 / 90.0 - 1.0;
        t[3] = 0.036_927_755_143_369_926_3;
        t[4] = p2 * p2 * p2 / 945.0 - 1.0;
        t[5] = 0.008_349_277_381_922_826_8;
        t[6] = p2 * p2 * p2 * p2 / 9450.0 - 1.0;
        for (i, slot) in t.iter_mut().enumerate().skip(7) {
            let k = (i + 2) as f64;
            // direct sum, summed small-to-large; tail below 1e-30
            let mut acc = 0.0;
            for m in (2..=80u32).rev() {
                acc += (m as f64).powf(-k);
            }
            *slot = acc;
        }
        t
    })
}

/// ln Γ(1+ε) + ln(1+ε) for |ε| ≤ 1/2, i.e. ln Γ(2+ε).
fn ln_gamma_two_plus(eps: f64) -> f64 {
    let z = zeta_minus_one();
    let mut sum = 0.0;
    let mut pw = -eps;
    for (i, zk) in z.iter().enumerate() {
        pw *= -eps;
        let k = (i + 2) as f64;
        let term = zk * pw / k;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    eps * (1.0 - EULER_GAMMA) + sum
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

pub(crate) fn ln_gamma_unchecked(z: f64) -> f64 {
    if z < 0.5 {
        // Γ(z) = Γ(1+z)/z
        ln_gamma_two_plus(z) - z.ln_1p() - z.ln()
    } else if z < 1.5 {
        let e = z - 1.0;
        ln_gamma_two_plus(e) - e.ln_1p()
    } else if z < 2.5 {
        ln_gamma_two_plus(z - 2.0)
    } else {
        ln_gamma_lanczos(z)
    }
}

/// ln Γ(z) for z > 0.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("log_gamma requires finite z > 0, got {z}"));
    }
    Ok(ln_gamma_unchecked(z))
}

/// Γ(z) for z > 0.
pub fn gamma(z: f64) -> Result<f64> {
    log_gamma(z).map(f64::exp)
}

pub(crate) fn ln_beta_unchecked(z: f64, w: f64) -> f64 {
    ln_gamma_unchecked(z) + ln_gamma_unchecked(w) - ln_gamma_unchecked(z + w)
}

/// ln B(z, w).
pub fn ln_beta(z: f64, w: f64) -> Result<f64> {
    check_shape(z, w)?;
    Ok(ln_beta_unchecked(z, w))
}

/// B(z, w) = Γ(z)Γ(w)/Γ(z+w).
pub fn beta(z: f64, w: f64) -> Result<f64> {
    ln_beta(z, w).map(f64::exp)
}

fn check_shape(z: f64, w: f64) -> Result<()> {
    if !(z > 0.0 && w > 0.0 && z.is_finite() && w.is_finite()) {
        return domain(format!("beta parameters must be finite and positive, got ({z}, {w})"));
    }
    Ok(())
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Incomplete beta with a precomputed ln B(a, b); returns (I, 1 − I).
pub(crate) fn inc_beta_pair(x: f64, a: f64, b: f64, ln_b: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    if x >= 1.0 {
        return (1.0, 0.0);
    }
    let front = (a * x.ln() + b * (-x).ln_1p() - ln_b).exp();
    if x < a / (a + b) {
        let v = front * beta_cf(a, b, x) / a;
        (v, 1.0 - v)
    } else {
        let v = front * beta_cf(b, a, 1.0 - x) / b;
        (1.0 - v, v)
    }
}

/// Regularized incomplete beta I(x; z, w).
pub fn reg_inc_beta(x: f64, z: f64, w: f64) -> Result<f64> {
    check_shape(z, w)?;
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("reg_inc_beta requires x in [0,1], got {x}"));
    }
    Ok(inc_beta_pair(x, z, w, ln_beta_unchecked(z, w)).0.clamp(0.0, 1.0))
}

/// Solves I(x; a, b) = p for x ≤ the median, with p ≤ I(1/2) given.
/// Newton on t = ln x for ln I(e^t) − ln p, guarded by a bracket in t.
fn inv_lower(p: f64, a: f64, b: f64, ln_b: f64, x_hi: f64) -> f64 {
    let ln_p = p.ln();
    // leading-order tail I ≈ x^a/(a B)
    let guess = ((ln_p + a.ln() + ln_b) / a).exp();
    let mut t_lo = -745.0_f64;
    let mut t_hi = x_hi.ln();
    let mut t = if guess > 0.0 && guess < x_hi { guess.ln() } else { 0.5 * (t_lo + t_hi) };
    for _ in 0..200 {
        let x = t.exp();
        let (ix, _) = inc_beta_pair(x, a, b, ln_b);
        if ix <= 0.0 {
            t_lo = t;
            t = 0.5 * (t_lo + t_hi);
            continue;
        }
        let g = ix.ln() - ln_p;
        if g == 0.0 {
            return x;
        }
        if g < 0.0 {
            t_lo = t;
        } else {
            t_hi = t;
        }
        let dens = (a * t + (b - 1.0) * (-x).ln_1p() - ln_b).exp();
        let slope = dens / ix;
        let mut next = t - g / slope;
        if !next.is_finite() || next <= t_lo || next >= t_hi {
            next = 0.5 * (t_lo + t_hi);
        }
        let step = (next - t).abs();
        t = next;
        if step <= 1e-15 || t_hi - t_lo <= 1e-15 {
            break;
        }
    }
    t.exp()
}

/// Inverse of the regularized incomplete beta in x: returns x with I(x; z, w) = p.
pub fn inv_reg_inc_beta(p: f64, z: f64, w: f64) -> Result<f64> {
    check_shape(z, w)?;
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("inv_reg_inc_beta requires p in [0,1], got {p}"));
    }
    Ok(inv_reg_inc_beta_unchecked(p, z, w, ln_beta_unchecked(z, w)))
}

pub(crate) fn inv_reg_inc_beta_unchecked(p: f64, z: f64, w: f64, ln_b: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (i_half, _) = inc_beta_pair(0.5, z, w, ln_b);
    if p <= i_half {
        inv_lower(p, z, w, ln_b, 0.5)
    } else {
        // I(x; z, w) = p  ⇔  I(1 − x; w, z) = 1 − p
        1.0 - inv_lower(1.0 - p, w, z, ln_b, 0.5)
    }
}

/// Gauss hypergeometric ₂F₁(a, b; c; x) for x ≤ 0 and c > b > 0.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(c > b && b > 0.0) || !a.is_finite() || !c.is_finite() {
        return domain(format!("gauss_2f1 requires c > b > 0, got a={a}, b={b}, c={c}"));
    }
    if !(x <= 0.0) || !x.is_finite() {
        return domain(format!("gauss_2f1 requires finite x <= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x >= -0.9 {
        return Ok(hyp_series(a, b, c, x));
    }
    Ok(hyp_euler(a, b, c, x))
}

fn hyp_series(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..5000 {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn hyp_euler(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let d = c - b;
    // [0, 1/2] with t = u^{1/b}; [1/2, 1] with 1 − t = v^{1/d}
    let left = integrate(
        |u: f64| {
            let t = u.powf(1.0 / b);
            (1.0 - t).powf(d - 1.0) * (1.0 - x * t).powf(-a)
        },
        0.0,
        0.5_f64.powf(b),
        0.0,
        1e-14,
    );
    let right = integrate(
        |v: f64| {
            let om = v.powf(1.0 / d);
            let t = 1.0 - om;
            t.powf(b - 1.0) * (1.0 - x * t).powf(-a)
        },
        0.0,
        0.5_f64.powf(d),
        0.0,
        1e-14,
    );
    let norm = (ln_gamma_unchecked(c) - ln_gamma_unchecked(b) - ln_gamma_unchecked(d)).exp();
    norm * (left.value / b + right.value / d)
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    if ax > 6.0 {
        return x.signum();
    }
    // erf x = (2/√π) e^{−x²} Σ 2ⁿ x^{2n+1}/(2n+1)!!
    let x2 = ax * ax;
    let mut term = ax;
    let mut sum = ax;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    let v = (FRAC_2_SQRT_PI * (-x2).exp() * sum).min(1.0);
    v.copysign(x)
}

/// I_m = ∫₀^π sinᵐφ dφ by the two-step recursion from I₀ = π, I₁ = 2.
pub fn sin_power_integral(m: u32) -> f64 {
    let (mut v, mut k) = if m % 2 == 0 { (PI, 0) } else { (2.0, 1) };
    while k < m {
        k += 2;
        v *= (k - 1) as f64 / k as f64;
    }
    v
}

/// Normalized CDF ∫₀^φ sinᵐ / I_m, for φ ∈ [0, π].
pub fn sin_power_cdf(m: u32, phi: f64) -> f64 {
    let (sn, cs) = phi.sin_cos();
    let (mut j, mut k) = if m % 2 == 0 { (phi, 0) } else { (1.0 - cs, 1) };
    let mut sp = if m % 2 == 0 { sn } else { sn * sn };
    while k < m {
        k += 2;
        let kf = k as f64;
        // J_k = −sin^{k−1}φ cosφ / k + (k−1)/k · J_{k−2}
        j = -sp * cs / kf + (kf - 1.0) / kf * j;
        sp *= sn * sn;
    }
    (j / sin_power_integral(m)).clamp(0.0, 1.0)
}

/// With `phi` absent returns the constant I_m; with `phi` present returns the
/// normalized CDF I_m(φ).
pub fn sin_power(m: u32, phi: Option<f64>) -> Result<f64> {
    match phi {
        None => Ok(sin_power_integral(m)),
        Some(p) if (0.0..=PI).contains(&p) => Ok(sin_power_cdf(m, p)),
        Some(p) => domain(format!("sin_power angle must lie in [0, π], got {p}")),
    }
}
