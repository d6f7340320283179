//! The `solve`, `quadrature`, `convergence` and `steps` commands.

use std::time::Instant;

use fracwalk_core::quadrature::{convergence_study, scheme1_homogeneous, scheme1_source_2d, GridSpec};
use fracwalk_core::theory::empirical_step_check;
use fracwalk_core::{estimate, EstimatorSummary, Point};
use serde::{Deserialize, Serialize};

use crate::config::Prepared;
use crate::error::{CliError, CliResult};
use crate::output::{format_point, SummaryRow};

/// Runs the estimator at every configured point.
pub fn solve(prep: &Prepared, threads: usize) -> CliResult<Vec<(SummaryRow, EstimatorSummary)>> {
    let c = &prep.config;
    prep.points
        .iter()
        .map(|x| {
            let sm = estimate(&prep.problem, x, c.samples, c.seed, threads)?;
            Ok((SummaryRow::new(&c.case_id, c.s, x, &sm), sm))
        })
        .collect()
}

/// Accepts `1/N`, `N` (an integer count) or a step size like `0.015625`.
pub fn parse_inv_h(text: &str) -> CliResult<usize> {
    let bad = || CliError::Usage(format!("--h expects 1/N with N ≥ 2, got `{text}`"));
    let t = text.trim();
    let n = if let Some(rest) = t.strip_prefix("1/") {
        rest.trim().parse::<usize>().map_err(|_| bad())?
    } else if let Ok(n) = t.parse::<usize>() {
        n
    } else {
        let h: f64 = t.parse().map_err(|_| bad())?;
        if !(h > 0.0 && h < 1.0) {
            return Err(bad());
        }
        let n = (1.0 / h).round();
        if (n * h - 1.0).abs() > 1e-9 {
            return Err(bad());
        }
        n as usize
    };
    if n < 2 {
        return Err(bad());
    }
    Ok(n)
}

/// Scheme I value at x with 1/h = `inv_h`: boundary part plus, in 2D, the source part.
pub fn scheme1_value(prep: &Prepared, x: &Point, inv_h: usize) -> CliResult<f64> {
    let p = &prep.problem;
    let (centre, r) = p.domain().as_ball().ok_or_else(|| CliError::config("domain", "quadrature needs a ball domain"))?;
    if centre.norm() != 0.0 {
        return Err(CliError::config("domain.center", "quadrature needs a ball centred at the origin"));
    }
    let grid = GridSpec::uniform(inv_h)?;
    let mut value = 0.0;
    if !p.boundary().is_zero() {
        value += scheme1_homogeneous(p.dim(), p.s(), r, p.boundary().as_ref(), x, &grid)?;
    }
    if !p.source().is_zero() {
        if p.dim() != 2 {
            return Err(CliError::config("source", "the source quadrature is two-dimensional only"));
        }
        let h = prep.config.quadrature.as_ref().and_then(|q| q.exclusion).unwrap_or(1.0 / inv_h as f64);
        value += scheme1_source_2d(p.s(), r, p.source().as_ref(), x, &grid, h)?;
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadRow {
    pub case_id: String,
    pub point: String,
    pub inv_h: usize,
    pub value: f64,
    pub exact: Option<f64>,
    pub error: Option<f64>,
    pub seconds: f64,
}

pub fn quadrature(prep: &Prepared, inv_h: usize) -> CliResult<Vec<QuadRow>> {
    prep.points
        .iter()
        .map(|x| {
            let t = Instant::now();
            let value = scheme1_value(prep, x, inv_h)?;
            let exact = prep.problem.exact().map(|u| u.eval(x));
            Ok(QuadRow {
                case_id: prep.config.case_id.clone(),
                point: format_point(x),
                inv_h,
                value,
                exact,
                error: exact.map(|u| (value - u).abs()),
                seconds: t.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvRow {
    pub case_id: String,
    pub point: String,
    pub inv_h: usize,
    pub value: f64,
    pub error: Option<f64>,
    pub rate: Option<f64>,
    pub seconds: f64,
}

/// `levels` grids from the configured coarsest one, halving h each time.
pub fn convergence(prep: &Prepared, levels: usize) -> CliResult<Vec<ConvRow>> {
    if levels < 3 {
        return Err(CliError::Usage("--levels must be at least 3".into()));
    }
    let coarsest = prep.config.quadrature.clone().unwrap_or_default().coarsest;
    let mut out = Vec::new();
    for x in &prep.points {
        let exact = prep.problem.exact().map(|u| u.eval(x));
        let mut failure = None;
        let rows = convergence_study(
            |m| match scheme1_value(prep, x, m) {
                Ok(v) => Ok(v),
                Err(CliError::Core(e)) => Err(e),
                Err(e) => {
                    failure = Some(e);
                    Err(fracwalk_core::Error::Unsupported("quadrature setup".into()))
                }
            },
            coarsest,
            levels - 1,
            exact,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        for r in rows? {
            out.push(ConvRow {
                case_id: prep.config.case_id.clone(),
                point: format_point(x),
                inv_h: r.inv_h,
                value: r.value,
                error: r.error,
                rate: r.rate,
                seconds: r.seconds,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepsRow {
    pub n: usize,
    pub s: f64,
    pub x0_norm: f64,
    pub mean_steps: f64,
    pub std_error: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn parse_list(text: &str, flag: &str) -> CliResult<Vec<f64>> {
    let vals: Result<Vec<f64>, _> = text.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse::<f64>()).collect();
    match vals {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!("{flag} expects a comma-separated list of numbers, got `{text}`"))),
    }
}

/// Mean walk length and the step bound over an (s, |x₀|) grid on the config's ball.
pub fn steps(prep: &Prepared, s_grid: &[f64], radius_grid: &[f64], threads: usize) -> CliResult<Vec<StepsRow>> {
    let c = &prep.config;
    let (_, r) = prep.problem.domain().as_ball().ok_or_else(|| CliError::config("domain", "steps needs a ball domain"))?;
    let n = c.dimension;
    if n < 2 {
        return Err(CliError::config("dimension", "the step bound needs n >= 2"));
    }
    let mut out = Vec::new();
    for &s in s_grid {
        for &rho in radius_grid {
            if !(0.0..r).contains(&rho) {
                return Err(CliError::Usage(format!("--radius-grid value {rho} must lie in [0, {r})")));
            }
            let mut x = vec![0.0; n];
            x[0] = rho;
            let chk = empirical_step_check(n, s, r, &Point::new(x)?, c.samples, c.seed, threads)?;
            out.push(StepsRow {
                n,
                s,
                x0_norm: rho,
                mean_steps: chk.mean_steps,
                std_error: chk.std_error,
                bound: chk.bound,
                pass: chk.pass,
            });
        }
    }
    Ok(out)
}
