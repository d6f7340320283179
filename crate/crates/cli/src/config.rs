//! JSON run configuration and its validation.

use std::path::{Path, PathBuf};

use fracwalk_core::fields::FieldSpec;
use fracwalk_core::{Domain, Point, ProblemSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const THREADS_ENV: &str = "FRACWALK_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_case")]
    pub case_id: String,
    pub dimension: usize,
    pub s: f64,
    pub domain: DomainConfig,
    #[serde(default = "zero")]
    pub boundary: FieldSpec,
    #[serde(default = "zero")]
    pub source: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<FieldSpec>,
    pub points: Vec<Vec<f64>>,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelism: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainConfig {
    Ball {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
        #[serde(default = "one")]
        radius: f64,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
}

/// Grid settings for the `quadrature` and `convergence` commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    /// 1/h of the coarsest convergence level.
    #[serde(default = "default_coarsest")]
    pub coarsest: usize,
    /// Half-width of the square dropped around x by the source rule; defaults to h.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclusion: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { coarsest: default_coarsest(), exclusion: None }
    }
}

fn default_case() -> String {
    "case".into()
}
fn zero() -> FieldSpec {
    FieldSpec::named("zero")
}
fn default_samples() -> u64 {
    10_000
}
fn one() -> f64 {
    1.0
}
fn default_coarsest() -> usize {
    8
}

/// A validated config: the problem and its evaluation points.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: RunConfig,
    pub problem: ProblemSpec,
    pub points: Vec<Point>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(path, e.into_inner())
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build_domain(&self) -> CliResult<Domain> {
        let n = self.dimension;
        match &self.domain {
            DomainConfig::Ball { center, radius } => {
                let c = match center {
                    Some(c) if c.len() != n => {
                        return Err(CliError::config("domain.center", format!("expected {n} coordinates, got {}", c.len())))
                    }
                    Some(c) => Point::new(c.clone()).map_err(|e| CliError::config("domain.center", e))?,
                    None => Point::origin(n),
                };
                Domain::ball(c, *radius).map_err(|e| CliError::config("domain.radius", e))
            }
            DomainConfig::Box { lo, hi } => {
                if lo.len() != n {
                    return Err(CliError::config("domain.lo", format!("expected {n} coordinates, got {}", lo.len())));
                }
                Domain::cuboid(lo.clone(), hi.clone()).map_err(|e| CliError::config("domain.hi", e))
            }
        }
    }

    /// Checks every field and resolves the named functions.
    pub fn prepare(&self) -> CliResult<Prepared> {
        let (n, s) = (self.dimension, self.s);
        if n == 0 {
            return Err(CliError::config("dimension", "must be at least 1"));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(CliError::config("s", format!("must lie in (0, 1), got {s}")));
        }
        if self.samples < 2 {
            return Err(CliError::config("samples", "must be at least 2"));
        }
        let domain = self.build_domain()?;
        let source = self.source.resolve(n, s).map_err(|e| CliError::config("source", e))?;
        let boundary = self.boundary.resolve(n, s).map_err(|e| CliError::config("boundary", e))?;
        let mut problem = ProblemSpec::new(domain, s, source, boundary).map_err(|e| CliError::config("s", e))?;
        if let Some(e) = &self.exact {
            problem = problem.with_exact(e.resolve(n, s).map_err(|err| CliError::config("exact", err))?);
        }
        if let Some(m) = self.max_steps {
            problem = problem.with_max_steps(m).map_err(|e| CliError::config("max_steps", e))?;
        }
        if self.points.is_empty() {
            return Err(CliError::config("points", "at least one evaluation point is required"));
        }
        let mut points = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            let path = format!("points[{i}]");
            if p.len() != n {
                return Err(CliError::config(path, format!("expected {n} coordinates, got {}", p.len())));
            }
            let pt = Point::new(p.clone()).map_err(|e| CliError::config(path.clone(), e))?;
            if !problem.domain().contains(&pt).map_err(|e| CliError::config(path.clone(), e))? {
                return Err(CliError::config(path, "point lies outside the domain"));
            }
            points.push(pt);
        }
        if let Some(q) = &self.quadrature {
            if q.coarsest < 2 {
                return Err(CliError::config("quadrature.coarsest", "must be at least 2"));
            }
            if let Some(h) = q.exclusion {
                if !(h > 0.0) {
                    return Err(CliError::config("quadrature.exclusion", "must be positive"));
                }
            }
        }
        Ok(Prepared { config: self.clone(), problem, points })
    }
}

/// Worker count: command-line flag, then config, then the environment; 0 means automatic.
pub fn resolve_threads(flag: Option<usize>, config: Option<usize>, env: Option<&str>) -> CliResult<usize> {
    if let Some(t) = flag.or(config) {
        return Ok(t);
    }
    match env {
        Some(v) if !v.trim().is_empty() => {
            v.trim().parse().map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`")))
        }
        _ => Ok(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX2: &str = r#"{
        "case_id": "ex2",
        "dimension": 2,
        "s": 0.5,
        "domain": {"kind": "ball"},
        "boundary": {"name": "example2_g", "x_prime": [1.4142135623730951, 1.4142135623730951]},
        "exact": {"name": "example2_g", "x_prime": [1.4142135623730951, 1.4142135623730951]},
        "points": [[0.6, 0.6]],
        "samples": 1000,
        "seed": 3
    }"#;

    #[test]
    fn parses_and_prepares() {
        let c = RunConfig::from_json(EX2).unwrap();
        assert_eq!(c.source, FieldSpec::named("zero"));
        assert_eq!(c.domain, DomainConfig::Ball { center: None, radius: 1.0 });
        let p = c.prepare().unwrap();
        assert_eq!(p.points.len(), 1);
        assert!(p.problem.exact().is_some());
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
    }

    fn err_path(text: &str) -> String {
        match RunConfig::from_json(text).and_then(|c| c.prepare().map(|_| ())) {
            Err(CliError::Config { path, .. }) => path,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_field_paths() {
        assert_eq!(err_path(&EX2.replace("\"s\": 0.5", "\"s\": \"half\"")), "s");
        assert_eq!(err_path(&EX2.replace("\"s\": 0.5", "\"s\": 1.5")), "s");
        assert_eq!(err_path(&EX2.replace("[[0.6, 0.6]]", "[[0.6, 0.6], [0.9, 0.9]]")), "points[1]");
        assert_eq!(err_path(&EX2.replace("[[0.6, 0.6]]", "[[0.6]]")), "points[0]");
        assert_eq!(
            err_path(&EX2.replace(
                "example2_g\", \"x_prime\": [1.4142135623730951, 1.4142135623730951]},\n        \"exact",
                "nope\"},\n        \"exact"
            )),
            "boundary"
        );
        assert_eq!(err_path(&EX2.replace("\"kind\": \"ball\"", "\"kind\": \"ball\", \"radius\": -1")), "domain.radius");
        assert_eq!(err_path(&EX2.replace("\"kind\": \"ball\"", "\"kind\": \"torus\"")), "domain.kind");
        assert_eq!(err_path(&EX2.replace("\"seed\": 3", "\"seed\": 3, \"colour\": 1")), "colour");
        assert_eq!(err_path(&EX2.replace("\"samples\": 1000", "\"samples\": 1")), "samples");
        assert!(err_path(&EX2.replace("\"x_prime\": [1.4142135623730951, 1.4142135623730951]}", "\"x_prime\": [1.0]}"))
            .starts_with("boundary"));
    }

    #[test]
    fn box_domain() {
        let text = r#"{"dimension": 2, "s": 0.5, "domain": {"kind": "box", "lo": [0, 0], "hi": [1, 1]},
            "source": {"name": "example4_f"}, "points": [[0.5, 0.5]]}"#;
        let p = RunConfig::from_json(text).unwrap().prepare().unwrap();
        assert!(p.problem.domain().as_ball().is_none());
    }

    #[test]
    fn thread_precedence() {
        assert_eq!(resolve_threads(Some(3), Some(2), Some("5")).unwrap(), 3);
        assert_eq!(resolve_threads(None, Some(2), Some("5")).unwrap(), 2);
        assert_eq!(resolve_threads(None, None, Some("5")).unwrap(), 5);
        assert_eq!(resolve_threads(None, None, None).unwrap(), 0);
        assert!(resolve_threads(None, None, Some("many")).is_err());
    }
}
