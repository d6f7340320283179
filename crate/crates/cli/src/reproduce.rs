//! Side-by-side reruns of the reference result tables.
//!
//! Only the largest-sample row of each reference Monte Carlo table is compared.
//! Quick mode uses 10⁴ walks per case, full mode 10⁵.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use fracwalk_core::fields::{Constant, FieldSpec, Gaussian, Zero};
use fracwalk_core::quadrature::{convergence_study, scheme1_homogeneous, scheme1_source_2d, GridSpec};
use fracwalk_core::{estimate, Domain, EstimatorSummary, Point, ProblemSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const TABLES: std::ops::RangeInclusive<u8> = 1..=12;
const SEED: u64 = 20_240_601;
const REFERENCE_SAMPLES: f64 = 1e5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub table: u8,
    pub case: String,
    pub quantity: String,
    pub reference: Option<f64>,
    pub run: f64,
    pub tolerance: String,
    /// None for informational rows.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub samples: u64,
    pub threads: usize,
    pub full: bool,
}

impl Settings {
    pub fn new(full: bool, threads: usize) -> Self {
        Settings { samples: if full { 100_000 } else { 10_000 }, threads, full }
    }
}

struct Report {
    table: u8,
    rows: Vec<ReportRow>,
}

impl Report {
    fn push(&mut self, case: &str, quantity: &str, reference: Option<f64>, run: f64, tolerance: &str, pass: Option<bool>) {
        self.rows.push(ReportRow {
            table: self.table,
            case: case.to_string(),
            quantity: quantity.to_string(),
            reference,
            run,
            tolerance: tolerance.to_string(),
            pass,
        });
    }

    /// Estimate against a reference estimate, using both sampling errors.
    fn mc_value(&mut self, case: &str, reference: f64, ref_var: f64, sm: &EstimatorSummary) {
        let sigma = (sm.std_error.powi(2) + ref_var / REFERENCE_SAMPLES).sqrt();
        self.push(
            case,
            "estimate",
            Some(reference),
            sm.estimate,
            "4σ (both runs)",
            Some((sm.estimate - reference).abs() <= 4.0 * sigma),
        );
    }

    fn mc_error(&mut self, case: &str, ref_err: f64, sm: &EstimatorSummary) {
        let err = sm.abs_error.expect("exact solution configured");
        self.push(case, "abs error", Some(ref_err), err, "≤ 4σ", Some(err <= 4.0 * sm.std_error));
    }

    fn steps(&mut self, case: &str, reference: f64, sm: &EstimatorSummary) {
        let ok = (sm.avg_steps - reference).abs() <= 0.1 * reference;
        self.push(case, "avg steps", Some(reference), sm.avg_steps, "±10%", Some(ok));
    }
}

fn ball_run(
    n: usize,
    s: f64,
    source: FieldSpec,
    boundary: FieldSpec,
    exact: Option<FieldSpec>,
    x: Vec<f64>,
    set: Settings,
) -> CliResult<EstimatorSummary> {
    let mut p = ProblemSpec::new(Domain::unit_ball(n), s, source.resolve(n, s)?, boundary.resolve(n, s)?)?;
    if let Some(e) = exact {
        p = p.with_exact(e.resolve(n, s)?);
    }
    Ok(estimate(&p, &Point::new(x)?, set.samples, SEED, set.threads)?)
}

fn axis(n: usize, v: f64) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[0] = v;
    x
}

fn ex1_point(n: usize) -> Vec<f64> {
    if n == 2 {
        vec![0.6, 0.6]
    } else {
        vec![0.5; 3]
    }
}

/// Scheme I values and rates for the Gaussian boundary data.
fn scheme1_table(rep: &mut Report, n: usize, coarsest: usize, reference: &[(f64, [f64; 5], [f64; 5])]) -> CliResult<()> {
    let x = ex1_point(n);
    let g = Gaussian { x_prime: axis(n, 3.0) };
    let levels: Vec<usize> = (0..5).map(|k| coarsest << k).collect();
    for &(s, values, rates) in reference {
        let rows = convergence_study(|m| scheme1_homogeneous(n, s, 1.0, &g, &x, &GridSpec::uniform(m)?), coarsest, 4, None)?;
        let case = format!("n={n} s={s}");
        for (k, r) in rows.iter().enumerate() {
            let fine = k >= 3;
            let ok = fine.then(|| (r.value - values[k]).abs() <= 1e-4);
            rep.push(&case, &format!("value 1/h={}", levels[k]), Some(values[k]), r.value, if fine { "±1e-4" } else { "-" }, ok);
            if let Some(rate) = r.rate {
                // a reference rate at h pairs E(h) with E(h/2); ours pairs E(2h) with E(h)
                let checked = if n == 2 { k >= 3 } else { k == 4 };
                rep.push(
                    &case,
                    &format!("rate to 1/h={}", levels[k]),
                    Some(rates[k - 1]),
                    rate,
                    if checked { "[1.8, 2.2]" } else { "-" },
                    checked.then(|| (1.8..=2.2).contains(&rate)),
                );
            }
        }
    }
    Ok(())
}

fn table1(rep: &mut Report) -> CliResult<()> {
    scheme1_table(
        rep,
        2,
        32,
        &[
            (0.25, [0.0234077, 0.0234021, 0.0234012, 0.0234009, 0.0234009], [f64::NAN, 2.6581, 2.0104, 1.9994, 1.9996]),
            (0.5, [0.0187671, 0.0187558, 0.0187583, 0.0187582, 0.0187582], [f64::NAN, 4.1559, 2.0612, 1.9863, 1.9905]),
            (0.75, [0.0099238, 0.0099082, 0.0099079, 0.0099078, 0.0099077], [f64::NAN, 5.3694, 2.1768, 1.9255, 1.9407]),
        ],
    )
}

fn table3(rep: &mut Report) -> CliResult<()> {
    scheme1_table(
        rep,
        3,
        8,
        &[
            (0.25, [0.0084161, 0.0079807, 0.0080208, 0.0080298, 0.0080320], [f64::NAN, 3.4423, 2.1448, 2.0779, 2.0155]),
            (0.5, [0.0066376, 0.0065636, 0.0066594, 0.0066807, 0.0066856], [f64::NAN, -0.3725, 2.1684, 2.0957, 2.0195]),
            (0.75, [0.0033824, 0.0036580, 0.0038143, 0.0038491, 0.0038572], [f64::NAN, 0.8185, 2.1627, 2.1176, 2.0247]),
        ],
    )
}

/// Walk estimates for the Gaussian data, against the reference estimate and Scheme I.
fn wos_ex1(rep: &mut Report, n: usize, finest: usize, reference: &[(f64, f64, f64, f64)], set: Settings) -> CliResult<()> {
    let x = ex1_point(n);
    let xp = axis(n, 3.0);
    for &(s, value, var, steps) in reference {
        let case = format!("n={n} s={s}");
        let sm = ball_run(n, s, FieldSpec::named("zero"), FieldSpec::centred("example1_g", xp.clone()), None, x.clone(), set)?;
        rep.mc_value(&case, value, var, &sm);
        let reference = scheme1_homogeneous(n, s, 1.0, &Gaussian { x_prime: xp.clone() }, &x, &GridSpec::uniform(finest)?)?;
        let ok = (sm.estimate - reference).abs() <= 4.0 * sm.std_error;
        rep.push(&case, &format!("Scheme I 1/h={finest}"), None, reference, "estimate within 4σ", Some(ok));
        rep.steps(&case, steps, &sm);
    }
    Ok(())
}

/// Green-function data: (n, x, x′, [(s, reference error, reference steps)]).
type GreenCase = (usize, Vec<f64>, Vec<f64>, Vec<(f64, f64, f64)>);

fn green_cases(rep: &mut Report, cases: Vec<GreenCase>, set: Settings) -> CliResult<()> {
    for (n, x, xp, rows) in cases {
        for (s, err, steps) in rows {
            let case = format!("Green data n={n} s={s}");
            let g = FieldSpec::centred("example2_g", xp.clone());
            let sm = ball_run(n, s, FieldSpec::named("zero"), g.clone(), Some(g), x.clone(), set)?;
            rep.mc_error(&case, err, &sm);
            rep.steps(&case, steps, &sm);
        }
    }
    Ok(())
}

/// Source problem with known solution: (n, x, [(s, reference error, reference steps)]).
type BumpCase = (usize, Vec<f64>, Vec<(f64, f64, f64)>);

fn bump_cases(rep: &mut Report, cases: Vec<BumpCase>, set: Settings) -> CliResult<()> {
    for (n, x, rows) in cases {
        for (s, err, steps) in rows {
            let case = format!("source n={n} s={s}");
            let sm = ball_run(
                n,
                s,
                FieldSpec::named("example3_f"),
                FieldSpec::named("zero"),
                Some(FieldSpec::named("example3_exact")),
                x.clone(),
                set,
            )?;
            rep.mc_error(&case, err, &sm);
            rep.steps(&case, steps, &sm);
        }
    }
    Ok(())
}

fn table9(rep: &mut Report, set: Settings) -> CliResult<()> {
    let reference: [(f64, [f64; 5]); 3] = [
        (0.25, [3.4047e-2, 2.5291e-2, 1.9142e-2, 1.4927e-2, 1.2011e-2]),
        (0.5, [8.6860e-3, 4.7663e-3, 2.7036e-3, 1.6377e-3, 1.0602e-3]),
        (0.75, [1.1589e-2, 4.6710e-3, 1.8928e-3, 8.2243e-4, 3.9633e-4]),
    ];
    let x = [0.6, 0.6];
    let levels = if set.full { 5 } else { 3 };
    for (s, errs) in reference {
        let f = fracwalk_core::fields::BumpSource::new(2, s)?;
        let exact = (1.0f64 - 0.72).powf(1.0 + s);
        let case = format!("source quadrature s={s}");
        for (k, &want) in errs.iter().enumerate().take(levels) {
            let m = 32usize << k;
            let v = scheme1_source_2d(s, 1.0, &f, &x, &GridSpec::uniform(m)?, 1.0 / m as f64)?;
            let e = (v - exact).abs();
            let ok = (e - want).abs() <= 0.1 * want;
            rep.push(&case, &format!("error 1/h={m}"), Some(want), e, "±10% rel", Some(ok));
        }
    }
    Ok(())
}

fn table12(rep: &mut Report, set: Settings) -> CliResult<()> {
    let n = 10;
    // (x coordinate, [(s, value, variance, mean steps)])
    #[allow(clippy::type_complexity)]
    let rows: [(f64, [(f64, f64, f64, f64); 3]); 2] = [
        (0.001, [(0.25, 7.711e-3, 1.9791e-5, 1.9009), (0.5, 5.244e-5, 1.3905e-9, 5.7405), (0.75, 3.227e-7, 6.0199e-14, 26.661)]),
        (0.1, [(0.25, 2.430e-1, 1.9093e-2, 1.8899), (0.5, 5.250e-2, 1.3489e-3, 5.7755), (0.75, 1.023e-2, 6.0105e-5, 26.781)]),
    ];
    for (c, cases) in rows {
        for (s, value, var, steps) in cases {
            let p = ProblemSpec::new(Domain::unit_cube(n), s, Arc::new(Constant(1.0)), Arc::new(Zero))?;
            let sm = estimate(&p, &Point::splat(n, c)?, set.samples, SEED, set.threads)?;
            let case = format!("unit cube x={c}·1 s={s}");
            rep.mc_value(&case, value, var, &sm);
            rep.steps(&case, steps, &sm);
        }
    }
    Ok(())
}

fn ones(n: usize, v: f64) -> Vec<f64> {
    vec![v; n]
}

/// Runs table `id` (1–12).
pub fn reproduce(id: u8, set: Settings) -> CliResult<Vec<ReportRow>> {
    let mut rep = Report { table: id, rows: Vec::new() };
    let r = &mut rep;
    match id {
        1 => table1(r)?,
        2 => wos_ex1(
            r,
            2,
            512,
            &[(0.25, 0.0234345, 8.4807e-3, 1.7543), (0.5, 0.0187276, 5.7382e-3, 3.0142), (0.75, 0.0098974, 1.7594e-3, 6.1990)],
            set,
        )?,
        3 => table3(r)?,
        4 => wos_ex1(
            r,
            3,
            128,
            &[(0.25, 0.0080475, 1.8473e-3, 1.9259), (0.5, 0.0066647, 1.2729e-3, 3.8748), (0.75, 0.0038088, 4.1431e-4, 10.110)],
            set,
        )?,
        5 => green_cases(
            r,
            vec![
                (1, vec![0.5], vec![2.0], vec![(0.25, 8.4281e-4, 1.2915), (0.5, 4.8992e-4, 1.5246), (0.75, 2.8304e-5, 1.6879)]),
                (
                    3,
                    ones(3, 0.5),
                    ones(3, 2.0 / 3f64.sqrt()),
                    vec![(0.25, 3.9997e-4, 1.9544), (0.5, 2.4870e-5, 3.8930), (0.75, 3.6118e-5, 10.200)],
                ),
            ],
            set,
        )?,
        6 => green_cases(
            r,
            vec![(
                2,
                vec![0.6, 0.6],
                vec![SQRT_2, SQRT_2],
                vec![(0.25, 1.7565e-3, 1.7338), (0.5, 7.8162e-5, 3.0004), (0.75, 2.2905e-5, 6.2344)],
            )],
            set,
        )?,
        7 => bump_cases(
            r,
            vec![(1, vec![0.5], vec![(0.25, 4.6390e-4, 1.2879), (0.5, 2.0324e-4, 1.5281), (0.75, 4.2174e-4, 1.6838)])],
            set,
        )?,
        8 => {
            green_cases(
                r,
                vec![
                    (
                        4,
                        ones(4, 0.25),
                        ones(4, 1.0),
                        vec![
                            (0.25, 1.1203e-2, 1.5387),
                            (0.5, 2.0822e-3, 3.3463),
                            (0.6, 1.4179e-3, 5.0610),
                            (0.7, 6.4099e-4, 8.2784),
                            (0.8, 3.4514e-4, 15.663),
                            (0.9, 2.8155e-4, 38.629),
                        ],
                    ),
                    (
                        5,
                        ones(5, 0.2),
                        ones(5, 2.0 / 5f64.sqrt()),
                        vec![
                            (0.25, 1.7871e-3, 1.5178),
                            (0.5, 1.6622e-3, 3.4818),
                            (0.6, 8.2384e-4, 5.4826),
                            (0.7, 6.3443e-4, 9.4176),
                            (0.8, 3.4322e-4, 18.598),
                            (0.9, 2.9972e-4, 48.296),
                        ],
                    ),
                ],
                set,
            )?;
            bump_cases(
                r,
                vec![
                    (
                        4,
                        ones(4, 0.25),
                        vec![
                            (0.2, 1.0203e-3, 1.3759),
                            (0.4, 3.8298e-4, 2.3480),
                            (0.6, 5.9519e-4, 5.0809),
                            (0.8, 6.2239e-4, 15.702),
                        ],
                    ),
                    (
                        5,
                        ones(5, 0.2),
                        vec![
                            (0.2, 9.3904e-4, 1.3557),
                            (0.4, 5.6123e-4, 2.3758),
                            (0.6, 9.7228e-4, 5.4498),
                            (0.8, 2.5286e-3, 18.684),
                        ],
                    ),
                ],
                set,
            )?;
        }
        9 => table9(r, set)?,
        10 => {
            green_cases(
                r,
                vec![(
                    10,
                    ones(10, 0.1),
                    ones(10, 10f64.sqrt() / 5.0),
                    vec![
                        (0.25, 1.1617e-3, 1.4501),
                        (0.5, 6.8564e-4, 3.6944),
                        (0.6, 5.3812e-4, 6.4110),
                        (0.7, 2.9153e-4, 12.266),
                        (0.8, 2.4108e-4, 27.366),
                        (0.9, 1.2341e-4, 80.842),
                    ],
                )],
                set,
            )?;
            bump_cases(
                r,
                vec![(
                    10,
                    ones(10, 0.1),
                    vec![
                        (0.1, 2.1003e-4, 1.0953),
                        (0.3, 1.6807e-3, 1.6611),
                        (0.5, 6.3033e-3, 3.6920),
                        (0.7, 2.8531e-3, 12.230),
                        (0.9, 1.8440e-3, 80.954),
                    ],
                )],
                set,
            )?;
        }
        11 => bump_cases(
            r,
            vec![
                (2, vec![0.6, 0.6], vec![(0.25, 1.3496e-4, 1.7606), (0.5, 1.3063e-4, 2.9997), (0.75, 2.2905e-5, 6.1818)]),
                (3, ones(3, 0.5), vec![(0.25, 1.5456e-4, 1.9233), (0.5, 1.3108e-4, 3.9187), (0.75, 2.5671e-4, 10.132)]),
            ],
            set,
        )?,
        12 => table12(r, set)?,
        _ => return Err(CliError::Usage(format!("--table must be in 1..=12, got {id}"))),
    }
    Ok(rep.rows)
}

/// Human-readable report.
pub fn render(rows: &[ReportRow]) -> String {
    let fmt = |v: Option<f64>| v.filter(|x| x.is_finite()).map_or("-".to_string(), |x| format!("{x:.6e}"));
    let mut out = format!(
        "{:<5} {:<30} {:<18} {:>14} {:>14} {:<20} {}\n",
        "table", "case", "quantity", "reference", "run", "tolerance", "result"
    );
    for r in rows {
        let verdict = match r.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "-",
        };
        out.push_str(&format!(
            "{:<5} {:<30} {:<18} {:>14} {:>14} {:<20} {}\n",
            r.table,
            r.case,
            r.quantity,
            fmt(r.reference),
            fmt(Some(r.run)),
            r.tolerance,
            verdict
        ));
    }
    let checked = rows.iter().filter(|r| r.pass.is_some()).count();
    let passed = rows.iter().filter(|r| r.pass == Some(true)).count();
    out.push_str(&format!("{passed}/{checked} checks passed\n"));
    out
}
