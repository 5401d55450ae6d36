use std::fs::File;
use std::io::BufWriter;

use arlimit::limit::{default_contour_points, limit_a_with};
use arlimit::oracles::{bs_truncation_for, DEFAULT_N1, DEFAULT_N2, DIRECT_SUM_BUDGET};
use arlimit::roots::{ar_roots, char_polynomial};
use arlimit::sim::{lag_ratio, sample_mean, sample_variance, write_series};
use arlimit::{
    bs_truncated, contour_coefficient, lagged_cross_sum, simulate, slope_estimate, sum_x,
    ArCoefficients, Complex64, EvalResult, RootMultiset, ShiftVector, DEFAULT_CLUSTER_TOL,
};

use crate::envelope::*;
use crate::number::{complex, complexes, reals, F17};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_SIGMA: f64 = 1.0;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_MAX_LAG: usize = 5;
pub const BS_TAIL_TARGET: f64 = 1e-12;

/// Request-level failure: a stable code plus a human message.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: String,
    pub message: String,
    pub details: Option<Vec<Discrepancy>>,
}

impl Failure {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        Self {
            code: code.into(),
            message: message.into(),
            details: None,
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new("INVALID_REQUEST", message)
    }
}

impl From<arlimit::Error> for Failure {
    fn from(e: arlimit::Error) -> Self {
        Self::new(e.code(), e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Dispatches one request to the library and wraps the outcome.
pub fn run(request: &Request) -> Response {
    let command = request.command;
    let outcome = match command {
        None => Err(Failure::invalid("missing command")),
        Some(Command::Roots) => run_roots(request).map(Payload::Roots),
        Some(Command::Limit) => run_limit(request).map(Payload::Limit),
        Some(Command::Oracle) => run_oracle(request).map(Payload::Oracle),
        Some(Command::Simulate) => run_simulate(request).map(Payload::Simulate),
    };
    match outcome {
        Ok(payload) => Response::ok(command.unwrap(), payload),
        Err(f) => Response::error(
            command,
            ErrorBody {
                code: f.code,
                message: f.message,
                details: f.details,
            },
        ),
    }
}

/// Parses a JSON request and runs it; malformed input yields a
/// `PARSE_ERROR` response.
pub fn run_json(text: &str) -> Response {
    match serde_json::from_str::<Request>(text) {
        Ok(req) => run(&req),
        Err(e) => Response::error(
            None,
            ErrorBody {
                code: "PARSE_ERROR".into(),
                message: e.to_string(),
                details: None,
            },
        ),
    }
}

fn alphas(req: &Request) -> Outcome<ArCoefficients> {
    let a = req
        .alphas
        .clone()
        .ok_or_else(|| Failure::invalid("alphas are required"))?;
    Ok(ArCoefficients::new(a)?)
}

/// Exactly one of `alphas` and `roots`.
fn root_set(req: &Request) -> Outcome<RootMultiset> {
    match (&req.alphas, &req.roots) {
        (Some(_), Some(_)) => Err(Failure::invalid("give either alphas or roots, not both")),
        (None, None) => Err(Failure::invalid("either alphas or roots is required")),
        (Some(_), None) => Ok(ar_roots(&alphas(req)?)?.roots),
        (None, Some(r)) => Ok(RootMultiset::new(r.iter().map(|r| r.to_complex()).collect())?),
    }
}

/// Exactly one of `shifts` and `S`; returns `S` and the shifts if given.
fn total_shift(req: &Request, k: usize) -> Outcome<(u64, Option<ShiftVector>)> {
    match (&req.shifts, req.s) {
        (Some(_), Some(_)) => Err(Failure::invalid("give either shifts or S, not both")),
        (None, None) => Err(Failure::invalid("either shifts or S is required")),
        (None, Some(s)) => Ok((s, None)),
        (Some(v), None) => {
            let sv = ShiftVector::new(v.clone())?;
            if sv.len() != k {
                return Err(arlimit::Error::LengthMismatch {
                    expected: k,
                    actual: sv.len(),
                }
                .into());
            }
            Ok((sv.s(), Some(sv)))
        }
    }
}

fn eval_out(r: &EvalResult) -> EvalOut {
    EvalOut {
        value: complex(r.value),
        real_value: r.real_value.map(F17),
        max_imag: F17(r.max_imag),
        method: r.method.as_str().into(),
        tail_bound: r.tail_bound.map(F17),
        clusters: r.clusters.as_ref().map(|cs| {
            cs.iter()
                .map(|c| ClusterOut {
                    members: c.members.clone(),
                    multiplicity: c.multiplicity(),
                    centroid: complex(c.centroid),
                })
                .collect()
        }),
        m: None,
        points: None,
    }
}

fn run_roots(req: &Request) -> Outcome<RootsResult> {
    let a = alphas(req)?;
    let poly = char_polynomial(&a);
    let sol = ar_roots(&a)?;
    Ok(RootsResult {
        alphas: reals(a.alphas()),
        polynomial: reals(poly.coefficients()),
        roots: complexes(sol.roots.roots()),
        stationary: sol.roots.is_stationary(),
        conjugate_closed: sol.roots.conjugate_closed(),
        max_modulus: F17(sol.roots.max_modulus()),
        residual: F17(sol.residual),
        iterations: sol.iterations,
    })
}

fn run_limit(req: &Request) -> Outcome<LimitResult> {
    let roots = root_set(req)?;
    let (s, shifts) = total_shift(req, roots.len())?;
    let cluster_tol = req.cluster_tol.unwrap_or(DEFAULT_CLUSTER_TOL);
    let out = limit_a_with(&roots, s, cluster_tol)?;
    Ok(LimitResult {
        s,
        k: roots.len(),
        roots: complexes(roots.roots()),
        shifts: shifts.map(|v| v.shifts().to_vec()),
        eval: eval_out(&out),
    })
}

fn discrepancy(a: (&str, Complex64), b: (&str, Complex64), tol: f64) -> Discrepancy {
    let abs = (a.1 - b.1).norm();
    let scale = a.1.norm().max(b.1.norm());
    let rel = if scale > 0.0 { abs / scale } else { 0.0 };
    Discrepancy {
        a: a.0.into(),
        b: b.0.into(),
        abs: F17(abs),
        rel: F17(rel),
        within_tolerance: abs <= tol * (1.0 + scale),
    }
}

fn run_oracle(req: &Request) -> Outcome<OracleResult> {
    let roots = root_set(req)?;
    let k = roots.len();
    let (s, shifts) = total_shift(req, k)?;
    let tol = req.tol.unwrap_or(DEFAULT_TOL);
    if tol.is_nan() || tol < 0.0 {
        return Err(Failure::invalid("tol must be non-negative"));
    }
    let cluster_tol = req.cluster_tol.unwrap_or(DEFAULT_CLUSTER_TOL);

    let closed = limit_a_with(&roots, s, cluster_tol)?;
    let m = match req.m {
        Some(m) => m,
        None => bs_truncation_for(&roots, s, BS_TAIL_TARGET)?,
    };
    let bs = bs_truncated(&roots, s, m)?;
    let points = req.points.unwrap_or_else(|| default_contour_points(&roots, s));
    let contour = contour_coefficient(&roots, s, points)?;

    let n1 = req.n1.unwrap_or(DEFAULT_N1);
    let n2 = req.n2.unwrap_or(DEFAULT_N2);
    let shifts = match shifts {
        Some(v) => v,
        None => ShiftVector::canonical(s, k)?,
    };
    let (slope, slope_skipped) = if (n2 as f64).powi(k as i32) > DIRECT_SUM_BUDGET {
        (
            None,
            Some(format!(
                "BUDGET_EXCEEDED: n2^k = {n2}^{k} exceeds {DIRECT_SUM_BUDGET:e} tuples"
            )),
        )
    } else {
        (Some(slope_estimate(&roots, &shifts, n1, n2)?), None)
    };

    let mut named = vec![
        ("closed_form", closed.value),
        ("bs_truncated", bs.value),
        ("contour", contour.value),
    ];
    if let Some(sl) = &slope {
        named.push(("slope", sl.value));
    }
    let mut discrepancies = Vec::new();
    for i in 0..named.len() {
        for j in i + 1..named.len() {
            discrepancies.push(discrepancy(named[i], named[j], tol));
        }
    }

    if discrepancies.iter().any(|d| !d.within_tolerance) {
        let worst = discrepancies
            .iter()
            .filter(|d| !d.within_tolerance)
            .map(|d| format!("{} vs {}: {:e}", d.a, d.b, d.abs.0))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Failure {
            code: "ORACLE_MISMATCH".into(),
            message: format!("discrepancies exceed tolerance {tol:e}: {worst}"),
            details: Some(discrepancies),
        });
    }

    let mut bs_out = eval_out(&bs);
    bs_out.m = Some(m);
    let mut contour_out = eval_out(&contour);
    contour_out.points = Some(points);
    Ok(OracleResult {
        s,
        k,
        roots: complexes(roots.roots()),
        tolerance: F17(tol),
        closed_form: eval_out(&closed),
        bs_truncated: bs_out,
        contour: contour_out,
        slope: slope.map(|sl| SlopeOut {
            n1: sl.n1,
            n2: sl.n2,
            shifts: shifts.shifts().to_vec(),
            value: complex(sl.value),
            raw_sums: [complex(sl.raw_sums.0), complex(sl.raw_sums.1)],
        }),
        slope_skipped,
        discrepancies,
    })
}

fn run_simulate(req: &Request) -> Outcome<SimulateResult> {
    let a = alphas(req)?;
    let n = req.n.ok_or_else(|| Failure::invalid("n is required"))?;
    let sigma = req.sigma.unwrap_or(DEFAULT_SIGMA);
    let seed = req.seed.unwrap_or(DEFAULT_SEED);
    let series = simulate(&a, sigma, n, req.burn_in, seed)?;
    let roots = ar_roots(&a)?.roots;
    let max_lag = req.max_lag.unwrap_or(DEFAULT_MAX_LAG).min(n - 1);
    let values = &series.values;
    let lagged = (0..=max_lag)
        .map(|j| lagged_cross_sum(values, j).map(F17))
        .collect::<Result<Vec<_>, _>>()?;
    let ratios = (0..=max_lag)
        .map(|j| lag_ratio(values, j).map(F17))
        .collect::<Result<Vec<_>, _>>()?;

    if let Some(path) = &req.export {
        let file = File::create(path)
            .map_err(|e| Failure::new("IO_ERROR", format!("{path}: {e}")))?;
        write_series(values, BufWriter::new(file))
            .map_err(|e| Failure::new("IO_ERROR", format!("{path}: {e}")))?;
    }

    Ok(SimulateResult {
        alphas: reals(a.alphas()),
        sigma: F17(sigma),
        n,
        burn_in: series.burn_in,
        seed,
        roots: complexes(roots.roots()),
        sum_x: F17(sum_x(values)),
        mean: F17(sample_mean(values)),
        variance: F17(if n > 1 { sample_variance(values) } else { 0.0 }),
        lagged_cross_sums: lagged,
        lag_ratios: ratios,
        values: req.include_values.unwrap_or(false).then(|| reals(values)),
        export: req.export.clone(),
    })
}
