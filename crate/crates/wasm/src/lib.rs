//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain text inputs, returns a JSON string, and reports
//! failures as a thrown string. The `*_json` functions hold the logic and
//! are plain Rust so they can be tested off the browser.

use arlimit::limit::default_contour_points;
use arlimit::oracles::{bs_truncation_for, direct_sum_s4_with};
use arlimit::roots::{ar_roots, char_polynomial};
use arlimit::sim::{default_burn_in, lag_ratio, sample_mean, sample_variance};
use arlimit::{
    bs_truncated, contour_coefficient, limit_a, simulate, ArCoefficients, Complex64,
    Parallelism, RootMultiset, ShiftVector,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest series the page asks to plot.
const MAX_PLOT_POINTS: usize = 4000;

/// Slope oracle sizes; only used while `n2^k` stays small enough for a page.
const SLOPE_N1: usize = 150;
const SLOPE_N2: usize = 200;
const SLOPE_BUDGET: f64 = 1e6;

fn parse_numbers(text: &str) -> Result<Vec<f64>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

/// Parses `re` or `re,im` entries separated by `;` or newlines.
fn parse_roots(text: &str) -> Result<RootMultiset, String> {
    let roots = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|entry| match parse_numbers(entry)?.as_slice() {
            [re] => Ok(Complex64::new(*re, 0.0)),
            [re, im] => Ok(Complex64::new(*re, *im)),
            _ => Err(format!("{entry:?} is not `re` or `re,im`")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    RootMultiset::new(roots).map_err(|e| e.to_string())
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// `A(S)` for `S = 0..=s_max` by the closed form and the truncated-B and
/// contour oracles, plus the slope oracle when it is cheap.
pub fn limit_curve_json(roots_text: &str, s_max: u32) -> Result<String, String> {
    let roots = parse_roots(roots_text)?;
    roots.validate(0.0).map_err(|e| e.to_string())?;
    let k = roots.len();
    let slope_ok = (SLOPE_N2 as f64).powi(k as i32) <= SLOPE_BUDGET;
    let mut rows = Vec::new();
    for s in 0..=u64::from(s_max) {
        let closed = limit_a(&roots, s).map_err(|e| e.to_string())?;
        let m = bs_truncation_for(&roots, s, 1e-12).map_err(|e| e.to_string())?;
        let bs = bs_truncated(&roots, s, m).map_err(|e| e.to_string())?;
        let points = default_contour_points(&roots, s);
        let contour = contour_coefficient(&roots, s, points).map_err(|e| e.to_string())?;
        let slope = if slope_ok {
            let shifts = ShiftVector::canonical(s, k).map_err(|e| e.to_string())?;
            let sum = |n| direct_sum_s4_with(&roots, &shifts, n, Parallelism::Sequential);
            let t1 = sum(SLOPE_N1).map_err(|e| e.to_string())?;
            let t2 = sum(SLOPE_N2).map_err(|e| e.to_string())?;
            Some(pair((t2 - t1) / (SLOPE_N2 - SLOPE_N1) as f64))
        } else {
            None
        };
        rows.push(json!({
            "S": s,
            "closed_form": pair(closed.value),
            "method": closed.method.as_str(),
            "bs_truncated": pair(bs.value),
            "M": m,
            "tail_bound": bs.tail_bound,
            "contour": pair(contour.value),
            "points": points,
            "slope": slope,
        }));
    }
    Ok(json!({
        "k": k,
        "roots": roots.roots().iter().map(|&z| pair(z)).collect::<Vec<_>>(),
        "conjugate_closed": roots.conjugate_closed(),
        "max_modulus": roots.max_modulus(),
        "rows": rows,
    })
    .to_string())
}

/// Characteristic polynomial and roots of the given AR coefficients.
pub fn char_roots_json(alphas_text: &str) -> Result<String, String> {
    let alphas = ArCoefficients::new(parse_numbers(alphas_text)?).map_err(|e| e.to_string())?;
    let poly = char_polynomial(&alphas);
    let sol = ar_roots(&alphas).map_err(|e| e.to_string())?;
    let stationary = sol.roots.is_stationary();
    Ok(json!({
        "polynomial": poly.coefficients(),
        "roots": sol.roots.roots().iter().map(|&z| pair(z)).collect::<Vec<_>>(),
        "moduli": sol.roots.roots().iter().map(|z| z.norm()).collect::<Vec<_>>(),
        "stationary": stationary,
        "conjugate_closed": sol.roots.conjugate_closed(),
        "residual": sol.residual,
        "burn_in": stationary.then(|| default_burn_in(alphas.order(), &sol.roots)),
    })
    .to_string())
}

/// Simulated path (truncated for plotting) with lag ratios `0..=max_lag`.
pub fn simulate_json(
    alphas_text: &str,
    sigma: f64,
    n: usize,
    seed: u64,
    max_lag: usize,
) -> Result<String, String> {
    let alphas = ArCoefficients::new(parse_numbers(alphas_text)?).map_err(|e| e.to_string())?;
    let series = simulate(&alphas, sigma, n, None, seed).map_err(|e| e.to_string())?;
    let v = &series.values;
    let ratios = (0..=max_lag.min(n.saturating_sub(1)))
        .map(|j| lag_ratio(v, j))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "n": n,
        "burn_in": series.burn_in,
        "mean": sample_mean(v),
        "variance": if n > 1 { sample_variance(v) } else { 0.0 },
        "lag_ratios": ratios,
        "values": &v[..v.len().min(MAX_PLOT_POINTS)],
    })
    .to_string())
}

#[wasm_bindgen]
pub fn limit_curve(roots: &str, s_max: u32) -> Result<String, JsValue> {
    limit_curve_json(roots, s_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn char_roots(alphas: &str) -> Result<String, JsValue> {
    char_roots_json(alphas).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn simulate_path(
    alphas: &str,
    sigma: f64,
    n: u32,
    seed: u32,
    max_lag: u32,
) -> Result<String, JsValue> {
    simulate_json(alphas, sigma, n as usize, u64::from(seed), max_lag as usize)
        .map_err(|e| JsValue::from_str(&e))
}
