//! Characteristic polynomial of an AR(k) model and its roots.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ArCoefficients, RootMultiset};

/// `λ^k − α_1 λ^{k−1} − ... − α_k`, coefficients highest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPolynomial {
    coefficients: Vec<f64>,
}

impl MonicPolynomial {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidArgument(
                "a monic polynomial needs degree at least 1".into(),
            ));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        if coefficients[0] != 1.0 {
            return Err(Error::InvalidArgument("leading coefficient must be 1".into()));
        }
        Ok(Self { coefficients })
    }

    /// Monic polynomial with the given roots, `∏ (λ − λ_j)`.
    ///
    /// Fails unless the expansion is real, which holds for conjugate-closed
    /// input up to rounding.
    pub fn from_roots(roots: &RootMultiset) -> Result<Self> {
        let expanded = expand_roots(roots.roots());
        let scale = expanded.iter().map(|c| c.norm()).fold(1.0, f64::max);
        if expanded.iter().any(|c| c.im.abs() > 1e-12 * scale) {
            return Err(Error::InvalidArgument(
                "roots are not conjugate-closed; the polynomial is not real".into(),
            ));
        }
        Self::new(expanded.iter().map(|c| c.re).collect())
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in &self.coefficients {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }
}

/// Coefficients of `∏ (λ − r_j)`, highest degree first.
pub fn expand_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        coeffs.push(Complex64::new(0.0, 0.0));
        for i in (1..coeffs.len()).rev() {
            let prev = coeffs[i - 1];
            coeffs[i] -= r * prev;
        }
    }
    coeffs
}

/// Builds the characteristic polynomial `[1, −α_1, ..., −α_k]`.
pub fn char_polynomial(alphas: &ArCoefficients) -> MonicPolynomial {
    let mut coefficients = Vec::with_capacity(alphas.order() + 1);
    coefficients.push(1.0);
    coefficients.extend(alphas.alphas().iter().map(|a| -a));
    MonicPolynomial { coefficients }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Stop once every per-root correction is at most this large.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSolution {
    pub roots: RootMultiset,
    /// Max absolute difference between the input coefficients and those of
    /// `∏ (λ − λ_j)` rebuilt from the returned roots.
    pub residual: f64,
    pub iterations: usize,
}

/// Residual target for a degree-`k` polynomial with the given coefficients.
pub fn residual_target(coefficients: &[f64]) -> f64 {
    let k = (coefficients.len() - 1) as f64;
    let max_c = coefficients.iter().map(|c| c.abs()).fold(0.0, f64::max);
    k * 1e-10 * (1.0 + max_c)
}

/// Finds all roots of a real monic polynomial by Aberth–Ehrlich simultaneous
/// iteration.
///
/// Roots come back conjugate-symmetrized and sorted by (real, imag). Repeated
/// roots are returned as close but distinct values.
pub fn solve_roots(poly: &MonicPolynomial, opts: SolveOptions) -> Result<RootSolution> {
    let k = poly.degree();
    let coeffs = poly.coefficients();
    let radius = 1.0 + coeffs[1..].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..k)
        .map(|j| Complex64::from_polar(radius, 2.0 * PI * j as f64 / k as f64 + 0.4))
        .collect();

    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut max_step = 0.0f64;
        let next: Vec<Complex64> = (0..k)
            .map(|i| {
                let (p, dp) = poly.eval_with_derivative(z[i]);
                if p == Complex64::new(0.0, 0.0) {
                    return z[i];
                }
                let newton = p / dp;
                let repulsion: Complex64 = (0..k)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
                if step.re.is_finite() && step.im.is_finite() {
                    z[i] - step
                } else {
                    z[i]
                }
            })
            .collect();
        for (old, new) in z.iter().zip(&next) {
            max_step = max_step.max((old - new).norm());
        }
        z = next;
        if max_step <= opts.tol {
            break;
        }
    }

    symmetrize_conjugates(&mut z);
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let rebuilt = expand_roots(&z);
    let residual = rebuilt
        .iter()
        .zip(coeffs)
        .map(|(r, &c)| (r - c).norm())
        .fold(0.0, f64::max);
    if residual.is_nan() || residual > residual_target(coeffs) {
        return Err(Error::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(RootSolution {
        roots: RootMultiset::new(z)?,
        residual,
        iterations,
    })
}

/// Pairs each root with its nearest conjugate partner and replaces the pair
/// by an exact conjugate pair; roots closer to their own conjugate than to
/// any partner become exactly real.
fn symmetrize_conjugates(z: &mut [Complex64]) {
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by(|&a, &b| z[b].im.abs().total_cmp(&z[a].im.abs()).then(a.cmp(&b)));
    let mut done = vec![false; z.len()];
    for &i in &order {
        if done[i] {
            continue;
        }
        done[i] = true;
        let a = z[i];
        let self_dist = 2.0 * a.im.abs();
        let partner = (0..z.len())
            .filter(|&j| !done[j])
            .map(|j| (j, (a - z[j].conj()).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
        match partner {
            Some((j, d)) if d < self_dist => {
                done[j] = true;
                let m = (a + z[j].conj()) * 0.5;
                let (upper, lower) = if m.im >= 0.0 { (m, m.conj()) } else { (m.conj(), m) };
                z[i] = if a.im >= 0.0 { upper } else { lower };
                z[j] = z[i].conj();
            }
            _ => z[i] = Complex64::new(a.re, 0.0),
        }
    }
}

/// `max_j |λ_j| < 1`.
pub fn is_stationary(roots: &RootMultiset) -> bool {
    roots.is_stationary()
}

/// Characteristic roots of an AR model with default solver settings.
pub fn ar_roots(alphas: &ArCoefficients) -> Result<RootSolution> {
    solve_roots(&char_polynomial(alphas), SolveOptions::default())
}
