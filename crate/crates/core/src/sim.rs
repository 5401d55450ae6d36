//! AR(k) sample paths and the sums built from them.
//!
//! Noise comes from ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`)
//! turned into standard normals by the Box–Muller transform: each pair of
//! 64-bit outputs `(a, b)` gives `u1 = ((a >> 11) + 1) · 2^-53` in `(0, 1]`,
//! `u2 = (b >> 11) · 2^-53` in `[0, 1)`, and the two variates
//! `sqrt(-2 ln u1) · cos(2π u2)` and `sqrt(-2 ln u1) · sin(2π u2)`, used in
//! that order.

use std::f64::consts::PI;
use std::io::{self, BufRead, Write};

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ArCoefficients, RootMultiset};
use crate::roots::ar_roots;
use crate::summation::{pairwise_sum, pairwise_sum_by, Parallelism};

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSample {
    pub values: Vec<f64>,
    pub alphas: ArCoefficients,
    pub sigma: f64,
    pub seed: u64,
    pub burn_in: usize,
}

impl SeriesSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Standard normal variates from a seeded ChaCha20 stream.
pub struct GaussianStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * SCALE;
        let u2 = (self.rng.next_u64() >> 11) as f64 * SCALE;
        let radius = (-2.0 * u1.ln()).sqrt();
        let (sin, cos) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(radius * sin);
        radius * cos
    }
}

/// `⌈10 k / (1 − max|λ|)⌉`.
pub fn default_burn_in(order: usize, roots: &RootMultiset) -> usize {
    (10.0 * order as f64 / (1.0 - roots.max_modulus())).ceil() as usize
}

/// Runs `X_i = α_1 X_{i−1} + ... + α_k X_{i−k} + σ ε_i` from a zero start for
/// `burn_in + n` steps and keeps the last `n` values.
///
/// `burn_in = None` picks [`default_burn_in`].
pub fn simulate(
    alphas: &ArCoefficients,
    sigma: f64,
    n: usize,
    burn_in: Option<usize>,
    seed: u64,
) -> Result<SeriesSample> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    let roots = ar_roots(alphas)?.roots;
    roots.validate(0.0)?;
    let burn_in = burn_in.unwrap_or_else(|| default_burn_in(alphas.order(), &roots));

    let a = alphas.alphas();
    let k = a.len();
    let mut noise = GaussianStream::new(seed);
    let mut history = vec![0.0; k + burn_in + n];
    for i in k..history.len() {
        let mut x = sigma * noise.next_gaussian();
        for (lag, &coef) in a.iter().enumerate() {
            x += coef * history[i - 1 - lag];
        }
        history[i] = x;
    }
    let values = history.split_off(k + burn_in);
    Ok(SeriesSample {
        values,
        alphas: alphas.clone(),
        sigma,
        seed,
        burn_in,
    })
}

/// Simulates one path per seed, optionally across threads. Each path depends
/// only on its own seed.
pub fn simulate_many(
    alphas: &ArCoefficients,
    sigma: f64,
    n: usize,
    burn_in: Option<usize>,
    seeds: &[u64],
    mode: Parallelism,
) -> Result<Vec<SeriesSample>> {
    match mode {
        Parallelism::Sequential => seeds
            .iter()
            .map(|&s| simulate(alphas, sigma, n, burn_in, s))
            .collect(),
        Parallelism::Rayon => seeds
            .par_iter()
            .map(|&s| simulate(alphas, sigma, n, burn_in, s))
            .collect(),
    }
}

/// `Σ_{i=1}^{n} X_i`.
pub fn sum_x(series: &[f64]) -> f64 {
    pairwise_sum(series)
}

/// `Σ_{i=1}^{n−j} X_i X_{i+j}`.
pub fn lagged_cross_sum(series: &[f64], j: usize) -> Result<f64> {
    if j >= series.len() {
        return Err(Error::LagTooLarge {
            lag: j,
            len: series.len(),
        });
    }
    Ok(pairwise_sum_by(series.len() - j, |i| series[i] * series[i + j]))
}

/// Uncentered lag-`j` autocorrelation, `lagged_cross_sum(j) / lagged_cross_sum(0)`.
pub fn lag_ratio(series: &[f64], j: usize) -> Result<f64> {
    Ok(lagged_cross_sum(series, j)? / lagged_cross_sum(series, 0)?)
}

pub fn sample_mean(series: &[f64]) -> f64 {
    sum_x(series) / series.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(series: &[f64]) -> f64 {
    let mean = sample_mean(series);
    let ss = pairwise_sum_by(series.len(), |i| (series[i] - mean).powi(2));
    ss / (series.len() as f64 - 1.0)
}

/// `ρ_j = Σ_p A_p λ_p^{|j|}` with caller-supplied weights `A_p`.
pub fn rho_eval(a_coeffs: &[Complex64], roots: &RootMultiset, j: i64) -> Result<Complex64> {
    if a_coeffs.len() != roots.len() {
        return Err(Error::LengthMismatch {
            expected: roots.len(),
            actual: a_coeffs.len(),
        });
    }
    let exp = u32::try_from(j.unsigned_abs())
        .map_err(|_| Error::InvalidArgument(format!("lag {j} is too large")))?;
    Ok(a_coeffs
        .iter()
        .zip(roots.roots())
        .map(|(a, l)| a * l.powu(exp))
        .sum())
}

/// Writes one value per line in shortest round-trip scientific notation.
pub fn write_series<W: Write>(values: &[f64], mut out: W) -> io::Result<()> {
    for v in values {
        writeln!(out, "{v:e}")?;
    }
    out.flush()
}

/// Reads the single-column format of [`write_series`]; blank lines are skipped.
pub fn read_series<R: BufRead>(input: R) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = line.parse::<f64>().map_err(|e| {
            Error::InvalidArgument(format!("line {}: {e}: {line:?}", lineno + 1))
        })?;
        values.push(v);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ar(a: &[f64]) -> ArCoefficients {
        ArCoefficients::new(a.to_vec()).unwrap()
    }

    #[test]
    fn gaussian_stream_moments() {
        let mut g = GaussianStream::new(7);
        let xs: Vec<f64> = (0..200_000).map(|_| g.next_gaussian()).collect();
        assert!(sample_mean(&xs).abs() < 0.01);
        assert!((sample_variance(&xs) - 1.0).abs() < 0.01);
    }

    #[test]
    fn same_seed_same_series() {
        let a = simulate(&ar(&[0.6, -0.2]), 1.0, 1000, None, 42).unwrap();
        let b = simulate(&ar(&[0.6, -0.2]), 1.0, 1000, None, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate(&ar(&[0.6, -0.2]), 1.0, 1000, None, 43).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            simulate(&ar(&[1.2]), 1.0, 10, None, 1),
            Err(Error::NonStationary { .. })
        ));
        assert!(simulate(&ar(&[0.5]), 0.0, 10, None, 1).is_err());
        assert!(simulate(&ar(&[0.5]), 1.0, 0, None, 1).is_err());
    }

    #[test]
    fn white_noise_has_no_lag_correlation() {
        // α = 0 is not a valid trailing coefficient; a tiny one is white noise
        // for all practical purposes.
        let s = simulate(&ar(&[1e-300]), 1.0, 100_000, Some(0), 3).unwrap();
        assert!(lag_ratio(&s.values, 1).unwrap().abs() < 0.01);
    }

    #[test]
    fn ar1_lag_one() {
        let s = simulate(&ar(&[0.5]), 1.0, 100_000, None, 11).unwrap();
        assert!((lag_ratio(&s.values, 1).unwrap() - 0.5).abs() < 0.01);
        let sd = sample_variance(&s.values).sqrt();
        let n = s.len() as f64;
        assert!(sum_x(&s.values).abs() / n <= 3.0 * sd / (n * 0.25).sqrt());
    }

    #[test]
    fn default_burn_in_depth() {
        let s = simulate(&ar(&[0.5]), 1.0, 5, None, 0).unwrap();
        assert_eq!(s.burn_in, 20);
    }

    #[test]
    fn sums() {
        assert_eq!(sum_x(&[0.0; 5]), 0.0);
        assert_eq!(sum_x(&[1.0, 2.0, 3.0]), 6.0);
        assert_eq!(lagged_cross_sum(&[1.0, 2.0, 3.0], 1).unwrap(), 8.0);
        assert_eq!(lagged_cross_sum(&[1.0, 2.0, 3.0], 0).unwrap(), 14.0);
        assert!(matches!(
            lagged_cross_sum(&[1.0, 2.0, 3.0], 3),
            Err(Error::LagTooLarge { lag: 3, len: 3 })
        ));
    }

    #[test]
    fn rho_values() {
        let one = [Complex64::new(1.0, 0.0)];
        let r = RootMultiset::from_real(&[0.5]).unwrap();
        assert_eq!(rho_eval(&one, &r, 3).unwrap().re, 0.125);
        let half = [Complex64::new(0.5, 0.0); 2];
        let r = RootMultiset::from_real(&[0.5, 0.3]).unwrap();
        assert!((rho_eval(&half, &r, 2).unwrap().re - 0.17).abs() < 1e-15);
        assert!(matches!(
            rho_eval(&one, &r, 1),
            Err(Error::LengthMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn rho_is_even_in_lag(j in -40i64..40, a in -2.0f64..2.0, l in -0.99f64..0.99) {
            let roots = RootMultiset::from_real(&[l, 0.3]).unwrap();
            let w = [Complex64::new(a, 0.0), Complex64::new(1.0 - a, 0.0)];
            prop_assert_eq!(rho_eval(&w, &roots, j).unwrap(), rho_eval(&w, &roots, -j).unwrap());
        }

        #[test]
        fn export_round_trips_bits(values in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 0..50)) {
            let mut buf = Vec::new();
            write_series(&values, &mut buf).unwrap();
            let back = read_series(&buf[..]).unwrap();
            prop_assert_eq!(back.len(), values.len());
            for (a, b) in back.iter().zip(&values) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
