#![allow(dead_code)]

use arlimit::{Complex64, RootMultiset, ShiftVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Conjugate-closed roots with `max|λ| ≤ max_modulus`: a random number of
/// complex pairs, the rest real.
pub fn conjugate_closed_roots(rng: &mut impl Rng, k: usize, max_modulus: f64) -> Vec<Complex64> {
    let pairs = rng.gen_range(0..=k / 2);
    let mut out = Vec::with_capacity(k);
    for _ in 0..pairs {
        let r = rng.gen_range(0.05..=max_modulus);
        let theta = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
        let z = Complex64::from_polar(r, theta);
        out.push(z);
        out.push(z.conj());
    }
    while out.len() < k {
        out.push(Complex64::new(rng.gen_range(-max_modulus..=max_modulus), 0.0));
    }
    out
}

pub fn random_multiset(rng: &mut impl Rng, k: usize, max_modulus: f64) -> RootMultiset {
    RootMultiset::new(conjugate_closed_roots(rng, k, max_modulus)).unwrap()
}

/// Random small shifts whose sum has absolute value `s`.
pub fn shifts_with_sum(rng: &mut impl Rng, k: usize, s: i64) -> ShiftVector {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut shifts: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(-3..=3)).collect();
    let partial: i64 = shifts.iter().sum();
    shifts.push(sign * s - partial);
    ShiftVector::new(shifts).unwrap()
}

/// `|a − b| ≤ tol · (1 + |b|)`.
pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

/// Smallest total |error| over all matchings of two equally sized root lists,
/// returned as the per-root errors of the best matching.
pub fn match_roots(found: &[Complex64], expected: &[Complex64]) -> Vec<f64> {
    fn go(
        found: &[Complex64],
        expected: &[Complex64],
        used: &mut Vec<bool>,
        depth: usize,
        current: &mut Vec<f64>,
        best: &mut Option<(f64, Vec<f64>)>,
    ) {
        if depth == expected.len() {
            let worst = current.iter().cloned().fold(0.0, f64::max);
            if best.as_ref().is_none_or(|(b, _)| worst < *b) {
                *best = Some((worst, current.clone()));
            }
            return;
        }
        for i in 0..found.len() {
            if !used[i] {
                used[i] = true;
                current.push((found[i] - expected[depth]).norm());
                go(found, expected, used, depth + 1, current, best);
                current.pop();
                used[i] = false;
            }
        }
    }
    let mut best = None;
    go(found, expected, &mut vec![false; found.len()], 0, &mut Vec::new(), &mut best);
    best.unwrap().1
}
