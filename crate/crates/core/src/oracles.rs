//! Independent brute-force routes to the limit `A`.
//!
//! * [`direct_sum_s4`] evaluates the finite k-fold lattice sum `T(n)` and
//!   [`slope_estimate`] differences two of them to isolate the part of `T`
//!   that grows linearly in `n`.
//! * [`bs_truncated`] sums `B_S = Σ_{m_1+..+m_k=S} Π λ_p^{|m_p|}` over a
//!   box `|m_p| ≤ M` by iterated convolution and carries a certified bound on
//!   the discarded tail.
//! * [`contour_coefficient`] extracts the `t^S` Laurent coefficient of the
//!   generating function with the trapezoid rule on a circle.
//!
//! None of these touch the residue formula in [`crate::limit`].

use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limit::{self, exponent};
use crate::model::{EvalResult, Method, RootMultiset, ShiftVector};
use crate::summation::{pairwise_reduce, pairwise_sum_by, Parallelism};

/// Largest number of index tuples [`direct_sum_s4`] will visit.
pub const DIRECT_SUM_BUDGET: f64 = 1e9;

pub const DEFAULT_N1: usize = 150;
pub const DEFAULT_N2: usize = 200;

/// Finite lattice sum
/// `T(n) = Σ_{i ∈ {1..n}^k} Π_p λ_p^{|i_p − i_{p+1} − s_p|}` with `i_{k+1} = i_1`.
///
/// Tuples are enumerated lexicographically and reduced along a fixed pairwise
/// tree, so the result does not depend on the thread count.
pub fn direct_sum_s4(roots: &RootMultiset, shifts: &ShiftVector, n: usize) -> Result<Complex64> {
    direct_sum_s4_with(roots, shifts, n, Parallelism::Rayon)
}

pub fn direct_sum_s4_with(
    roots: &RootMultiset,
    shifts: &ShiftVector,
    n: usize,
    mode: Parallelism,
) -> Result<Complex64> {
    let k = roots.len();
    if shifts.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            actual: shifts.len(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let tuples = (n as f64).powi(k as i32);
    if tuples > DIRECT_SUM_BUDGET {
        return Err(Error::BudgetExceeded {
            tuples,
            budget: DIRECT_SUM_BUDGET,
        });
    }
    let total = n.pow(k as u32);
    let s = shifts.shifts();

    // powers[p][a] = λ_p^a for every |i_p − i_{p+1} − s_p| that can occur.
    let powers: Vec<Vec<Complex64>> = roots
        .roots()
        .iter()
        .zip(s)
        .map(|(&l, &sp)| {
            let len = n + sp.unsigned_abs() as usize;
            let mut row = Vec::with_capacity(len);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..len {
                row.push(acc);
                acc *= l;
            }
            row
        })
        .collect();

    let leaf = |range: Range<usize>| {
        let mut idx = vec![0i64; k];
        let mut rest = range.start;
        for d in (0..k).rev() {
            idx[d] = (rest % n) as i64;
            rest /= n;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in range {
            let mut term = Complex64::new(1.0, 0.0);
            for p in 0..k {
                let next = idx[(p + 1) % k];
                let d = (idx[p] - next - s[p]).unsigned_abs() as usize;
                term *= powers[p][d];
            }
            acc += term;
            for d in (0..k).rev() {
                idx[d] += 1;
                if (idx[d] as usize) < n {
                    break;
                }
                idx[d] = 0;
            }
        }
        acc
    };
    Ok(pairwise_reduce(0..total, mode, &leaf))
}

/// Slope of the finite lattice sum between two sizes.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeEstimate {
    pub value: Complex64,
    pub n1: usize,
    pub n2: usize,
    /// `(T(n1), T(n2))`.
    pub raw_sums: (Complex64, Complex64),
}

/// `(T(n2) − T(n1)) / (n2 − n1)`; converges to `A` geometrically in `n1`
/// at rate `max|λ|`.
pub fn slope_estimate(
    roots: &RootMultiset,
    shifts: &ShiftVector,
    n1: usize,
    n2: usize,
) -> Result<SlopeEstimate> {
    if n1 < 1 || n2 <= n1 {
        return Err(Error::InvalidArgument(format!(
            "slope needs 1 ≤ n1 < n2, got n1 = {n1}, n2 = {n2}"
        )));
    }
    let t1 = direct_sum_s4(roots, shifts, n1)?;
    let t2 = direct_sum_s4(roots, shifts, n2)?;
    Ok(SlopeEstimate {
        value: (t2 - t1) / (n2 - n1) as f64,
        n1,
        n2,
        raw_sums: (t1, t2),
    })
}

/// Certified bound on `|B_S − B_S^{(M)}|`, the mass of constrained tuples with
/// some `|m_p| > M`.
///
/// For each offending coordinate `p`, its two-sided tail is
/// `2|λ_p|^{M+1}/(1 − |λ_p|)`; one other coordinate is fixed by the
/// constraint and bounded by 1, and the rest contribute their full two-sided
/// sums `(1 + |λ_q|)/(1 − |λ_q|)`.
pub fn bs_tail_bound(roots: &RootMultiset, s: u64, m: usize) -> f64 {
    let mods: Vec<f64> = roots.roots().iter().map(|z| z.norm()).collect();
    let k = mods.len();
    if k == 1 {
        return if s as usize <= m { 0.0 } else { f64::INFINITY };
    }
    let full: Vec<f64> = mods.iter().map(|&a| (1.0 + a) / (1.0 - a)).collect();
    (0..k)
        .map(|p| {
            let tail = 2.0 * mods[p].powi(m as i32 + 1) / (1.0 - mods[p]);
            let absorbed = (0..k)
                .filter(|&q| q != p)
                .max_by(|&a, &b| full[a].total_cmp(&full[b]))
                .unwrap();
            let rest: f64 = (0..k)
                .filter(|&q| q != p && q != absorbed)
                .map(|q| full[q])
                .product();
            tail * rest
        })
        .sum()
}

/// Smallest box half-width `M ≥ S` whose certified tail bound is at most
/// `target`.
pub fn bs_truncation_for(roots: &RootMultiset, s: u64, target: f64) -> Result<usize> {
    roots.validate(0.0)?;
    let mut m = s as usize;
    while bs_tail_bound(roots, s, m) > target {
        m += 1;
        if m > 1 << 20 {
            return Err(Error::InvalidArgument(format!(
                "no truncation up to 2^20 reaches tail bound {target:e}"
            )));
        }
    }
    Ok(m)
}

/// `B_S` over the box `|m_p| ≤ M`, by iterated convolution of the sequences
/// `(λ_p^{|m|})_{|m| ≤ M}`.
pub fn bs_truncated(roots: &RootMultiset, s: u64, m: usize) -> Result<EvalResult> {
    roots.validate(0.0)?;
    if (s as usize) > m {
        return Err(Error::InvalidArgument(format!("M = {m} must be at least S = {s}")));
    }
    let z = roots.roots();
    let k = z.len();
    let width = 2 * m + 1;
    let two_sided = |l: Complex64| -> Vec<Complex64> {
        let mut half = Vec::with_capacity(m + 1);
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..=m {
            half.push(acc);
            acc *= l;
        }
        (0..width)
            .map(|i| half[(i as i64 - m as i64).unsigned_abs() as usize])
            .collect()
    };

    // partial[i] holds the sum over the first p coordinates adding to i − p·M.
    let mut partial = two_sided(z[0]);
    for &l in z.iter().take(k.saturating_sub(1)).skip(1) {
        let seq = two_sided(l);
        let len = partial.len() + width - 1;
        partial = (0..len)
            .map(|i| {
                let lo = i.saturating_sub(width - 1);
                let hi = i.min(partial.len() - 1);
                pairwise_sum_by(hi + 1 - lo, |j| partial[lo + j] * seq[i - lo - j])
            })
            .collect();
    }

    let value = if k == 1 {
        partial[m + s as usize]
    } else {
        // Final coordinate: only the coefficient at S is needed.
        let seq = two_sided(z[k - 1]);
        let offset = (k - 1) * m;
        let target = offset as i64 + s as i64;
        pairwise_sum_by(width, |j| {
            let idx = target - (j as i64 - m as i64);
            if idx >= 0 && (idx as usize) < partial.len() {
                partial[idx as usize] * seq[j]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };

    let mut out = EvalResult::new(value, Method::Truncated);
    out.tail_bound = Some(bs_tail_bound(roots, s, m));
    out.certify_real(roots)
}

/// Trapezoid-rule extraction of the `t^S` Laurent coefficient of `F(t)` on the
/// unit circle, the geometric middle of the convergence annulus.
pub fn contour_coefficient(roots: &RootMultiset, s: u64, num_points: usize) -> Result<EvalResult> {
    roots.validate(0.0)?;
    exponent(s)?;
    let floor = 2 * (s as usize + 8);
    if num_points < floor {
        return Err(Error::InvalidArgument(format!(
            "contour needs at least {floor} points for S = {s}, got {num_points}"
        )));
    }
    let value = limit::laurent_coefficient(roots, s, num_points)?;
    EvalResult::new(value, Method::Contour).certify_real(roots)
}
