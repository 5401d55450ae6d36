//! Deterministic pairwise (cascade) summation.
//!
//! Every reduction here splits its index range at the midpoint until a leaf of
//! at most [`LEAF`] items remains, then sums the leaf left to right. The tree
//! shape depends only on the length of the range, so the sequential and the
//! parallel drivers produce bit-identical results.

use std::ops::{Add, Range};

use num_complex::Complex64;

/// Largest range summed sequentially.
pub const LEAF: usize = 256;

/// Ranges longer than this are split across rayon workers in parallel mode.
const PAR_SPLIT: usize = 1 << 14;

pub trait Summand: Copy + Add<Output = Self> + Send {
    const ZERO: Self;
}

impl Summand for f64 {
    const ZERO: Self = 0.0;
}

impl Summand for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
}

/// Whether a reduction may fan out across threads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[default]
    Rayon,
}

/// Pairwise sum of a slice.
pub fn pairwise_sum<T: Summand + Sync>(values: &[T]) -> T {
    pairwise_reduce(0..values.len(), Parallelism::Sequential, &|r: Range<usize>| {
        values[r].iter().fold(T::ZERO, |acc, &v| acc + v)
    })
}

/// Pairwise sum of `term(i)` for `i` in `0..len`.
pub fn pairwise_sum_by<T, F>(len: usize, term: F) -> T
where
    T: Summand,
    F: Fn(usize) -> T + Sync,
{
    pairwise_reduce(0..len, Parallelism::Sequential, &|r: Range<usize>| {
        r.fold(T::ZERO, |acc, i| acc + term(i))
    })
}

/// Reduces `range` along the fixed pairwise tree; `leaf` sums one leaf range
/// (at most [`LEAF`] long) in index order.
pub fn pairwise_reduce<T, F>(range: Range<usize>, mode: Parallelism, leaf: &F) -> T
where
    T: Summand,
    F: Fn(Range<usize>) -> T + Sync,
{
    let len = range.end - range.start;
    if len == 0 {
        return T::ZERO;
    }
    if len <= LEAF {
        return leaf(range);
    }
    let mid = range.start + len / 2;
    let (lo, hi) = (range.start..mid, mid..range.end);
    let (a, b) = if mode == Parallelism::Rayon && len > PAR_SPLIT {
        rayon::join(
            || pairwise_reduce(lo, mode, leaf),
            || pairwise_reduce(hi, mode, leaf),
        )
    } else {
        (pairwise_reduce(lo, mode, leaf), pairwise_reduce(hi, mode, leaf))
    };
    a + b
}
