//! Domain types shared by every module: AR coefficients, characteristic root
//! multisets, shift vectors and evaluation results.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance used when pairing a root with a conjugate partner.
pub const CONJUGATE_PAIRING_TOL: f64 = 1e-12;

/// The coefficients `α_1..α_k` of `X_i = α_1 X_{i-1} + ... + α_k X_{i-k} + ε_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArCoefficients {
    alphas: Vec<f64>,
}

impl ArCoefficients {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::EmptyInput);
        }
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("AR coefficients"));
        }
        if *alphas.last().unwrap() == 0.0 {
            return Err(Error::ZeroTrailingCoefficient);
        }
        Ok(Self { alphas })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn order(&self) -> usize {
        self.alphas.len()
    }
}

/// The multiset `{λ_1..λ_k}` of characteristic roots.
///
/// Stationarity and conjugate closure are computed once at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RootMultiset {
    roots: Vec<Complex64>,
    conjugate_closed: bool,
    max_modulus: f64,
}

impl RootMultiset {
    pub fn new(roots: Vec<Complex64>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::EmptyInput);
        }
        if roots.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("roots"));
        }
        let conjugate_closed = is_conjugate_closed(&roots);
        let max_modulus = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(Self {
            roots,
            conjugate_closed,
            max_modulus,
        })
    }

    /// Convenience constructor for all-real roots.
    pub fn from_real(roots: &[f64]) -> Result<Self> {
        Self::new(roots.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn conjugate_closed(&self) -> bool {
        self.conjugate_closed
    }

    pub fn max_modulus(&self) -> f64 {
        self.max_modulus
    }

    /// `max_j |λ_j| < 1`.
    pub fn is_stationary(&self) -> bool {
        self.max_modulus < 1.0
    }

    /// Checks `max_j |λ_j| < 1 - margin` and hands back the multiset.
    pub fn validate(&self, stationarity_margin: f64) -> Result<&Self> {
        if self.max_modulus >= 1.0 - stationarity_margin {
            return Err(Error::NonStationary {
                max_modulus: self.max_modulus,
                margin: stationarity_margin,
            });
        }
        Ok(self)
    }
}

/// Validates a root multiset for downstream evaluation.
///
/// Rejects multisets with some `|λ_j| ≥ 1 - stationarity_margin`. The
/// operation is idempotent: validating the output again yields the same value.
pub fn validate_roots(roots: &RootMultiset, stationarity_margin: f64) -> Result<RootMultiset> {
    roots.validate(stationarity_margin).cloned()
}

fn pairs_as_conjugates(a: Complex64, b: Complex64) -> bool {
    (a - b.conj()).norm() <= CONJUGATE_PAIRING_TOL * a.norm().max(1.0)
}

/// True when every root has a conjugate partner of equal multiplicity.
fn is_conjugate_closed(roots: &[Complex64]) -> bool {
    conjugate_partners(roots).is_some()
}

/// Partner index of every root under conjugation (itself for real roots), or
/// `None` if some root is unpaired.
///
/// Roots are matched in a canonical (real, imag) order so the pairing does
/// not depend on the order of the input list.
pub(crate) fn conjugate_partners(roots: &[Complex64]) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&a, &b| {
        let (a, b) = (roots[a], roots[b]);
        a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
    });
    let mut partner = vec![usize::MAX; roots.len()];
    for (pos, &i) in order.iter().enumerate() {
        if partner[i] != usize::MAX {
            continue;
        }
        if pairs_as_conjugates(roots[i], roots[i]) {
            partner[i] = i;
            continue;
        }
        let j = order[pos + 1..]
            .iter()
            .copied()
            .filter(|&j| partner[j] == usize::MAX && pairs_as_conjugates(roots[i], roots[j]))
            .min_by(|&x, &y| {
                let dx = (roots[i] - roots[x].conj()).norm();
                let dy = (roots[i] - roots[y].conj()).norm();
                dx.total_cmp(&dy)
            })?;
        partner[i] = j;
        partner[j] = i;
    }
    Some(partner)
}

/// The integer shifts `s_1..s_k` of the lattice sum, with `S = |Σ s_i|` cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftVector {
    shifts: Vec<i64>,
    total: u64,
}

impl ShiftVector {
    pub fn new(shifts: Vec<i64>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::EmptyInput);
        }
        let total = shifts.iter().map(|&s| s as i128).sum::<i128>().unsigned_abs();
        let total = u64::try_from(total)
            .map_err(|_| Error::InvalidArgument("shift sum overflows".into()))?;
        Ok(Self { shifts, total })
    }

    /// The canonical shift vector `(S, 0, ..., 0)` of length `k`.
    pub fn canonical(s: u64, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyInput);
        }
        let mut shifts = vec![0; k];
        shifts[0] = i64::try_from(s).map_err(|_| Error::InvalidArgument("S too large".into()))?;
        Self::new(shifts)
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// `S = |s_1 + ... + s_k|`.
    pub fn s(&self) -> u64 {
        self.total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    DistinctResidues,
    Confluent,
    Contour,
    Truncated,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::DistinctResidues => "distinct_residues",
            Method::Confluent => "confluent",
            Method::Contour => "contour",
            Method::Truncated => "truncated",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A group of roots that are transitively within the cluster tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    /// Indices into the root list, ascending.
    pub members: Vec<usize>,
    pub centroid: Complex64,
}

impl RootCluster {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Real projection, present only once `max_imag` has been certified.
    pub real_value: Option<f64>,
    pub max_imag: f64,
    pub method: Method,
    /// Certified bound on truncation error (truncated oracle only).
    pub tail_bound: Option<f64>,
    pub clusters: Option<Vec<RootCluster>>,
}

impl EvalResult {
    pub(crate) fn new(value: Complex64, method: Method) -> Self {
        Self {
            value,
            real_value: None,
            max_imag: value.im.abs(),
            method,
            tail_bound: None,
            clusters: None,
        }
    }

    /// Realness tolerance, relative to `1 + |value|`.
    pub const REALNESS_TOL: f64 = 1e-10;

    /// Certifies the value as real when the roots are conjugate-closed.
    pub(crate) fn certify_real(mut self, roots: &RootMultiset) -> Result<Self> {
        if !roots.conjugate_closed() {
            return Ok(self);
        }
        if self.max_imag > Self::REALNESS_TOL * (1.0 + self.value.norm()) {
            return Err(Error::RealnessViolation {
                imag: self.max_imag,
            });
        }
        self.real_value = Some(self.value.re);
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ar_coefficient_validation() {
        assert!(ArCoefficients::new(vec![0.5]).is_ok());
        assert_eq!(ArCoefficients::new(vec![]), Err(Error::EmptyInput));
        assert_eq!(
            ArCoefficients::new(vec![0.5, 0.0]),
            Err(Error::ZeroTrailingCoefficient)
        );
        assert!(matches!(
            ArCoefficients::new(vec![f64::NAN]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn single_real_root_is_stationary() {
        let r = RootMultiset::from_real(&[0.5]).unwrap();
        let v = validate_roots(&r, 0.0).unwrap();
        assert!(v.is_stationary());
        assert!(v.conjugate_closed());
    }

    #[test]
    fn unit_root_rejected() {
        let r = RootMultiset::from_real(&[1.0]).unwrap();
        assert!(matches!(
            validate_roots(&r, 0.0),
            Err(Error::NonStationary { .. })
        ));
    }

    #[test]
    fn conjugate_pair() {
        let r = RootMultiset::new(vec![c(0.5, 0.5), c(0.5, -0.5)]).unwrap();
        assert!((r.max_modulus() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(validate_roots(&r, 0.0).is_ok());
        assert!(r.conjugate_closed());
    }

    #[test]
    fn margin_tightens_stationarity() {
        let r = RootMultiset::from_real(&[0.95]).unwrap();
        assert!(validate_roots(&r, 0.0).is_ok());
        assert!(validate_roots(&r, 0.1).is_err());
    }

    #[test]
    fn unpaired_complex_root_not_closed() {
        let r = RootMultiset::new(vec![c(0.5, 0.5), c(0.5, 0.5)]).unwrap();
        assert!(!r.conjugate_closed());
        let r = RootMultiset::new(vec![c(0.5, 0.5), c(0.5, -0.5), c(0.1, 0.2)]).unwrap();
        assert!(!r.conjugate_closed());
    }

    #[test]
    fn empty_and_nan_roots() {
        assert_eq!(RootMultiset::new(vec![]), Err(Error::EmptyInput));
        assert!(RootMultiset::new(vec![c(f64::INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn shift_vector_total() {
        let s = ShiftVector::new(vec![-1, 2]).unwrap();
        assert_eq!(s.s(), 1);
        let s = ShiftVector::new(vec![-3, 1, -2]).unwrap();
        assert_eq!(s.s(), 4);
        assert_eq!(ShiftVector::canonical(3, 2).unwrap().shifts(), &[3, 0]);
    }

    fn root_strategy() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-0.9f64..0.9, 0.0f64..0.4, any::<bool>()), 1..4).prop_map(
            |parts| {
                let mut out = Vec::new();
                for (re, im, pair) in parts {
                    if pair {
                        out.push(Complex64::new(re, im));
                        out.push(Complex64::new(re, -im));
                    } else {
                        out.push(Complex64::new(re, 0.0));
                    }
                }
                out
            },
        )
    }

    proptest! {
        #[test]
        fn validate_is_idempotent(roots in root_strategy(), margin in 0.0f64..0.2) {
            let r = RootMultiset::new(roots).unwrap();
            if let Ok(v) = validate_roots(&r, margin) {
                prop_assert_eq!(validate_roots(&v, margin).unwrap(), v);
            }
        }

        #[test]
        fn closure_is_permutation_invariant(roots in root_strategy(), rot in 0usize..8) {
            let r = RootMultiset::new(roots.clone()).unwrap();
            prop_assert!(r.conjugate_closed());
            let mut perm = roots;
            let n = perm.len();
            perm.rotate_left(rot % n);
            perm.reverse();
            prop_assert_eq!(RootMultiset::new(perm).unwrap().conjugate_closed(), r.conjugate_closed());
        }

        #[test]
        fn s_invariant_under_permutation_and_negation(shifts in prop::collection::vec(-50i64..50, 1..6)) {
            let s = ShiftVector::new(shifts.clone()).unwrap().s();
            let mut rev = shifts.clone();
            rev.reverse();
            prop_assert_eq!(ShiftVector::new(rev).unwrap().s(), s);
            let neg: Vec<i64> = shifts.iter().map(|x| -x).collect();
            prop_assert_eq!(ShiftVector::new(neg).unwrap().s(), s);
        }
    }
}
