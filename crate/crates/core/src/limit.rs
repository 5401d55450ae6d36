//! Closed-form evaluation of the limit
//!
//! ```text
//! A = lim_{n→∞} (1/n) Σ_{i_1..i_k = 1}^{n} λ_1^{|i_1−i_2−s_1|} ··· λ_k^{|i_k−i_1−s_k|}
//!   = Σ_j λ_j^S C_j,     S = |s_1 + ... + s_k|,
//! C_j = λ_j^{k−1} Π_{ℓ≠j} (1 − λ_ℓ²) / ((λ_j − λ_ℓ)(1 − λ_j λ_ℓ)).
//! ```
//!
//! `A` is also the `t^S` coefficient of the Laurent series
//! `F(t) = Π_ℓ (1/(1 − tλ_ℓ) + (λ_ℓ/t)/(1 − λ_ℓ/t))` on the annulus
//! `max|λ| < |t| < 1/max|λ|`. When roots repeat, the residue formula
//! degenerates and the coefficient is instead extracted numerically from the
//! product form, which stays finite as roots coalesce.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{conjugate_partners, EvalResult, Method, RootCluster, RootMultiset};
use crate::summation::pairwise_sum_by;

/// Roots closer than this (absolute) are treated as repeated.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

/// The coefficients `C_j`, aligned with the root list.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueSet {
    pub c: Vec<Complex64>,
}

impl ResidueSet {
    pub fn sum(&self) -> Complex64 {
        self.c.iter().sum()
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Groups roots transitively within `cluster_tol` of each other.
///
/// Clusters are ordered by their smallest member index.
pub fn cluster_roots(roots: &RootMultiset, cluster_tol: f64) -> Vec<RootCluster> {
    let z = roots.roots();
    let mut parent: Vec<usize> = (0..z.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if (z[i] - z[j]).norm() <= cluster_tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: Vec<RootCluster> = Vec::new();
    let mut slot = vec![usize::MAX; z.len()];
    for i in 0..z.len() {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = clusters.len();
            clusters.push(RootCluster {
                members: Vec::new(),
                centroid: Complex64::new(0.0, 0.0),
            });
        }
        clusters[slot[root]].members.push(i);
    }
    for cl in &mut clusters {
        let total: Complex64 = cl.members.iter().map(|&i| z[i]).sum();
        cl.centroid = total / cl.members.len() as f64;
    }
    clusters
}

fn first_close_pair(roots: &RootMultiset, cluster_tol: f64) -> Option<(usize, usize, f64)> {
    let z = roots.roots();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (z[i] - z[j]).norm();
            if d <= cluster_tol {
                return Some((i, j, d));
            }
        }
    }
    None
}

/// Partial-fraction coefficients `C_j` at the poles `t = 1/λ_j`.
///
/// Requires stationary roots that are pairwise farther apart than
/// [`DEFAULT_CLUSTER_TOL`].
pub fn residue_coefficients(roots: &RootMultiset) -> Result<ResidueSet> {
    residue_coefficients_with(roots, DEFAULT_CLUSTER_TOL)
}

pub fn residue_coefficients_with(roots: &RootMultiset, cluster_tol: f64) -> Result<ResidueSet> {
    roots.validate(0.0)?;
    if let Some((first, second, distance)) = first_close_pair(roots, cluster_tol) {
        return Err(Error::ClusteredRoots {
            first,
            second,
            distance,
        });
    }
    let z = roots.roots();
    let c = z
        .iter()
        .enumerate()
        .map(|(j, &lj)| {
            z.iter()
                .enumerate()
                .filter(|&(l, _)| l != j)
                .fold(one(), |acc, (_, &ll)| {
                    acc * lj * (one() - ll * ll) / ((lj - ll) * (one() - lj * ll))
                })
        })
        .collect();
    Ok(ResidueSet { c })
}

/// Evaluates `A` for stationary roots and `S ≥ 0`.
///
/// Distinct roots go through the residue formula; if any pair lies within
/// [`DEFAULT_CLUSTER_TOL`], evaluation falls through to
/// [`limit_a_confluent`].
pub fn limit_a(roots: &RootMultiset, s: u64) -> Result<EvalResult> {
    limit_a_with(roots, s, DEFAULT_CLUSTER_TOL)
}

pub fn limit_a_with(roots: &RootMultiset, s: u64, cluster_tol: f64) -> Result<EvalResult> {
    roots.validate(0.0)?;
    if first_close_pair(roots, cluster_tol).is_some() {
        return limit_a_confluent(roots, s, cluster_tol);
    }
    let residues = residue_coefficients_with(roots, cluster_tol)?;
    let exp = exponent(s)?;
    let terms: Vec<Complex64> = roots
        .roots()
        .iter()
        .zip(&residues.c)
        .map(|(l, c)| l.powu(exp) * c)
        .collect();
    let value = match conjugate_partners(roots.roots()) {
        Some(partner) => Complex64::new(symmetric_sum(&terms, &partner), 0.0),
        None => terms.iter().sum(),
    };
    EvalResult::new(value, Method::DistinctResidues).certify_real(roots)
}

/// Real sum of terms indexed by a conjugate-closed root set.
///
/// Conjugate roots have conjugate terms, so the imaginary parts of a pair
/// cancel exactly and a real root's term is real. Summing the raw terms
/// instead leaves an imaginary residue of order `ε·Σ|term|`, which near the
/// cluster threshold (terms of order `1/δ`) is far above the realness tolerance.
fn symmetric_sum(terms: &[Complex64], partner: &[usize]) -> f64 {
    let mut total = 0.0;
    for (j, t) in terms.iter().enumerate() {
        let p = partner[j];
        if p == j {
            total += t.re;
        } else if j < p {
            total += t.re + terms[p].re;
        }
    }
    total
}

/// Evaluates `A` as the limit of the distinct-root formula when roots
/// coalesce, by extracting the `t^S` Laurent coefficient of the product form.
pub fn limit_a_confluent(roots: &RootMultiset, s: u64, cluster_tol: f64) -> Result<EvalResult> {
    roots.validate(0.0)?;
    let points = default_contour_points(roots, s);
    let value = laurent_coefficient(roots, s, points)?;
    let mut out = EvalResult::new(value, Method::Confluent);
    out.clusters = Some(cluster_roots(roots, cluster_tol));
    out.certify_real(roots)
}

pub(crate) fn exponent(s: u64) -> Result<u32> {
    u32::try_from(s).map_err(|_| Error::InvalidArgument(format!("S = {s} is too large")))
}

/// Inner and outer radius of the convergence annulus of `F`.
pub fn annulus(roots: &RootMultiset) -> (f64, f64) {
    let m = roots.max_modulus();
    (m, if m == 0.0 { f64::INFINITY } else { 1.0 / m })
}

/// Product form of the Laurent generating function `F(t)`.
pub fn f_eval(roots: &RootMultiset, t: Complex64) -> Result<Complex64> {
    roots.validate(0.0)?;
    let (inner, outer) = annulus(roots);
    let r = t.norm();
    if !(r > inner && r < outer) || r == 0.0 {
        return Err(Error::OutsideAnnulus {
            t: format!("{t}"),
            inner,
            outer,
        });
    }
    Ok(f_product(roots.roots(), t))
}

fn f_product(roots: &[Complex64], t: Complex64) -> Complex64 {
    roots.iter().fold(one(), |acc, &l| {
        let q = l / t;
        acc * ((one() - t * l).inv() + q / (one() - q))
    })
}

/// Contour radius: the geometric mean of the annulus radii `max|λ|` and
/// `1/max|λ|`, which is the unit circle. Both pole families are then a factor
/// `1/max|λ|` away.
pub fn contour_radius(_roots: &RootMultiset) -> f64 {
    1.0
}

/// Number of trapezoid nodes that pushes aliasing below double precision.
///
/// On the unit circle the aliased coefficients `B_{S±N}` decay like
/// `max|λ|^{N − S}`; the `6k` term absorbs the polynomial growth of
/// coefficients from repeated roots.
pub fn default_contour_points(roots: &RootMultiset, s: u64) -> usize {
    let floor = 2 * (s as usize + 8);
    let m = roots.max_modulus().max(1e-3);
    let digits = 37.0 + 6.0 * roots.len() as f64;
    let needed = (digits / -m.ln()).ceil() as usize + s as usize;
    needed.clamp(floor, 1 << 22)
}

/// Trapezoid-rule Laurent coefficient
/// `(1/N) Σ_q F(r ω^q) (r ω^q)^{−S}` with `ω = e^{2πi/N}`.
pub(crate) fn laurent_coefficient(roots: &RootMultiset, s: u64, points: usize) -> Result<Complex64> {
    if points == 0 {
        return Err(Error::InvalidArgument("contour needs at least one point".into()));
    }
    let exp = exponent(s)?;
    let r = contour_radius(roots);
    let z = roots.roots();
    let total = pairwise_sum_by(points, |q| {
        let t = Complex64::from_polar(r, 2.0 * PI * q as f64 / points as f64);
        f_product(z, t) * t.inv().powu(exp)
    });
    Ok(total / points as f64)
}
