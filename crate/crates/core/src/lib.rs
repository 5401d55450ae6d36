//! Asymptotic growth rate of the k-fold lattice sums that appear in moments of
//! AR(k) estimators.
//!
//! For stationary characteristic roots `λ_1..λ_k` and integer shifts
//! `s_1..s_k`,
//!
//! ```text
//! (1/n) Σ_{i_1..i_k = 1}^{n} λ_1^{|i_1−i_2−s_1|} ··· λ_k^{|i_k−i_1−s_k|}
//!     → Σ_j λ_j^{S+k−1} Π_{ℓ≠j} (1 − λ_ℓ²) / ((λ_j − λ_ℓ)(1 − λ_j λ_ℓ))
//! ```
//!
//! with `S = |s_1 + ... + s_k|`. [`limit::limit_a`] evaluates the right-hand
//! side (falling back to a contour extraction for repeated roots) and
//! [`oracles`] holds three independent brute-force routes to the same number.

pub mod error;
pub mod limit;
pub mod model;
pub mod oracles;
pub mod roots;
pub mod sim;
pub mod summation;

pub use error::{Error, Result};
pub use limit::{
    f_eval, limit_a, limit_a_confluent, limit_a_with, residue_coefficients, ResidueSet,
    DEFAULT_CLUSTER_TOL,
};
pub use model::{
    validate_roots, ArCoefficients, EvalResult, Method, RootCluster, RootMultiset, ShiftVector,
};
pub use num_complex::Complex64;
pub use oracles::{bs_truncated, contour_coefficient, direct_sum_s4, slope_estimate, SlopeEstimate};
pub use roots::{char_polynomial, is_stationary, solve_roots, MonicPolynomial, SolveOptions};
pub use sim::{lagged_cross_sum, rho_eval, simulate, sum_x, SeriesSample};
pub use summation::Parallelism;
