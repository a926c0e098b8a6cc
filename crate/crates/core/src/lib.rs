//! Exact and asymptotic computations for the binary sum-of-digits function
//! `X_n = ν₂(U)` of an integer `U` drawn uniformly from `{0, …, n−1}`.
//!
//! Laws, moments and distances are exact rationals. Floats appear only for
//! transcendental quantities such as logarithms and Gaussian constants.
//!
//! ```
//! use digitsum::{dtv_exact, binomial_pmf, pmf_mixture};
//! use num_bigint::BigUint;
//!
//! let p = pmf_mixture(&BigUint::from(12u32)).unwrap();
//! let d = dtv_exact(&p, &binomial_pmf(3));
//! assert_eq!(d.to_string(), "1/12");
//! ```

pub mod acceptance;
pub mod arith;
pub mod bigfloat;
pub mod digits;
pub mod dist;
mod error;
pub mod expansion;
pub mod figures;
pub mod krawtchouk;
pub mod numeration;
pub mod parse;
pub mod periodic;
pub mod poly;
pub mod quadrature;
pub mod stein;
pub mod sweep;

pub use error::{Error, Result};

pub use digits::{
    digit_expansion, digit_sum_total, legendre_valuation, mean_exact, nu, Base, DigitExpansion,
};
pub use dist::{
    binomial_pmf, chi2_exact, dtv_exact, kl_divergence, kolmogorov_exact, moment_exact,
    pgf_closed_form, pmf_bruteforce, pmf_mixture, BinomialMixture, ExactPmf,
};
pub use expansion::{
    a_coeffs, approximant_pmf, delta_binomial, dtv_asymptotic, hermite_constant, l1_residual,
    gap_ratio, ExpansionCoeffs, ResidualRange, SignedMeasure,
};
pub use krawtchouk::{
    chi2_upper_bound, expansion_coeffs, krawtchouk_table, parseval_check, KrawtchoukFamily,
};
pub use numeration::{code_pmf, gray_weight, transcomplement_weight, CodingSystem};
pub use periodic::{
    f1_eval, f2corr_eval, f_eval, f_zeros, takagi_g, takagi_h, variance_fluctuation, DyadicPoint,
    PeriodicValue,
};
pub use stein::{
    dtv_via_stein, g_uniform_bound, stein_mean_correction, stein_residual, stein_solve,
    SteinSolution,
};
