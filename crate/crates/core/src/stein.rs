//! Stein's method for `Bi(λ, 1/2)`: the exact solution of the Stein
//! recurrence, its bounds, and the first-order mean correction.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{binary_powers, binomial, binomial_row_int, floor_log2, pow2_int, rat, rat_int};
use crate::dist::{binomial_pmf, pmf_mixture};
use crate::error::{Error, Result};
use crate::expansion::a_coeffs_explicit;

/// Solution of `(λ−m) g(m) − m g(m−1) = h(m) − E h(Y_λ)` on `m = 0..λ−1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinSolution {
    pub lambda: usize,
    pub h: Vec<BigRational>,
    pub g: Vec<BigRational>,
    pub eh: BigRational,
}

fn expectation(lambda: usize, h: &[BigRational]) -> BigRational {
    let row = binomial_row_int(lambda);
    let s: BigRational = row
        .iter()
        .zip(h)
        .map(|(c, v)| BigRational::from_integer(c.clone()) * v)
        .sum();
    s / BigRational::from_integer(pow2_int(lambda))
}

fn check_table(lambda: usize, h: &[BigRational]) -> Result<()> {
    if lambda == 0 {
        return Err(Error::Degenerate("Stein equation needs λ ≥ 1".into()));
    }
    if h.len() != lambda + 1 {
        return Err(Error::Contract(format!(
            "h must be tabulated on 0..={lambda}, got {} values",
            h.len()
        )));
    }
    Ok(())
}

/// `g(m) = Σ_{r≤m} C(λ,r)(h(r) − Eh) / ((λ−m) C(λ,m))`.
pub fn stein_solve(lambda: usize, h: &[BigRational]) -> Result<SteinSolution> {
    check_table(lambda, h)?;
    let eh = expectation(lambda, h);
    let row = binomial_row_int(lambda);
    let mut prefix = BigRational::zero();
    let mut g = Vec::with_capacity(lambda);
    for m in 0..lambda {
        prefix += BigRational::from_integer(row[m].clone()) * (&h[m] - &eh);
        let den = BigInt::from(lambda - m) * &row[m];
        g.push(&prefix / BigRational::from_integer(den));
    }
    Ok(SteinSolution {
        lambda,
        h: h.to_vec(),
        g,
        eh,
    })
}

/// The negated suffix-sum form of the same solution.
pub fn stein_solve_suffix(lambda: usize, h: &[BigRational]) -> Result<Vec<BigRational>> {
    check_table(lambda, h)?;
    let eh = expectation(lambda, h);
    let row = binomial_row_int(lambda);
    let mut suffix = BigRational::zero();
    let mut g = vec![BigRational::zero(); lambda];
    for m in (0..lambda).rev() {
        suffix += BigRational::from_integer(row[m + 1].clone()) * (&h[m + 1] - &eh);
        let den = BigInt::from(lambda - m) * &row[m];
        g[m] = -(&suffix / BigRational::from_integer(den));
    }
    Ok(g)
}

/// `max_{1≤m≤λ−1} |(λ−m) g(m) − m g(m−1) − (h(m) − Eh)|`.
pub fn stein_residual(sol: &SteinSolution) -> BigRational {
    residual_with(sol, |lm, m, g0, g1| rat_int(lm as i64) * g1 - rat_int(m as i64) * g0)
}

/// The same residual for `(m−λ) g(m) + m g(m−1)`, the opposite orientation.
pub fn stein_residual_flipped(sol: &SteinSolution) -> BigRational {
    residual_with(sol, |lm, m, g0, g1| rat_int(m as i64) * g0 - rat_int(lm as i64) * g1)
}

fn residual_with(
    sol: &SteinSolution,
    lhs: impl Fn(usize, usize, &BigRational, &BigRational) -> BigRational,
) -> BigRational {
    let mut worst = BigRational::zero();
    for m in 1..sol.lambda {
        let r = (lhs(sol.lambda - m, m, &sol.g[m - 1], &sol.g[m]) - (&sol.h[m] - &sol.eh)).abs();
        if r > worst {
            worst = r;
        }
    }
    worst
}

/// `2^λ / (⌊λ/2⌋ C(λ, ⌊λ/2⌋))`; for `λ = 1` the sharp value `1/2`.
pub fn g_uniform_bound(lambda: usize) -> Result<BigRational> {
    match lambda {
        0 => Err(Error::Degenerate("Stein equation needs λ ≥ 1".into())),
        // g(0) = h(0) − Eh with Eh = (h(0) + h(1))/2, so |g(0)| ≤ 1/2.
        1 => Ok(rat(1, 2)),
        _ => {
            let half = lambda / 2;
            let den = BigInt::from(binomial(lambda as u64, half as i64)) * half;
            Ok(BigRational::new(pow2_int(lambda), den))
        }
    }
}

pub fn max_abs_g(sol: &SteinSolution) -> BigRational {
    sol.g.iter().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero)
}

/// Checks `|g(j) − g(j−1)| ≤ 2 min{1/j, 1/(λ−j)}` for `1 ≤ j ≤ λ−1`;
/// returns the first violating `j`.
pub fn increment_violation(sol: &SteinSolution) -> Option<usize> {
    (1..sol.lambda).find(|&j| {
        let step = (&sol.g[j] - &sol.g[j - 1]).abs();
        let cap = rat(2, j.max(sol.lambda - j) as i64);
        step > cap
    })
}

/// `E h(X_n) − E h(Y_λ)` beside `4 a₁(n) E(h(Y_λ)(λ/2 − Y_λ)/λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanCorrection {
    pub lhs: BigRational,
    pub leading: BigRational,
}

impl MeanCorrection {
    pub fn difference(&self) -> BigRational {
        &self.lhs - &self.leading
    }

    /// `lhs + leading`. The exact differences track `−leading`, so this is
    /// the remainder that actually shrinks.
    pub fn flipped_difference(&self) -> BigRational {
        &self.lhs + &self.leading
    }
}

pub fn stein_mean_correction(n: &BigUint, h: &[BigRational]) -> Result<MeanCorrection> {
    let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)?;
    if h.len() != lambda + 1 {
        return Err(Error::Contract(format!("h must be tabulated on 0..={lambda}")));
    }
    if h.iter().any(|v| v.is_negative() || v > &BigRational::one()) {
        return Err(Error::Contract("h must take values in [0, 1]".into()));
    }
    let x = pmf_mixture(n)?;
    let y = binomial_pmf(lambda);
    let hv = |k: i64| h[k as usize].clone();
    let lhs = x.expect(hv) - y.expect(hv);
    let a1 = a_coeffs_explicit(n, 1)?.swap_remove(1);
    if lambda == 0 {
        return Ok(MeanCorrection {
            lhs,
            leading: BigRational::zero(),
        });
    }
    let centre = rat(lambda as i64, 2);
    let weighted = y.expect(|k| hv(k) * (&centre - rat_int(k)) / rat_int(lambda as i64));
    Ok(MeanCorrection {
        lhs,
        leading: rat(4, 1) * a1 * weighted,
    })
}

/// `(λ−λ₂)² 2^{−(λ−λ₂)} / λ`, the error scale of the mean correction.
pub fn mean_correction_scale(n: &BigUint) -> Option<f64> {
    let p = binary_powers(n);
    if p.len() < 2 || p[0] == 0 {
        return None;
    }
    let d = (p[0] - p[1]) as f64;
    Some(d * d * 2f64.powf(-d) / p[0] as f64)
}

/// `|a₁(n)| · E|Y_λ − λ/2| / (λ/2)`.
pub fn dtv_via_stein(n: &BigUint) -> Result<BigRational> {
    let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)?;
    if lambda == 0 {
        return Ok(BigRational::zero());
    }
    let a1 = a_coeffs_explicit(n, 1)?.swap_remove(1);
    let centre = rat(lambda as i64, 2);
    let spread = binomial_pmf(lambda).expect(|k| (rat_int(k) - &centre).abs());
    Ok(a1.abs() * spread / centre)
}

/// Indicator of `{k ≤ t}` on `0..=λ`.
pub fn half_line(lambda: usize, t: i64) -> Vec<BigRational> {
    (0..=lambda as i64)
        .map(|k| if k <= t { BigRational::one() } else { BigRational::zero() })
        .collect()
}
