//! Refined binomial approximants: the coefficients `a_r(n)` and the measures
//! `Σ_{r<m} (−1)^r a_r(n) 2^{−λ} Δ^r C(λ, k)` built from them.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{binary_powers, binomial, binomial_row_int, floor_log2, pow2, pow2_int, rat_int};
use crate::dist::{dtv_to_binomial, mixture_counts, scaled_factorial_moments, ExactPmf};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadrature::hermite_abs_mean;

/// `a_0(n), …, a_m(n)`: Taylor coefficients at `y = 1` of
/// `E(y^{X_n}) · ((1+y)/2)^{−λ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionCoeffs {
    pub n: BigUint,
    pub coeffs: Vec<BigRational>,
}

impl ExpansionCoeffs {
    pub fn get(&self, r: usize) -> Option<&BigRational> {
        self.coeffs.get(r)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn lambda_of(n: &BigUint) -> Result<usize> {
    floor_log2(n).ok_or(Error::EmptyDistribution)
}

/// Route one: shift `n·E(y^{X_n})` to `y = 1 + u` and divide by `(1 + u/2)^λ`.
pub fn a_coeffs_taylor(n: &BigUint, m: usize) -> Result<Vec<BigRational>> {
    let lambda = lambda_of(n)?;
    let counts = mixture_counts(n);
    let q = Poly::from_ints(counts.into_iter().map(BigInt::from));
    let shifted = q.taylor_shift(&BigRational::one());
    let half = BigRational::new(1.into(), 2.into());
    let den = Poly::binomial_power(&BigRational::one(), &half, lambda).truncate(m + 1);
    let inv_n = BigRational::new(1.into(), BigInt::from(n.clone()));
    Ok(shifted
        .series_div(&den, m + 1)?
        .into_iter()
        .map(|c| c * &inv_n)
        .collect())
}

/// Route two: the explicit double sum over the blocks `j` and `ℓ ≤ r`.
pub fn a_coeffs_explicit(n: &BigUint, m: usize) -> Result<Vec<BigRational>> {
    let lambda = lambda_of(n)?;
    let powers = binary_powers(n);
    let nn = BigInt::from(n.clone());
    let mut out = Vec::with_capacity(m + 1);
    for r in 0..=m {
        // Common denominator n·2^r: the ℓ-term carries 2^{−ℓ}, the prefactor 2^{λ_j}/n.
        let mut num = BigInt::zero();
        for (idx, &lj) in powers.iter().enumerate() {
            let d = (lambda - lj) as u64;
            let mut inner = BigInt::zero();
            for ell in 0..=r {
                let grow = if d == 0 {
                    if ell == 0 {
                        BigUint::one()
                    } else {
                        BigUint::zero()
                    }
                } else {
                    binomial(d + ell as u64 - 1, ell as i64)
                };
                let pick = binomial(idx as u64, (r - ell) as i64);
                let t = BigInt::from(grow * pick) << (r - ell);
                if ell % 2 == 0 {
                    inner += t;
                } else {
                    inner -= t;
                }
            }
            num += inner * pow2_int(lj);
        }
        out.push(BigRational::new(num, &nn << r));
    }
    Ok(out)
}

/// Route three: from the factorial moments `E(X_n)_ℓ`.
pub fn a_coeffs_factorial(n: &BigUint, m: usize) -> Result<Vec<BigRational>> {
    let lambda = lambda_of(n)? as i64;
    let fm = scaled_factorial_moments(n, m);
    let nn = BigInt::from(n.clone());
    let mut out = Vec::with_capacity(m + 1);
    for r in 0..=m {
        let mut acc = BigRational::zero();
        let mut fact = BigInt::one();
        #[allow(clippy::needless_range_loop)]
        for ell in 0..=r {
            if ell > 0 {
                fact *= ell;
            }
            let k = (r - ell) as i64;
            // C(λ + k − 1, k), equal to 1 at k = 0 even when λ = 0.
            let grow = if k == 0 {
                BigUint::one()
            } else if lambda + k - 1 < 0 {
                BigUint::zero()
            } else {
                binomial((lambda + k - 1) as u64, k)
            };
            let moment = BigRational::new(BigInt::from(fm[ell].clone()), &nn << ell);
            let t = BigRational::new(BigInt::from(grow), &fact << (k as usize)) * moment;
            if k % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// `a_0(n), …, a_m(n)`, computed by two independent routes that must agree.
pub fn a_coeffs(n: &BigUint, m: usize) -> Result<ExpansionCoeffs> {
    let taylor = a_coeffs_taylor(n, m)?;
    let explicit = a_coeffs_explicit(n, m)?;
    if let Some(r) = (0..=m).find(|&r| taylor[r] != explicit[r]) {
        return Err(Error::RouteMismatch(format!(
            "a_{r}({n}): Taylor {} vs explicit {}",
            taylor[r], explicit[r]
        )));
    }
    Ok(ExpansionCoeffs {
        n: n.clone(),
        coeffs: taylor,
    })
}

/// `Δ^r C(λ, k) = Σ_ℓ C(r, ℓ)(−1)^ℓ C(λ, k − ℓ)`.
pub fn delta_binomial(lambda: u64, r: u64, k: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for ell in 0..=r {
        let t = BigInt::from(binomial(r, ell as i64) * binomial(lambda, k - ell as i64));
        if ell % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// The row `Δ^r C(λ, k)` for `k = 0..=λ+r`.
pub fn delta_row(lambda: usize, r: usize) -> Vec<BigInt> {
    let mut row = binomial_row_int(lambda);
    for _ in 0..r {
        let mut next = row.clone();
        next.push(BigInt::zero());
        for k in 1..next.len() {
            next[k] -= &row[k - 1];
        }
        row = next;
    }
    row
}

/// A finitely supported signed measure with rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMeasure {
    offset: i64,
    weights: Vec<BigRational>,
}

impl SignedMeasure {
    pub fn new(offset: i64, weights: Vec<BigRational>) -> Self {
        SignedMeasure { offset, weights }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn weight(&self, k: i64) -> BigRational {
        let i = k - self.offset;
        if i < 0 {
            return BigRational::zero();
        }
        self.weights
            .get(i as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.weights.iter().sum()
    }

    /// Inclusive window `(lo, hi)` of stored weights.
    pub fn window(&self) -> (i64, i64) {
        (self.offset, self.offset + self.weights.len() as i64 - 1)
    }
}

impl From<&ExactPmf> for SignedMeasure {
    fn from(p: &ExactPmf) -> Self {
        SignedMeasure::new(p.offset(), p.masses().to_vec())
    }
}

/// `Σ_{r<m} (−1)^r a_r(n) 2^{−λ} Δ^r C(λ, k)` on `k = 0..=λ+m−1`.
pub fn approximant_pmf(n: &BigUint, m: usize) -> Result<SignedMeasure> {
    if m == 0 {
        return Err(Error::Contract("approximant order m must be at least 1".into()));
    }
    let lambda = lambda_of(n)?;
    let a = a_coeffs(n, m - 1)?;
    Ok(approximant_from(&a.coeffs, lambda, m))
}

pub(crate) fn approximant_from(a: &[BigRational], lambda: usize, m: usize) -> SignedMeasure {
    let len = lambda + m;
    let mut weights = vec![BigRational::zero(); len];
    let scale = BigRational::new(1.into(), pow2_int(lambda));
    for (r, ar) in a.iter().enumerate().take(m) {
        if ar.is_zero() {
            continue;
        }
        let c = if r % 2 == 0 { ar * &scale } else { -(ar * &scale) };
        for (k, d) in delta_row(lambda, r).into_iter().enumerate() {
            weights[k] += &c * BigRational::from_integer(d);
        }
    }
    SignedMeasure::new(0, weights)
}

/// Which `k` the residual sums over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidualRange {
    /// `0 ≤ k ≤ λ`.
    Support,
    /// Every `k` where either measure is nonzero.
    Full,
}

/// `Σ_k |P(X_n = k) − approximant(k)|` over the chosen range.
pub fn l1_residual(n: &BigUint, m: usize, range: ResidualRange) -> Result<BigRational> {
    let lambda = lambda_of(n)?;
    let approx = approximant_pmf(n, m)?;
    Ok(l1_against_counts(n, lambda, &approx, range))
}

pub(crate) fn l1_against_counts(
    n: &BigUint,
    lambda: usize,
    approx: &SignedMeasure,
    range: ResidualRange,
) -> BigRational {
    let counts = mixture_counts(n);
    let inv_n = BigRational::new(1.into(), BigInt::from(n.clone()));
    let hi = match range {
        ResidualRange::Support => lambda as i64,
        ResidualRange::Full => approx.window().1.max(lambda as i64),
    };
    let mut acc = BigRational::zero();
    for k in 0..=hi {
        let p = counts
            .get(k as usize)
            .map(|c| BigRational::from_integer(c.clone().into()) * &inv_n)
            .unwrap_or_else(BigRational::zero);
        acc += (p - approx.weight(k)).abs();
    }
    acc
}

/// `Σ_{0≤k≤λ} |Δ^r C(λ, k)|`.
pub fn abs_delta_sum(lambda: usize, r: usize) -> BigUint {
    delta_row(lambda, r)
        .into_iter()
        .take(lambda + 1)
        .map(|d| d.abs().to_biguint().expect("absolute value"))
        .sum()
}

/// `2·C(λ, ⌊λ/2⌋) − 1`, the value of `abs_delta_sum(λ, 1)`.
pub fn abs_delta1_closed(lambda: usize) -> BigUint {
    binomial(lambda as u64, (lambda / 2) as i64) * 2u32 - 1u32
}

/// `2^{−λ} λ^{r/2} Σ_{0≤k≤λ} |Δ^r C(λ, k)|`, which tends to `h_r`.
pub fn scaled_delta_sum(lambda: usize, r: usize) -> f64 {
    let s = BigRational::new(abs_delta_sum(lambda, r).into(), pow2(lambda).into());
    s.to_f64().unwrap_or(f64::NAN) * (lambda as f64).powf(r as f64 / 2.0)
}

/// `h_m = (2^m/√(2π)) ∫ |He_m(x)| e^{−x²/2} dx`, normalised so that
/// `2^{−λ} Σ_k |Δ^m C(λ, k)| ~ h_m λ^{−m/2}`.
pub fn hermite_constant(m: usize) -> Result<f64> {
    Ok(2f64.powi(m as i32) * hermite_abs_mean(m)?)
}

/// `√2 |a_1(n)| / √(πλ)`.
pub fn dtv_asymptotic(n: &BigUint) -> Result<f64> {
    let lambda = lambda_of(n)?;
    if lambda == 0 {
        return Err(Error::Degenerate("n = 1 has λ = 0".into()));
    }
    let a1 = a_coeffs_explicit(n, 1)?.swap_remove(1);
    Ok(main_term(&a1, lambda as f64))
}

/// The same main term with `log₂ n` in place of `λ`.
pub fn dtv_asymptotic_log2(n: &BigUint) -> Result<f64> {
    let lambda = lambda_of(n)?;
    if lambda == 0 {
        return Err(Error::Degenerate("n = 1 has λ = 0".into()));
    }
    let a1 = a_coeffs_explicit(n, 1)?.swap_remove(1);
    Ok(main_term(&a1, crate::arith::log2_f64(n)))
}

pub(crate) fn main_term(a1: &BigRational, denom: f64) -> f64 {
    let a = a1.abs().to_f64().unwrap_or(f64::NAN);
    std::f64::consts::SQRT_2 * a / (std::f64::consts::PI * denom).sqrt()
}

/// `λ − λ₂`, or `None` for a power of two.
pub fn leading_gap(n: &BigUint) -> Option<usize> {
    let p = binary_powers(n);
    (p.len() >= 2).then(|| p[0] - p[1])
}

/// `2^{−(λ−λ₂)} · min{1, (λ−λ₂)/√λ}`.
pub fn gap_comparator(n: &BigUint) -> Result<f64> {
    let lambda = lambda_of(n)?;
    let d = leading_gap(n).ok_or_else(|| {
        Error::UndefinedComparator(format!("{n} is a power of two, so λ₂ does not exist"))
    })?;
    Ok(2f64.powi(-(d as i32)) * (d as f64 / (lambda as f64).sqrt()).min(1.0))
}

/// `dtv(L(X_n), Bi(λ))` divided by [`gap_comparator`].
pub fn gap_ratio(n: &BigUint) -> Result<f64> {
    let comp = gap_comparator(n)?;
    let d = dtv_to_binomial(n)?;
    Ok(d.to_f64().unwrap_or(f64::NAN) / comp)
}

/// Absolute value of a rational as `f64`, a convenience for sweep output.
pub fn abs_f64(r: &BigRational) -> f64 {
    r.abs().to_f64().unwrap_or(f64::NAN)
}

/// `k`-th coefficient as integer times `n`, used when `a_r(n)·n` is needed.
pub fn scaled_coeff(a: &ExpansionCoeffs, r: usize) -> BigRational {
    &a.coeffs[r] * rat_int(BigInt::from(a.n.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::digits::mean_exact;
    use crate::dist::{binomial_pmf, dtv_exact, pmf_mixture};
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn coefficients_of_twelve() {
        let a = a_coeffs(&big(12), 2).unwrap();
        assert_eq!(a.coeffs, vec![rat(1, 1), rat(1, 6), rat(-1, 12)]);
        assert_eq!(a_coeffs(&big(3), 1).unwrap().coeffs[1], rat(1, 6));
        let p = a_coeffs(&big(1 << 9), 5).unwrap();
        assert!(p.coeffs[1..].iter().all(Zero::is_zero));
        assert_eq!(a_coeffs_factorial(&big(12), 2).unwrap(), a.coeffs);
        // n = 1 is the point mass at zero, itself a degenerate binomial.
        assert_eq!(a_coeffs(&big(1), 3).unwrap().coeffs[1..], [rat(0, 1), rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn differences() {
        assert_eq!(delta_binomial(3, 1, 1), BigInt::from(2));
        assert_eq!(delta_binomial(3, 1, 3), BigInt::from(-2));
        assert_eq!(delta_binomial(5, 0, 2), BigInt::from(10));
        for lambda in 0..12u64 {
            for r in 0..5u64 {
                let row = delta_row(lambda as usize, r as usize);
                for (k, d) in row.iter().enumerate() {
                    assert_eq!(d, &delta_binomial(lambda, r, k as i64));
                }
                assert!(delta_binomial(lambda, r, lambda as i64 + r as i64 + 1).is_zero());
            }
        }
    }

    #[test]
    fn approximants() {
        let one = approximant_pmf(&big(12), 1).unwrap();
        assert_eq!(one, SignedMeasure::from(&binomial_pmf(3)));
        let two = approximant_pmf(&big(12), 2).unwrap();
        let expect: Vec<_> = [5, 16, 18, 8, 1].iter().map(|&v| rat(v, 48)).collect();
        assert_eq!(two.weights(), expect.as_slice());
        assert!(two.total().is_one());
        for m in 1..4 {
            let p = approximant_pmf(&big(64), m).unwrap();
            for k in 0..=9 {
                assert_eq!(p.weight(k), binomial_pmf(6).mass(k));
            }
        }
        assert!(approximant_pmf(&big(12), 0).is_err());
    }

    #[test]
    fn residuals() {
        assert_eq!(l1_residual(&big(12), 1, ResidualRange::Support).unwrap(), rat(1, 6));
        assert_eq!(l1_residual(&big(12), 2, ResidualRange::Support).unwrap(), rat(1, 16));
        // Full range adds the leaked mass at k = 4.
        assert_eq!(l1_residual(&big(12), 2, ResidualRange::Full).unwrap(), rat(1, 12));
        for m in 1..4 {
            assert!(l1_residual(&big(1 << 7), m, ResidualRange::Full).unwrap().is_zero());
        }
    }

    #[test]
    fn closed_form_delta_sum() {
        for lambda in 0..=60 {
            assert_eq!(abs_delta_sum(lambda, 1), abs_delta1_closed(lambda), "λ={lambda}");
        }
    }

    #[test]
    fn hermite_values() {
        use std::f64::consts::{E, PI};
        assert!((hermite_constant(0).unwrap() - 1.0).abs() < 1e-12);
        let h1 = 2.0 * (2.0 / PI).sqrt();
        assert!((hermite_constant(1).unwrap() - h1).abs() < 1e-10 * h1);
        let h2 = 16.0 / (2.0 * PI * E).sqrt();
        assert!((hermite_constant(2).unwrap() - h2).abs() < 1e-10 * h2);
    }

    #[test]
    fn main_terms() {
        let v = dtv_asymptotic(&big(12)).unwrap();
        let expect = std::f64::consts::SQRT_2 / 6.0 / (3.0 * std::f64::consts::PI).sqrt();
        assert!((v - expect).abs() < 1e-15 && (v - 0.07678).abs() < 1e-5, "{v}");
        let v3 = dtv_asymptotic(&big(3)).unwrap();
        let expect = std::f64::consts::SQRT_2 / 6.0 / std::f64::consts::PI.sqrt();
        assert!((v3 - expect).abs() < 1e-15);
        assert_eq!(dtv_asymptotic(&big(1 << 12)).unwrap(), 0.0);
    }

    #[test]
    fn comparator() {
        let r = gap_ratio(&big(12)).unwrap();
        assert!((r - 1.0 / 12.0 / (0.5 / 3f64.sqrt())).abs() < 1e-12);
        assert!(matches!(gap_ratio(&big(1 << 5)), Err(Error::UndefinedComparator(_))));
        let r = gap_ratio(&big((1 << 20) + 1)).unwrap();
        assert!(r.is_finite() && r > 0.0);
    }

    #[test]
    fn first_coefficient_is_mean_gap() {
        for n in 1..2000u64 {
            let a1 = a_coeffs(&big(n), 1).unwrap().coeffs[1].clone();
            let lambda = floor_log2(&big(n)).unwrap();
            assert_eq!(a1, mean_exact(&big(n), 2).unwrap() - rat(lambda as i64, 2));
        }
    }

    #[test]
    fn m1_residual_is_twice_dtv() {
        for n in [5u64, 12, 100, 1001] {
            let lambda = floor_log2(&big(n)).unwrap();
            let d = dtv_exact(&pmf_mixture(&big(n)).unwrap(), &binomial_pmf(lambda));
            let full = l1_residual(&big(n), 1, ResidualRange::Full).unwrap();
            assert_eq!(full, d * rat(2, 1));
        }
    }

    proptest! {
        #[test]
        fn routes_and_scaling(n in 1u64..1_000_000, m in 0usize..7) {
            let a = a_coeffs(&big(n), m).unwrap();
            prop_assert_eq!(&a_coeffs(&big(2 * n), m).unwrap().coeffs, &a.coeffs);
            prop_assert_eq!(&a_coeffs_factorial(&big(n), m).unwrap(), &a.coeffs);
            prop_assert!(a.coeffs[0].is_one());
            let lambda = floor_log2(&big(n)).unwrap();
            for r in 1..=m {
                let lhs = a.coeffs[r].abs() * rat_int(n) / rat_int(pow2_int(lambda));
                let rhs = rat(3 * (1 << (r - 1)), 1);
                prop_assert!(lhs <= rhs);
            }
        }
    }
}
