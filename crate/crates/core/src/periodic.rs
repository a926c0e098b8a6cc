//! Periodic fluctuation functions: the mean fluctuation `F`, Delange's `F₁`
//! with the Takagi-type `g` and `h`, the second-order function `F₂` and the
//! variance fluctuation.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{binary_powers, floor_log2, log2_f64, pow2_int, rat, rat_int};
use crate::bigfloat::exp2_frac_bits;
use crate::digits::{mean_exact, Base};
use crate::dist::moment_exact;
use crate::error::{Error, Result};

/// A point `x` where a 1-periodic function is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum DyadicPoint {
    /// `x = log₂ n`, so `2^{x} = n/2^λ` has a terminating binary expansion.
    Exact { n: BigUint },
    /// Arbitrary `x`; the binary expansion of `2^{x}` is taken to `bits` digits.
    Real { x: f64, bits: usize },
}

impl DyadicPoint {
    pub fn log2_of(n: impl Into<BigUint>) -> Self {
        DyadicPoint::Exact { n: n.into() }
    }

    pub fn real(x: f64, bits: usize) -> Self {
        DyadicPoint::Real { x, bits }
    }

    /// The offsets `0 = d₀ < d₁ < …` with `2^{{x}} = Σ 2^{−d_j}`, and the
    /// rational `2^{−{x}}` when it is exact.
    fn expansion(&self) -> Result<(Vec<usize>, Option<BigRational>, f64)> {
        match self {
            DyadicPoint::Exact { n } => {
                let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)?;
                let d = binary_powers(n).into_iter().map(|l| lambda - l).collect();
                let inv = BigRational::new(pow2_int(lambda), BigInt::from(n.clone()));
                let frac = log2_f64(n) - lambda as f64;
                Ok((d, Some(inv), frac))
            }
            DyadicPoint::Real { x, bits } => {
                if !x.is_finite() {
                    return Err(Error::Numeric(format!("{x} is not finite")));
                }
                let f = x - x.floor();
                if f == 0.0 {
                    return Ok((vec![0], Some(BigRational::one()), 0.0));
                }
                let digits = exp2_frac_bits(f, *bits)?;
                let mut d = vec![0];
                d.extend(
                    digits
                        .iter()
                        .enumerate()
                        .filter(|(_, &b)| b == 1)
                        .map(|(i, _)| i + 1),
                );
                Ok((d, None, f))
            }
        }
    }
}

/// An exact value, or a float with an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub enum PeriodicValue {
    Exact(BigRational),
    Real { value: f64, error_bound: f64 },
}

impl PeriodicValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            PeriodicValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            PeriodicValue::Real { value, .. } => *value,
        }
    }

    pub fn error_bound(&self) -> f64 {
        match self {
            PeriodicValue::Exact(_) => 0.0,
            PeriodicValue::Real { error_bound, .. } => *error_bound,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            PeriodicValue::Exact(r) => Some(r),
            PeriodicValue::Real { .. } => None,
        }
    }
}

/// Sums `2^{−{x}} Σ_j 2^{−d_j} term(j, d_j)` over a truncated expansion.
fn dyadic_sum(
    p: &DyadicPoint,
    term: impl Fn(i64, i64) -> BigRational,
    tail: impl Fn(usize) -> f64,
) -> Result<PeriodicValue> {
    let (d, inv, frac) = p.expansion()?;
    let mut sum = BigRational::zero();
    for (j, &dj) in d.iter().enumerate() {
        sum += term(j as i64, dj as i64) * BigRational::new(1.into(), pow2_int(dj));
    }
    match (inv, p) {
        (Some(inv), _) => Ok(PeriodicValue::Exact(sum * inv)),
        (None, DyadicPoint::Real { bits, .. }) => {
            let scale = 2f64.powf(-frac);
            let value = sum.to_f64().unwrap_or(f64::NAN) * scale;
            // The float product and the digits past `bits` are the only losses.
            let error_bound = scale * tail(*bits) + 4.0 * f64::EPSILON * value.abs();
            Ok(PeriodicValue::Real { value, error_bound })
        }
        (None, DyadicPoint::Exact { .. }) => unreachable!("exact points carry 2^{{-x}}"),
    }
}

/// Bound on `Σ_{d>J} 2^{−d} poly(d)` for a nonnegative polynomial majorant.
fn tail_sum(bits: usize, poly: impl Fn(f64) -> f64) -> f64 {
    (bits + 1..bits + 400)
        .map(|d| 2f64.powi(-(d as i32)) * poly(d as f64))
        .sum()
}

/// The mean fluctuation: `F(log₂ n) = E(X_n) − λ/2`, with `F(0) = 0`.
///
/// Uses `F(x) = 2^{−x} Σ_{j≥0} 2^{−d_j} (j − d_j/2)` for `2^{x} = Σ_j 2^{−d_j}`.
pub fn f_eval(p: &DyadicPoint) -> Result<PeriodicValue> {
    dyadic_sum(
        p,
        |j, d| rat(2 * j - d, 2),
        // j ≤ d, so each term is at most 1.5·d·2^{−d}.
        |bits| tail_sum(bits, |d| 1.5 * d + 1.0),
    )
}

/// `log₂ Σ_{0≤j≤k} 4^{−j}`, the `k`-th zero of `F` in `[0, 1)`.
pub fn f_zeros(k: usize) -> f64 {
    let n = f_zero_point(k);
    log2_f64(&n) - (2 * k) as f64
}

/// `n = Σ_{0≤j≤k} 4^{j}`, an integer with `F(log₂ n) = 0`.
pub fn f_zero_point(k: usize) -> BigUint {
    (0..=k).fold(BigUint::zero(), |acc, j| acc + (BigUint::one() << (2 * j)))
}

/// `h(x) = ∫_0^x (q{t} − {qt} − (q−1)/2) dt`, reduced mod 1.
pub fn takagi_h(x: &BigRational, q: u64) -> Result<BigRational> {
    Base::new(q)?;
    let x = x - x.floor();
    let qq = rat_int(q);
    let m = (&x * &qq).floor();
    Ok(&m * &x - &m * (&m + rat_int(1)) / (rat_int(2) * &qq) - rat_int(q - 1) * &x / rat_int(2))
}

/// `h` in double precision.
pub fn takagi_h_f64(x: f64, q: u64) -> f64 {
    let x = x - x.floor();
    let q = q as f64;
    let m = (q * x).floor();
    m * x - m * (m + 1.0) / (2.0 * q) - (q - 1.0) * x / 2.0
}

/// `sup |h| = ⌊q/2⌋⌈q/2⌉/(2q)`.
pub fn takagi_h_sup(q: u64) -> BigRational {
    BigRational::new(BigInt::from((q / 2) * q.div_ceil(2)), BigInt::from(2 * q))
}

/// `g(x) = Σ_{j<J} q^{−j} h(q^j x)` together with the truncation bound
/// `sup|h|·q^{1−J}/(q−1)`.
pub fn takagi_g(x: f64, q: u64, terms: usize) -> Result<(f64, f64)> {
    Base::new(q)?;
    if terms == 0 {
        return Err(Error::Contract("Takagi sum needs at least one term".into()));
    }
    let mut y = x - x.floor();
    let mut w = 1.0;
    let mut acc = 0.0;
    for _ in 0..terms {
        acc += w * takagi_h_f64(y, q);
        y = (y * q as f64).fract();
        w /= q as f64;
    }
    let sup = takagi_h_sup(q).to_f64().unwrap_or(0.0);
    let bound = sup * (q as f64).powi(1 - terms as i32) / (q as f64 - 1.0);
    Ok((acc, bound))
}

/// `g` at a rational point, exactly (terms past the period vanish for
/// rationals whose denominator divides a power of `q`).
pub fn takagi_g_exact(x: &BigRational, q: u64, terms: usize) -> Result<BigRational> {
    Base::new(q)?;
    let qq = rat_int(q);
    let mut y = x - x.floor();
    let mut w = BigRational::one();
    let mut acc = BigRational::zero();
    for _ in 0..terms {
        if y.is_zero() {
            break;
        }
        acc += &w * takagi_h(&y, q)?;
        y = &y * &qq;
        y = &y - y.floor();
        w /= &qq;
    }
    Ok(acc)
}

/// Delange's `F₁(x) = (q−1)/2 (1−{x}) + q^{1−{x}} g(q^{{x}−1})`, with `g`
/// truncated at `terms`; the returned bound covers the truncation.
pub fn f1_eval(x: f64, q: u64, terms: usize) -> Result<PeriodicValue> {
    let f = x - x.floor();
    let qf = q as f64;
    let (g, gb) = takagi_g(qf.powf(f - 1.0), q, terms)?;
    let scale = qf.powf(1.0 - f);
    let value = (qf - 1.0) / 2.0 * (1.0 - f) + scale * g;
    let error_bound = scale * gb + 16.0 * f64::EPSILON * (1.0 + value.abs());
    Ok(PeriodicValue::Real { value, error_bound })
}

/// `F₁(log_q n) + (q−1)/2 · log_q n`, which is rational:
/// `(q−1)(λ+1)/2 + (q^{λ+1}/n) g(n/q^{λ+1})`.
pub fn f1_shifted_exact(n: &BigUint, q: u64, terms: usize) -> Result<BigRational> {
    Base::new(q)?;
    if n.is_zero() {
        return Err(Error::EmptyDistribution);
    }
    let lambda = crate::digits::digit_expansion(n, q)?.lambda().expect("n ≥ 1");
    let top = BigInt::from(q).pow(lambda as u32 + 1);
    let nn = BigInt::from(n.clone());
    let g = takagi_g_exact(&BigRational::new(nn.clone(), top.clone()), q, terms)?;
    Ok(rat_int(((q - 1) * (lambda as u64 + 1)) as i64) / rat_int(2) + BigRational::new(top, nn) * g)
}

/// The printed second-order function
/// `2^{−x} Σ_{j≥0} 2^{−d_j}(d_j(d_j+5)/8 − j d_j/2 + j(j−3)/2 + 1)`, literally.
pub fn f2corr_eval(p: &DyadicPoint) -> Result<PeriodicValue> {
    dyadic_sum(
        p,
        |j, d| rat(d * (d + 5) - 4 * j * d + 4 * j * (j - 3) + 8, 8),
        |bits| tail_sum(bits, |d| 1.125 * d * d + 2.125 * d + 1.0),
    )
}

/// `F₂` from the literal formula beside the expansion coefficient `a₂(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondOrderReport {
    pub n: BigUint,
    pub literal: BigRational,
    pub a2: BigRational,
}

impl SecondOrderReport {
    pub fn agrees(&self) -> bool {
        self.literal.abs() == self.a2.abs()
    }
}

pub fn f2corr_report(n: &BigUint) -> Result<SecondOrderReport> {
    let literal = f2corr_eval(&DyadicPoint::Exact { n: n.clone() })?
        .exact()
        .cloned()
        .expect("exact point");
    let a2 = crate::expansion::a_coeffs(n, 2)?.coeffs.swap_remove(2);
    Ok(SecondOrderReport {
        n: n.clone(),
        literal,
        a2,
    })
}

/// `V(X_n) − λ/4`, exactly.
pub fn variance_fluctuation(n: &BigUint) -> Result<BigRational> {
    let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)?;
    if lambda == 0 {
        return Err(Error::Degenerate("variance fluctuation needs n ≥ 2".into()));
    }
    let mean = mean_exact(n, 2)?;
    let second = moment_exact(n, 2)?;
    Ok(second - &mean * &mean - BigRational::new(lambda.into(), 4.into()))
}

/// `V(X_n) − log₂(n)/4`.
pub fn variance_fluctuation_log2(n: &BigUint) -> Result<f64> {
    let v = variance_fluctuation(n)?;
    let lambda = floor_log2(n).expect("n ≥ 2") as f64;
    Ok(v.to_f64().unwrap_or(f64::NAN) - (log2_f64(n) - lambda) / 4.0)
}
