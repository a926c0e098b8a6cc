//! Small exact-arithmetic helpers shared by every module.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Row `C(n, 0), …, C(n, n)` of Pascal's triangle.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// Signed variant of [`binomial_row`].
pub fn binomial_row_int(n: usize) -> Vec<BigInt> {
    binomial_row(n).into_iter().map(BigInt::from).collect()
}

pub fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

pub fn pow2_int(k: usize) -> BigInt {
    BigInt::one() << k
}

/// `1 / 2^k` as a rational.
pub fn inv_pow2(k: usize) -> BigRational {
    BigRational::new(BigInt::one(), pow2_int(k))
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn ratio_of(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Exponents `λ₁ > λ₂ > … > λ_s` of the binary expansion `n = Σ 2^{λ_j}`.
pub fn binary_powers(n: &BigUint) -> Vec<usize> {
    let bits = n.bits() as usize;
    (0..bits).rev().filter(|&i| n.bit(i as u64)).collect()
}

/// `⌊log₂ n⌋` for `n ≥ 1`.
pub fn floor_log2(n: &BigUint) -> Option<usize> {
    if n.is_zero() {
        None
    } else {
        Some(n.bits() as usize - 1)
    }
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: &BigUint) -> Option<usize> {
    let l = floor_log2(n)?;
    Some(if n.count_ones() == 1 { l } else { l + 1 })
}

/// `log₂ n − ⌊log₂ n⌋ ∈ [0, 1)`, from the leading 64 bits of `n`.
pub fn frac_log2(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return 0.0;
    }
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_u64().unwrap_or(u64::MAX);
    let mantissa = top as f64 / 2f64.powi((bits - shift - 1) as i32);
    let f = mantissa.log2();
    if f >= 1.0 {
        f - 1.0
    } else {
        f.max(0.0)
    }
}

/// `log₂ n` in double precision.
pub fn log2_f64(n: &BigUint) -> f64 {
    match floor_log2(n) {
        None => f64::NEG_INFINITY,
        Some(l) => l as f64 + frac_log2(n),
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(r: &BigRational) -> BigRational {
    if r < &BigRational::zero() {
        -r.clone()
    } else {
        r.clone()
    }
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a real with 12 significant digits, `%g` style.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(&s)
    } else {
        let s = format!("{x:.11e}");
        match s.split_once('e') {
            Some((m, e)) => format!("{}e{}", trim_zeros(m), e),
            None => s,
        }
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `"p/q (decimal)"` as used for single-value CLI output.
pub fn fmt_exact(r: &BigRational) -> String {
    format!("{} ({})", fmt_rational(r), fmt_sig12(to_f64(r)))
}
