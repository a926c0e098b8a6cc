//! Base-q digits, digit sums and the closed forms for their totals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::binary_powers;
use crate::error::{Error, Result};

/// An integer base `q ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Base(u64);

impl Base {
    pub const BINARY: Base = Base(2);

    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidBase(q));
        }
        Ok(Base(q))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Base {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        Base::new(q)
    }
}

/// Digits of `n` in base `q`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitExpansion {
    n: BigUint,
    base: Base,
    digits: Vec<u64>,
    powers: Vec<usize>,
}

impl DigitExpansion {
    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// `ε₀, ε₁, …, ε_λ`; empty for `n = 0`.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// `⌊log_q n⌋`, or `None` for `n = 0`.
    pub fn lambda(&self) -> Option<usize> {
        self.digits.len().checked_sub(1)
    }

    /// For base 2, the exponents of the set bits in decreasing order.
    /// Empty for other bases.
    pub fn powers(&self) -> &[usize] {
        &self.powers
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

pub fn digit_expansion(n: &BigUint, q: u64) -> Result<DigitExpansion> {
    let base = Base::new(q)?;
    let digits = if q == 2 {
        (0..n.bits()).map(|i| n.bit(i) as u64).collect()
    } else {
        if n.is_zero() {
            Vec::new()
        } else {
            n.to_radix_le(q as u32)
                .into_iter()
                .map(u64::from)
                .collect::<Vec<_>>()
        }
    };
    let powers = if q == 2 { binary_powers(n) } else { Vec::new() };
    Ok(DigitExpansion {
        n: n.clone(),
        base,
        digits,
        powers,
    })
}

/// `ν_q(n)` for machine-sized arguments.
pub fn nu_u64(mut n: u64, q: u64) -> u64 {
    debug_assert!(q >= 2);
    if q == 2 {
        return n.count_ones() as u64;
    }
    let mut s = 0;
    while n > 0 {
        s += n % q;
        n /= q;
    }
    s
}

/// Sum of the base-`q` digits of `n`.
pub fn nu(n: &BigUint, q: u64) -> Result<u64> {
    Base::new(q)?;
    if q == 2 {
        return Ok(n.count_ones());
    }
    if let Some(v) = n.to_u64() {
        return Ok(nu_u64(v, q));
    }
    Ok(digit_expansion(n, q)?.digit_sum())
}

/// `Σ_{j≥1} ⌊n/q^j⌋`, the exponent of `q` in `n!` when `q` is prime.
pub fn legendre_valuation(n: &BigUint, q: u64) -> Result<BigUint> {
    Base::new(q)?;
    let mut acc = BigUint::zero();
    let mut cur = n / q;
    while !cur.is_zero() {
        acc += &cur;
        cur /= q;
    }
    Ok(acc)
}

/// `ν_q(n)` through the factorial valuation: `n − (q−1)·Σ⌊n/q^j⌋`.
pub fn nu_legendre(n: &BigUint, q: u64) -> Result<BigUint> {
    let v = legendre_valuation(n, q)?;
    Ok(n - v * (q - 1))
}

/// `Σ_{0≤j<n} ν_q(j)` in `O(log n)` big-integer operations.
pub fn digit_sum_total(n: &BigUint, q: u64) -> Result<BigUint> {
    let exp = digit_expansion(n, q)?;
    let digits = exp.digits();
    // Twice the total, so every term stays integral.
    let mut twice = BigInt::zero();
    let mut suffix: u64 = digits.iter().sum();
    let mut qj = BigInt::from(1u32);
    for (j, &e) in digits.iter().enumerate() {
        suffix -= e;
        if e != 0 {
            let inner = BigInt::from(e) - 1 + BigInt::from(q - 1) * j + BigInt::from(2 * suffix);
            twice += BigInt::from(e) * &qj * inner;
        }
        qj *= q;
    }
    let (half, rem) = twice.div_rem(&BigInt::from(2));
    debug_assert!(rem.is_zero());
    Ok(half.to_biguint().expect("digit total is nonnegative"))
}

/// Base-2 total through the set-bit exponents: `Σ_j 2^{λ_j}(λ_j/2 + j − 1)`.
pub fn digit_sum_total_binary(n: &BigUint) -> BigUint {
    let mut twice = BigUint::zero();
    for (idx, &lj) in binary_powers(n).iter().enumerate() {
        twice += (BigUint::from(1u32) << lj) * (lj + 2 * idx);
    }
    twice >> 1
}

/// `E(X_n) = S_q(n)/n` for `X_n = ν_q(U)`, `U` uniform on `{0, …, n−1}`.
pub fn mean_exact(n: &BigUint, q: u64) -> Result<BigRational> {
    if n.is_zero() {
        Base::new(q)?;
        return Err(Error::EmptyDistribution);
    }
    let total = digit_sum_total(n, q)?;
    Ok(BigRational::new(total.into(), n.clone().into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn expansion_of_nineteen() {
        let e = digit_expansion(&big(19), 2).unwrap();
        assert_eq!(e.digits(), &[1, 1, 0, 0, 1]);
        assert_eq!(e.lambda(), Some(4));
        assert_eq!(e.powers(), &[4, 1, 0]);
        let e = digit_expansion(&big(12), 2).unwrap();
        assert_eq!(e.powers(), &[3, 2]);
        assert_eq!(e.digit_sum(), 2);
    }

    #[test]
    fn zero_is_empty() {
        let e = digit_expansion(&big(0), 10).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.lambda(), None);
        assert!(matches!(digit_expansion(&big(3), 1), Err(Error::InvalidBase(1))));
    }

    #[test]
    fn small_sums() {
        assert_eq!(nu(&big(7), 2).unwrap(), 3);
        assert_eq!(nu(&big(19), 2).unwrap(), 3);
        assert_eq!(nu(&big(256), 2).unwrap(), 1);
        assert_eq!(nu(&big(999), 10).unwrap(), 27);
    }

    #[test]
    fn totals() {
        assert_eq!(digit_sum_total(&big(8), 2).unwrap(), big(12));
        assert_eq!(digit_sum_total(&big(12), 2).unwrap(), big(20));
        assert_eq!(digit_sum_total_binary(&big(12)), big(20));
        for q in [2, 3, 10] {
            assert_eq!(digit_sum_total(&big(1), q).unwrap(), big(0));
            assert_eq!(digit_sum_total(&big(0), q).unwrap(), big(0));
        }
    }

    #[test]
    fn means() {
        assert_eq!(mean_exact(&big(12), 2).unwrap(), rat(5, 3));
        assert_eq!(mean_exact(&big(3), 2).unwrap(), rat(2, 3));
        assert_eq!(mean_exact(&big(1 << 10), 2).unwrap(), rat(5, 1));
        assert!(matches!(mean_exact(&big(0), 2), Err(Error::EmptyDistribution)));
        // a·q^k with 1 ≤ a < q gives ((q−1)k + a − 1)/2.
        assert_eq!(mean_exact(&big(7 * 1000), 10).unwrap(), rat(9 * 3 + 6, 2));
    }

    #[test]
    fn legendre() {
        assert_eq!(legendre_valuation(&big(10), 2).unwrap(), big(8));
        assert_eq!(legendre_valuation(&big(7), 2).unwrap(), big(4));
        assert_eq!(legendre_valuation(&big(81), 3).unwrap(), big(40));
        assert_eq!(nu_legendre(&big(7), 2).unwrap(), big(3));
    }

    #[test]
    fn totals_match_bruteforce() {
        for q in [2u64, 3, 10] {
            let mut acc = 0u64;
            for n in 0..=20_000u64 {
                assert_eq!(digit_sum_total(&big(n), q).unwrap(), big(acc), "n={n} q={q}");
                acc += nu_u64(n, q);
            }
        }
    }

    #[test]
    fn digit_recurrence() {
        for q in [2u64, 3, 10] {
            for m in 0..=10_000u64 {
                for r in 0..q {
                    assert_eq!(nu_u64(q * m + r, q), nu_u64(m, q) + r);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn legendre_identity(n in any::<u128>(), q in 2u64..40) {
            let n = BigUint::from(n);
            prop_assert_eq!(nu_legendre(&n, q).unwrap(), big(nu(&n, q).unwrap()));
        }

        #[test]
        fn expansion_roundtrip(n in any::<u128>(), q in 2u64..40) {
            let n = BigUint::from(n);
            let e = digit_expansion(&n, q).unwrap();
            let mut back = BigUint::zero();
            for &d in e.digits().iter().rev() {
                prop_assert!(d < q);
                back = back * q + d;
            }
            prop_assert_eq!(&back, &n);
            if let Some(&top) = e.digits().last() {
                prop_assert!(top != 0);
            }
        }

        #[test]
        fn binary_total_routes(n in any::<u64>()) {
            let n = big(n);
            prop_assert_eq!(digit_sum_total(&n, 2).unwrap(), digit_sum_total_binary(&n));
        }
    }
}
