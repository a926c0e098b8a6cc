//! High-precision binary floats for the few transcendental quantities.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;

use crate::error::{Error, Result};

pub type Float = FBig<HalfEven, 2>;

pub const DEFAULT_PRECISION: usize = 128;
pub const MIN_PRECISION: usize = 64;
pub const PRECISION_ENV: &str = "DIGITSUM_PRECISION";

/// Mantissa bits from `DIGITSUM_PRECISION`, clamped below at 64.
pub fn precision_bits() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|p| p.max(MIN_PRECISION))
        .unwrap_or(DEFAULT_PRECISION)
}

pub fn check_precision(bits: usize) -> Result<usize> {
    if bits < MIN_PRECISION {
        return Err(Error::Contract(format!(
            "precision {bits} below the {MIN_PRECISION}-bit minimum"
        )));
    }
    Ok(bits)
}

pub fn ubig(n: &BigUint) -> UBig {
    UBig::from_le_bytes(&n.to_bytes_le())
}

pub fn ibig(n: &BigInt) -> IBig {
    let (sign, mag) = n.to_bytes_le();
    let m = IBig::from(UBig::from_le_bytes(&mag));
    if sign == Sign::Minus {
        -m
    } else {
        m
    }
}

pub fn from_int(n: &BigInt, prec: usize) -> Float {
    Float::from(ibig(n)).with_precision(prec).value()
}

/// Nearest float to `r` at `prec` bits (one rounding in the quotient).
pub fn from_rational(r: &BigRational, prec: usize) -> Float {
    from_int(r.numer(), prec) / from_int(r.denom(), prec)
}

pub fn from_f64(x: f64, prec: usize) -> Result<Float> {
    Float::try_from(x)
        .map(|v| v.with_precision(prec).value())
        .map_err(|_| Error::Numeric(format!("{x} is not finite")))
}

pub fn to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

/// `ln r` for a positive rational, with absolute error below `2^{2−prec}`
/// (relative rounding of the quotient plus that of the logarithm).
pub fn ln_rational(r: &BigRational, prec: usize) -> Result<Float> {
    if r <= &BigRational::from_integer(0.into()) {
        return Err(Error::Numeric("logarithm of a nonpositive number".into()));
    }
    Ok(from_rational(r, prec + 8).ln().with_precision(prec).value())
}

/// A real value together with an absolute error bound.
#[derive(Clone, Debug)]
pub struct RealBound {
    pub value: Float,
    pub abs_error: f64,
}

impl RealBound {
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.value)
    }
}

/// Binary digits `b₁ b₂ … b_J` of `2^f = 1.b₁b₂…` for `f ∈ (0, 1)`.
///
/// Each digit is certified: if the working precision cannot decide a digit
/// the computation is repeated with more bits.
pub fn exp2_frac_bits(f: f64, count: usize) -> Result<Vec<u8>> {
    if !(0.0..1.0).contains(&f) {
        return Err(Error::Contract(format!("fractional part {f} outside [0,1)")));
    }
    let mut prec = count + 64;
    for _ in 0..8 {
        let x = from_f64(f, prec)?;
        let ln2 = Float::from(2u8).with_precision(prec).value().ln();
        let y = (x * ln2).exp();
        // The computed y is within a few ulps; scale so digit J is the units bit.
        let scaled = y * Float::from(UBig::ONE << count).with_precision(prec).value();
        let floor = scaled.floor();
        let frac = to_f64(&(scaled.clone() - floor.clone()));
        // y has relative error ~2^{−prec+4}, so after scaling the slack is 2^{count−prec+5}.
        let slack = 2f64.powi(count as i32 - prec as i32 + 6);
        if frac > slack && frac < 1.0 - slack {
            let int: IBig = floor.to_int().value();
            let int = UBig::try_from(int).map_err(|_| Error::Numeric("negative power".into()))?;
            let bytes = int.to_le_bytes();
            let bit = |i: usize| bytes.get(i / 8).map_or(0, |b| (b >> (i % 8)) & 1);
            let bits = (0..count).rev().map(bit).collect();
            return Ok(bits);
        }
        prec *= 2;
    }
    Err(Error::Uncertified(format!(
        "binary digits of 2^{f} undecidable at {prec} bits"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn precision_floor() {
        assert!(check_precision(32).is_err());
        assert_eq!(check_precision(64).unwrap(), 64);
    }

    #[test]
    fn logs() {
        let v = to_f64(&ln_rational(&rat(3, 1), 128).unwrap());
        assert!((v - 3f64.ln()).abs() < 1e-15);
        let v = to_f64(&ln_rational(&rat(1001, 1000), 128).unwrap());
        assert!((v - (1.001f64).ln()).abs() < 1e-15);
        assert!(ln_rational(&rat(0, 1), 128).is_err());
    }

    #[test]
    fn conversions() {
        let n = BigInt::from(-123456789012345678i64) * BigInt::from(1u64 << 40);
        let back = from_int(&n, 256);
        assert_eq!(to_f64(&back), -123456789012345678f64 * 2f64.powi(40));
    }

    #[test]
    fn digits_of_power() {
        // 2^{log2(1.5)} = 1.1₂
        let bits = exp2_frac_bits(1.5f64.log2(), 6).unwrap();
        let mut v = 1.0;
        for (i, b) in bits.iter().enumerate() {
            v += *b as f64 * 2f64.powi(-(i as i32) - 1);
        }
        assert!((v - 1.5).abs() < 1e-9);
        let bits = exp2_frac_bits(0.3, 40).unwrap();
        let mut v = 1.0;
        for (i, b) in bits.iter().enumerate() {
            v += *b as f64 * 2f64.powi(-(i as i32) - 1);
        }
        assert!((v - 2f64.powf(0.3)).abs() < 1e-11);
    }
}
