//! Text inputs for the command line: integer expressions such as
//! `2^20+3`, exact rationals, coefficient lists and ranges.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest bit length an integer expression may reach.
pub const MAX_BITS: u64 = 1 << 16;

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

const MAX_DEPTH: usize = 64;

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { src: s.as_bytes(), pos: 0, depth: 0 }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit() || *c == b'_')
        {
            self.pos += 1;
        }
        let digits: String = self.src[start..self.pos]
            .iter()
            .filter(|c| **c != b'_')
            .map(|&c| c as char)
            .collect();
        if digits.is_empty() {
            return Err(err(format!("expected a number at offset {start}")));
        }
        if digits.len() as u64 > MAX_BITS / 3 {
            return Err(err("literal too long"));
        }
        digits.parse().map_err(|_| err("bad digits"))
    }

    fn factor(&mut self) -> Result<BigUint> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(err("expression nested too deeply"));
        }
        let v = self.factor_inner();
        self.depth -= 1;
        v
    }

    fn factor_inner(&mut self) -> Result<BigUint> {
        let base = if self.eat(b'(') {
            let v = self.sum()?;
            if !self.eat(b')') {
                return Err(err("unbalanced parenthesis"));
            }
            v
        } else {
            self.number()?
        };
        if self.eat(b'^') {
            let exp = self.factor()?;
            return power(&base, &exp);
        }
        Ok(base)
    }

    fn product(&mut self) -> Result<BigUint> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let rhs = self.factor()?;
            if acc.bits() + rhs.bits() > MAX_BITS {
                return Err(err("value too large"));
            }
            acc *= rhs;
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<BigUint> {
        let mut acc = self.product()?;
        loop {
            if self.eat(b'+') {
                acc += self.product()?;
                if acc.bits() > MAX_BITS {
                    return Err(err("value too large"));
                }
            } else if self.eat(b'-') {
                let rhs = self.product()?;
                if rhs > acc {
                    return Err(err("negative intermediate value"));
                }
                acc -= rhs;
            } else {
                return Ok(acc);
            }
        }
    }
}

fn power(base: &BigUint, exp: &BigUint) -> Result<BigUint> {
    if base.is_zero() || base.is_one() {
        return Ok(if exp.is_zero() { BigUint::one() } else { base.clone() });
    }
    let e = u64::try_from(exp).map_err(|_| err("exponent too large"))?;
    if (base.bits() - 1).saturating_mul(e) >= MAX_BITS {
        return Err(err("value too large"));
    }
    Ok(base.pow(e as u32))
}

/// A nonnegative integer written with `+ - * ^` and parentheses.
pub fn parse_natural(s: &str) -> Result<BigUint> {
    let mut c = Cursor::new(s);
    let v = c.sum()?;
    if c.peek().is_some() {
        return Err(err(format!("trailing input at offset {}", c.pos)));
    }
    Ok(v)
}

/// `p`, `-p`, `p/q` or a finite decimal such as `0.125`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, t),
    };
    let v = if let Some((p, q)) = body.split_once('/') {
        let p = parse_natural(p)?;
        let q = parse_natural(q)?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        BigRational::new(p.into(), q.into())
    } else if let Some((int, frac)) = body.split_once('.') {
        if !frac.bytes().all(|c| c.is_ascii_digit()) || frac.len() > 4096 {
            return Err(err("bad decimal fraction"));
        }
        let int = if int.trim().is_empty() { BigUint::zero() } else { parse_natural(int)? };
        let scale = BigUint::from(10u32).pow(frac.len() as u32);
        let frac_v: BigUint = if frac.is_empty() {
            BigUint::zero()
        } else {
            frac.parse().map_err(|_| err("bad decimal fraction"))?
        };
        BigRational::new(BigInt::from(int * &scale + frac_v), BigInt::from(scale))
    } else {
        BigRational::from_integer(parse_natural(body)?.into())
    };
    Ok(if neg { -v } else { v })
}

/// Comma-separated rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

/// Coefficients listed from the constant term up.
pub fn parse_poly(s: &str) -> Result<Poly> {
    Ok(Poly::new(parse_rational_list(s)?))
}

/// `a..b` (half-open) or `a..=b`, both ends integer expressions.
pub fn parse_range(s: &str) -> Result<(BigUint, BigUint)> {
    let (lo, hi, inclusive) = if let Some((a, b)) = s.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b, false)
    } else {
        return Err(err("expected a range such as 2^10..2^20"));
    };
    let lo = parse_natural(lo)?;
    let mut hi = parse_natural(hi)?;
    if !inclusive {
        if hi.is_zero() {
            return Err(err("empty range"));
        }
        hi -= 1u32;
    }
    if hi < lo {
        return Err(err("empty range"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    #[test]
    fn expressions() {
        assert_eq!(parse_natural("19").unwrap(), BigUint::from(19u32));
        assert_eq!(parse_natural(" 2^20 + 3 ").unwrap(), BigUint::from((1u32 << 20) + 3));
        assert_eq!(parse_natural("2^2^3").unwrap(), BigUint::from(256u32));
        assert_eq!(parse_natural("3*(2^4-1)").unwrap(), BigUint::from(45u32));
        assert_eq!(parse_natural("1_000_000").unwrap(), BigUint::from(1_000_000u32));
        assert_eq!(parse_natural("0^0").unwrap(), BigUint::one());
        let deep = "2^".repeat(10_000) + "1";
        assert!(parse_natural(&deep).is_err());
        assert!(parse_natural(&("(".repeat(10_000) + "1")).is_err());
        for bad in ["", "2^", "3-4", "(1", "1)", "2^99999999", "abc", "1 2", "-1"] {
            assert!(parse_natural(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/12").unwrap(), rat(1, 12));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.1.2").is_err());
        assert_eq!(parse_poly("0, 1/2, -1").unwrap().coeffs(), &[rat(0, 1), rat(1, 2), rat(-1, 1)]);
        assert!(parse_poly("").unwrap().is_zero());
    }

    #[test]
    fn ranges() {
        let (a, b) = parse_range("2^10..2^20").unwrap();
        assert_eq!(a, BigUint::from(1024u32));
        assert_eq!(b, BigUint::from((1u32 << 20) - 1));
        assert_eq!(parse_range("5..=5").unwrap().1, BigUint::from(5u32));
        assert!(parse_range("5..5").is_err());
        assert!(parse_range("5").is_err());
    }

    proptest! {
        #[test]
        fn decimal_roundtrip(n in any::<u128>()) {
            prop_assert_eq!(parse_natural(&n.to_string()).unwrap(), BigUint::from(n));
        }

        #[test]
        fn never_panics(s in "[0-9+*^()/.\\- _,=]{0,40}") {
            let _ = parse_natural(&s);
            let _ = parse_rational(&s);
            let _ = parse_poly(&s);
            let _ = parse_range(&s);
        }
    }
}
