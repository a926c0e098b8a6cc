//! Binary coding systems whose weights satisfy `Z_{2n} = Z_n + Bernoulli(1/2)`
//! in law: plain binary, reflected Gray, and translate-complement.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{binary_powers, binomial, floor_log2, frac_log2, rat, rat_int, to_f64};
use crate::dist::{dtv_exact, ExactPmf, ORACLE_CAP};
use crate::error::{Error, Result};
use crate::poly::Poly;

pub type WeightFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// A weight function `n ↦ w(n)` plus the range over which the halving
/// identity has been checked.
#[derive(Clone)]
pub struct CodingSystem {
    name: String,
    weight: WeightFn,
    certified_to: Option<u64>,
}

impl fmt::Debug for CodingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodingSystem")
            .field("name", &self.name)
            .field("certified_to", &self.certified_to)
            .finish()
    }
}

/// Why the halving identity failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalvingFailure {
    /// `w(0) ≠ 0`.
    NonzeroOrigin(u64),
    /// `Σ_{j<2n} y^{w(j)} ≠ (1+y) Σ_{j<n} y^{w(j)}` at this `n`.
    Identity(u64),
}

impl CodingSystem {
    pub fn custom(name: impl Into<String>, weight: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        CodingSystem {
            name: name.into(),
            weight: Arc::new(weight),
            certified_to: None,
        }
    }

    pub fn binary() -> Self {
        Self::custom("binary", |n| u64::from(n.count_ones()))
    }

    pub fn gray() -> Self {
        Self::custom("gray", gray_weight)
    }

    pub fn transcomplement() -> Self {
        Self::custom("transcomplement", transcomplement_weight)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "binary" => Ok(Self::binary()),
            "gray" => Ok(Self::gray()),
            "transcomplement" | "translate-complement" => Ok(Self::transcomplement()),
            other => Err(Error::Parse(format!("unknown coding system '{other}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weight(&self, n: u64) -> u64 {
        (self.weight)(n)
    }

    pub fn certified_to(&self) -> Option<u64> {
        self.certified_to
    }

    /// Checks the halving identity for every `n ≤ n_max`; on success the
    /// closed-form routes unlock for `n ≤ 2·n_max`.
    ///
    /// Comparing `R_{2n} − R_{2n−2}` with `(1+y)(R_n − R_{n−1})` reduces the
    /// polynomial identity to `{w(2m), w(2m+1)} = {w(m), w(m)+1}` for `m < n`.
    pub fn verify_halving(&mut self, n_max: u64) -> std::result::Result<(), HalvingFailure> {
        let w0 = self.weight(0);
        if w0 != 0 {
            self.certified_to = None;
            return Err(HalvingFailure::NonzeroOrigin(w0));
        }
        for m in 0..n_max {
            let (a, b) = (self.weight(2 * m), self.weight(2 * m + 1));
            let c = self.weight(m);
            if !((a == c && b == c + 1) || (a == c + 1 && b == c)) {
                self.certified_to = None;
                return Err(HalvingFailure::Identity(m + 1));
            }
        }
        self.certified_to = Some(n_max);
        Ok(())
    }

    pub fn certified(mut self, n_max: u64) -> Result<Self> {
        self.verify_halving(n_max).map_err(|e| {
            Error::Uncertified(format!("{} fails the halving identity: {e:?}", self.name))
        })?;
        Ok(self)
    }

    fn require(&self, n: u64) -> Result<()> {
        match self.certified_to {
            Some(c) if n <= c.saturating_mul(2) => Ok(()),
            _ => Err(Error::Uncertified(format!(
                "{} is not certified for n = {n}",
                self.name
            ))),
        }
    }
}

/// Ones in the reflected Gray code of `n`.
pub fn gray_weight(n: u64) -> u64 {
    u64::from((n ^ (n >> 1)).count_ones())
}

/// `γ(2^k + j) = 1 + γ(2^k − 1 − j)`.
pub fn gray_weight_reflect(mut n: u64) -> u64 {
    let mut ones = 0;
    while n > 0 {
        let k = 63 - n.leading_zeros();
        n = (1u64 << k) - 1 - (n - (1u64 << k));
        ones += 1;
    }
    ones
}

/// `γ(n) = γ(⌊n/2⌋) + [⌈n/2⌉ odd]`.
pub fn gray_weight_halving(mut n: u64) -> u64 {
    let mut ones = 0;
    while n > 0 {
        ones += n.div_ceil(2) & 1;
        n /= 2;
    }
    ones
}

/// `μ(2^k + j) = k + 1 − μ(j)` for `0 ≤ j < 2^k`, `μ(0) = 0`.
pub fn transcomplement_weight(mut n: u64) -> u64 {
    let mut acc: i64 = 0;
    let mut sign = 1;
    while n > 0 {
        let k = 63 - n.leading_zeros();
        acc += sign * (i64::from(k) + 1);
        sign = -sign;
        n -= 1u64 << k;
    }
    acc as u64
}

fn small_n(n: &BigUint) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::EmptyDistribution);
    }
    n.to_u64()
        .ok_or_else(|| Error::Contract(format!("n = {n} exceeds the weight-function domain")))
}

/// Census of `w(j)` for `j < n`.
pub fn code_pmf_bruteforce(sys: &CodingSystem, n: &BigUint) -> Result<ExactPmf> {
    let n = small_n(n)?;
    if n > ORACLE_CAP {
        return Err(Error::OracleRange {
            n: n.to_string(),
            cap: ORACLE_CAP,
        });
    }
    let mut counts: Vec<u64> = Vec::new();
    for j in 0..n {
        let w = sys.weight(j) as usize;
        if w >= counts.len() {
            counts.resize(w + 1, 0);
        }
        counts[w] += 1;
    }
    let counts: Vec<BigUint> = counts.into_iter().map(BigUint::from).collect();
    ExactPmf::from_counts(0, &counts, &BigUint::from(n))
}

/// Weighted pieces `(2^{λ_j}, λ_j, μ̄_j)` with `μ̄_j = w(⌊n/2^{λ_j}⌋ − 1)`.
fn pieces(sys: &CodingSystem, n: u64) -> Vec<(u64, usize, u64)> {
    binary_powers(&BigUint::from(n))
        .into_iter()
        .map(|lj| (1u64 << lj, lj, sys.weight((n >> lj) - 1)))
        .collect()
}

/// `(1/n) Σ_j y^{μ̄_j} (1+y)^{λ_j}`.
pub fn code_pmf(sys: &CodingSystem, n: &BigUint) -> Result<ExactPmf> {
    let n = small_n(n)?;
    sys.require(n)?;
    let mut counts: Vec<BigUint> = Vec::new();
    for (_, lj, shift) in pieces(sys, n) {
        let top = shift as usize + lj;
        if top >= counts.len() {
            counts.resize(top + 1, BigUint::zero());
        }
        for i in 0..=lj {
            counts[shift as usize + i] += binomial(lj as u64, i as i64);
        }
    }
    ExactPmf::from_counts(0, &counts, &BigUint::from(n))
}

/// `E(Z_n) − λ/2`.
pub fn gbar1(sys: &CodingSystem, n: &BigUint) -> Result<BigRational> {
    let n = small_n(n)?;
    sys.require(n)?;
    let lambda = 63 - n.leading_zeros() as usize;
    let s: BigRational = pieces(sys, n)
        .into_iter()
        .map(|(w, lj, mu)| rat_int(w) * (rat_int(mu) - rat((lambda - lj) as i64, 2)))
        .sum();
    Ok(s / rat_int(n))
}

/// `b_0..b_m` in `E(y^{Z_n}) ((1+y)/2)^{−λ} = Σ b_r (y−1)^r`.
pub fn b_coeffs(sys: &CodingSystem, n: &BigUint, m: usize) -> Result<Vec<BigRational>> {
    let pmf = code_pmf(sys, n)?;
    let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)?;
    let pgf = Poly::new(pmf.masses().to_vec()).taylor_shift(&BigRational::one());
    let half = rat(1, 2);
    let den = Poly::binomial_power(&BigRational::one(), &half, lambda);
    pgf.series_div(&den, m + 1)
}

/// The digit-expansion formula for `Ḡ₁`, evaluated literally at
/// `x = {log₂n}`: `2^{−x} Σ_j [⌊2^{j+x}⌋ odd] 2^{−j} (w(⌊2^{j−1+x}⌋) − j/2)`.
pub fn gbar1_digit_formula(sys: &CodingSystem, n: &BigUint) -> Result<BigRational> {
    let n = small_n(n)?;
    let lambda = 63 - n.leading_zeros() as usize;
    let mut s = BigRational::zero();
    for j in 0..=lambda {
        if (n >> (lambda - j)) & 1 == 1 {
            let prev = if j == 0 { 0 } else { n >> (lambda - j + 1) };
            s += (rat_int(sys.weight(prev)) - rat(j as i64, 2)) * rat_int(1u64 << (lambda - j));
        }
    }
    Ok(s / rat_int(n))
}

/// `constant + slope·{log₂n}`, with the fractional part kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracAffine {
    pub constant: BigRational,
    pub slope: BigRational,
}

impl FracAffine {
    pub fn eval(&self, frac: f64) -> f64 {
        to_f64(&self.constant) + to_f64(&self.slope) * frac
    }
}

/// The periodic parts of `E(Z_n) = log₂n/2 + G₁` and `V(Z_n) = log₂n/4 + G₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fluctuations {
    pub lambda: usize,
    pub g1: FracAffine,
    pub g2: FracAffine,
}

impl Fluctuations {
    pub fn values(&self, n: &BigUint) -> (f64, f64) {
        let f = frac_log2(n);
        (self.g1.eval(f), self.g2.eval(f))
    }
}

/// `G₁ = R₁ − f/2` and `G₂ = T − G₁² − G₁ f − (f² + f)/4` with `f = {log₂n}`,
/// the quadratic terms in `f` cancelling exactly.
pub fn g1_g2(sys: &CodingSystem, n: &BigUint) -> Result<Fluctuations> {
    let nn = small_n(n)?;
    sys.require(nn)?;
    let lambda = 63 - nn.leading_zeros() as usize;
    let r1 = gbar1(sys, n)?;
    let t: BigRational = pieces(sys, nn)
        .into_iter()
        .map(|(w, lj, mu)| {
            let d = rat_int((lambda - lj) as u64);
            let mu = rat_int(mu);
            let one = BigRational::one();
            rat_int(w) * (&mu * &mu - &mu * &d + &d * (&d - one) / rat(4, 1))
        })
        .sum::<BigRational>()
        / rat_int(nn);
    // polynomials in f
    let g1 = Poly::new(vec![r1, rat(-1, 2)]);
    let f = Poly::monomial(1);
    let quarter = rat(1, 4);
    let g2 = &(&(&Poly::constant(t) - &(&g1 * &g1)) - &(&g1 * &f))
        - &Poly::new(vec![BigRational::zero(), quarter.clone(), quarter]);
    if g2.degree().is_some_and(|d| d > 1) {
        return Err(Error::Numeric("quadratic term failed to cancel".into()));
    }
    Ok(Fluctuations {
        lambda,
        g1: FracAffine {
            constant: g1.coeff(0),
            slope: g1.coeff(1),
        },
        g2: FracAffine {
            constant: g2.coeff(0),
            slope: g2.coeff(1),
        },
    })
}

/// Checks both mean and variance identities against the moments of `pmf`.
pub fn fluctuation_identities_hold(fl: &Fluctuations, pmf: &ExactPmf) -> bool {
    let lam = rat_int(fl.lambda as u64);
    let mean_ok = pmf.mean() == &lam / rat(2, 1) + &fl.g1.constant && fl.g1.slope == rat(-1, 2);
    let var_ok = pmf.variance() == &lam / rat(4, 1) + &fl.g2.constant && fl.g2.slope == rat(-1, 4);
    mean_ok && var_ok
}

/// Exact distance between binary and Gray weights, and
/// `√2 |a₁(n) − Ḡ₁^{gray}(n)| / √(πλ)`.
pub fn dtv_codes(n: &BigUint) -> Result<(BigRational, f64)> {
    let nn = small_n(n)?;
    if nn < 2 {
        return Err(Error::Degenerate("dtv_codes needs n ≥ 2".into()));
    }
    let gray = CodingSystem::gray().certified(nn.div_ceil(2))?;
    let binary = crate::dist::pmf_mixture(n)?;
    let exact = dtv_exact(&binary, &code_pmf(&gray, n)?);
    let a1 = crate::expansion::a_coeffs_explicit(n, 1)?.swap_remove(1);
    let gap = to_f64(&(a1 - gbar1(&gray, n)?).abs());
    let lambda = floor_log2(n).unwrap() as f64;
    Ok((exact, 2f64.sqrt() * gap / (std::f64::consts::PI * lambda).sqrt()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LltRow {
    pub x: f64,
    pub k: i64,
    pub prob: f64,
    pub main: f64,
    pub ratio: f64,
}

/// `P(Z_n = ⌊λ/2 + x√λ/2⌋)` against `√2 e^{−x²/2} / √(πλ)`.
pub fn llt_check(sys: &CodingSystem, n: &BigUint, xs: &[f64]) -> Result<Vec<LltRow>> {
    let pmf = code_pmf(sys, n)?;
    let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)? as f64;
    if lambda == 0.0 {
        return Err(Error::Degenerate("local limit needs λ ≥ 1".into()));
    }
    Ok(xs
        .iter()
        .map(|&x| {
            let k = (lambda / 2.0 + x * lambda.sqrt() / 2.0).floor() as i64;
            let prob = to_f64(&pmf.mass(k));
            let main = 2f64.sqrt() * (-x * x / 2.0).exp() / (std::f64::consts::PI * lambda).sqrt();
            LltRow {
                x,
                k,
                prob,
                main,
                ratio: prob / main,
            }
        })
        .collect())
}
