//! Exact laws of `X_n = ν₂(U_n)` and exact distances between finite laws.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{binary_powers, binomial, binomial_row, ceil_log2, floor_log2, pow2, rat_int};
use crate::bigfloat::{self, RealBound};
use crate::digits::{digit_expansion, nu_u64, Base};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Default ceiling on `n` for the enumeration oracle.
pub const ORACLE_CAP: u64 = 1_000_000;

/// A probability mass function on a window of consecutive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPmf {
    offset: i64,
    masses: Vec<BigRational>,
}

impl ExactPmf {
    /// Validates nonnegativity and total mass one, then trims zero ends.
    pub fn new(offset: i64, masses: Vec<BigRational>) -> Result<Self> {
        if masses.iter().any(|m| m.is_negative()) {
            return Err(Error::Contract("negative probability mass".into()));
        }
        let total: BigRational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::Contract(format!("masses sum to {total}, not 1")));
        }
        Ok(Self::trimmed(offset, masses))
    }

    /// Masses `counts[k] / total` starting at `offset`.
    pub fn from_counts(offset: i64, counts: &[BigUint], total: &BigUint) -> Result<Self> {
        if total.is_zero() {
            return Err(Error::EmptyDistribution);
        }
        let den = BigInt::from(total.clone());
        let masses = counts
            .iter()
            .map(|c| BigRational::new(BigInt::from(c.clone()), den.clone()))
            .collect();
        Self::new(offset, masses)
    }

    pub(crate) fn trimmed(mut offset: i64, mut masses: Vec<BigRational>) -> Self {
        while masses.last().is_some_and(Zero::is_zero) {
            masses.pop();
        }
        let lead = masses.iter().take_while(|m| m.is_zero()).count();
        if lead > 0 {
            masses.drain(..lead);
            offset += lead as i64;
        }
        ExactPmf { offset, masses }
    }

    /// A point mass at `k`.
    pub fn dirac(k: i64) -> Self {
        ExactPmf {
            offset: k,
            masses: vec![BigRational::one()],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    /// Inclusive support window `(lo, hi)`.
    pub fn support(&self) -> (i64, i64) {
        (self.offset, self.offset + self.masses.len() as i64 - 1)
    }

    pub fn mass(&self, k: i64) -> BigRational {
        let i = k - self.offset;
        if i < 0 {
            return BigRational::zero();
        }
        self.masses
            .get(i as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `P(X ≤ k)`.
    pub fn cdf(&self, k: i64) -> BigRational {
        let (lo, _) = self.support();
        if k < lo {
            return BigRational::zero();
        }
        let upto = ((k - lo) as usize + 1).min(self.masses.len());
        self.masses[..upto].iter().sum()
    }

    /// Law of `X + by`.
    pub fn shifted(&self, by: i64) -> Self {
        ExactPmf {
            offset: self.offset + by,
            masses: self.masses.clone(),
        }
    }

    /// `E(X^m)`.
    pub fn moment(&self, m: u32) -> BigRational {
        self.masses
            .iter()
            .enumerate()
            .map(|(i, p)| p * rat_int(BigInt::from(self.offset + i as i64).pow(m)))
            .sum()
    }

    pub fn mean(&self) -> BigRational {
        self.moment(1)
    }

    pub fn variance(&self) -> BigRational {
        let m = self.mean();
        self.moment(2) - &m * &m
    }

    /// `P(X ∈ S)` for an indicator given as a predicate.
    pub fn prob(&self, mut pred: impl FnMut(i64) -> bool) -> BigRational {
        self.masses
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(self.offset + *i as i64))
            .map(|(_, p)| p.clone())
            .sum()
    }

    /// `E h(X)` for a function given on the support.
    pub fn expect(&self, mut h: impl FnMut(i64) -> BigRational) -> BigRational {
        self.masses
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| p * h(self.offset + i as i64))
            .sum()
    }
}

/// One block `weight · Bi(size, 1/2) + shift` of the mixture decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixtureTerm {
    pub weight: BigRational,
    pub size: usize,
    pub shift: usize,
}

/// `L(X_n) = Σ_j (2^{λ_j}/n) · L(Y_{λ_j} + j − 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialMixture {
    pub n: BigUint,
    pub terms: Vec<MixtureTerm>,
}

impl BinomialMixture {
    pub fn of(n: &BigUint) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::EmptyDistribution);
        }
        let den = BigInt::from(n.clone());
        let terms = binary_powers(n)
            .into_iter()
            .enumerate()
            .map(|(shift, size)| MixtureTerm {
                weight: BigRational::new(BigInt::from(pow2(size)), den.clone()),
                size,
                shift,
            })
            .collect();
        Ok(BinomialMixture {
            n: n.clone(),
            terms,
        })
    }

    pub fn pmf(&self) -> ExactPmf {
        let counts = mixture_counts(&self.n);
        ExactPmf::from_counts(0, &counts, &self.n).expect("mixture weights sum to one")
    }
}

/// `n·P(X_n = k)` for `k = 0..=λ`, from the mixture.
pub fn mixture_counts(n: &BigUint) -> Vec<BigUint> {
    let Some(lambda) = floor_log2(n) else {
        return Vec::new();
    };
    let mut counts = vec![BigUint::zero(); lambda + 1];
    for (shift, size) in binary_powers(n).into_iter().enumerate() {
        for (k, c) in binomial_row(size).into_iter().enumerate() {
            counts[k + shift] += c;
        }
    }
    counts
}

/// Exact law of `X_n` from the mixture decomposition.
pub fn pmf_mixture(n: &BigUint) -> Result<ExactPmf> {
    Ok(BinomialMixture::of(n)?.pmf())
}

/// Enumerates `ν₂(j)` for `j < n`; refuses `n` above [`ORACLE_CAP`].
pub fn pmf_bruteforce(n: &BigUint) -> Result<ExactPmf> {
    pmf_bruteforce_capped(n, ORACLE_CAP)
}

pub fn pmf_bruteforce_capped(n: &BigUint, cap: u64) -> Result<ExactPmf> {
    let small = n.to_u64().filter(|&v| v <= cap).ok_or_else(|| Error::OracleRange {
        n: n.to_string(),
        cap,
    })?;
    if small == 0 {
        return Err(Error::EmptyDistribution);
    }
    let mut counts = vec![0u64; 65];
    for j in 0..small {
        counts[j.count_ones() as usize] += 1;
    }
    let counts: Vec<BigUint> = counts.into_iter().map(BigUint::from).collect();
    ExactPmf::from_counts(0, &counts, n)
}

/// Streams the enumeration oracle: yields `(n, counts)` for `n = 1, 2, …`
/// where `counts[k] = #{ j < n : ν_q(j) = k }`.
pub struct BruteForceCounts {
    q: u64,
    next: u64,
    counts: Vec<u64>,
}

impl BruteForceCounts {
    pub fn new(q: u64) -> Result<Self> {
        Base::new(q)?;
        Ok(BruteForceCounts {
            q,
            next: 0,
            counts: Vec::new(),
        })
    }
}

impl Iterator for BruteForceCounts {
    type Item = (u64, Vec<u64>);

    fn next(&mut self) -> Option<Self::Item> {
        let k = nu_u64(self.next, self.q) as usize;
        if k >= self.counts.len() {
            self.counts.resize(k + 1, 0);
        }
        self.counts[k] += 1;
        self.next += 1;
        Some((self.next, self.counts.clone()))
    }
}

/// `n·P(X_n = k)` from the generating-function closed form in base `q`.
pub fn pgf_counts(n: &BigUint, q: u64) -> Result<Vec<BigUint>> {
    let exp = digit_expansion(n, q)?;
    let digits = exp.digits();
    if digits.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let lambda = digits.len() - 1;
    let block = vec![BigUint::one(); q as usize];
    // Powers of 1 + y + … + y^{q−1}, lowest first.
    let mut powers: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for _ in 0..lambda {
        let last = powers.last().expect("non-empty");
        powers.push(int_mul(last, &block));
    }
    let top_degree = (q as usize - 1) * (lambda + 1);
    let mut acc = vec![BigUint::zero(); top_degree + 1];
    let mut prefix = 0usize;
    for pos in (0..=lambda).rev() {
        let c = digits[pos] as usize;
        if c == 0 {
            continue;
        }
        let head = vec![BigUint::one(); c];
        let term = int_mul(&head, &powers[pos]);
        for (k, v) in term.into_iter().enumerate() {
            acc[k + prefix] += v;
        }
        prefix += c;
    }
    while acc.last().is_some_and(Zero::is_zero) {
        acc.pop();
    }
    Ok(acc)
}

fn int_mul(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Probability generating function of `X_n` in base `q`.
pub fn pgf_closed_form(n: &BigUint, q: u64) -> Result<Poly> {
    let counts = pgf_counts(n, q)?;
    let den = BigInt::from(n.clone());
    Ok(Poly::new(
        counts
            .into_iter()
            .map(|c| BigRational::new(c.into(), den.clone()))
            .collect(),
    ))
}

/// The law with masses given by a probability generating polynomial.
pub fn pmf_from_pgf(p: &Poly) -> Result<ExactPmf> {
    ExactPmf::new(0, p.coeffs().to_vec())
}

/// `Bi(λ, 1/2)`.
pub fn binomial_pmf(lambda: usize) -> ExactPmf {
    let den = BigInt::from(pow2(lambda));
    let masses = binomial_row(lambda)
        .into_iter()
        .map(|c| BigRational::new(c.into(), den.clone()))
        .collect();
    ExactPmf {
        offset: 0,
        masses,
    }
}

/// Common window of two laws and the aligned mass pairs.
fn aligned(p: &ExactPmf, q: &ExactPmf) -> (i64, Vec<(BigRational, BigRational)>) {
    let lo = p.offset.min(q.offset);
    let hi = p.support().1.max(q.support().1);
    let pairs = (lo..=hi).map(|k| (p.mass(k), q.mass(k))).collect();
    (lo, pairs)
}

/// `½ Σ_k |p_k − q_k|`.
pub fn dtv_exact(p: &ExactPmf, q: &ExactPmf) -> BigRational {
    let (_, pairs) = aligned(p, q);
    let sum: BigRational = pairs.iter().map(|(a, b)| (a - b).abs()).sum();
    sum / rat_int(2)
}

/// `max_k |P(X ≤ k) − Q(X ≤ k)|`.
pub fn kolmogorov_exact(p: &ExactPmf, q: &ExactPmf) -> BigRational {
    let (_, pairs) = aligned(p, q);
    let mut gap = BigRational::zero();
    let mut best = BigRational::zero();
    for (a, b) in pairs {
        gap += a - b;
        if gap.abs() > best {
            best = gap.abs();
        }
    }
    best
}

fn check_support(p: &ExactPmf, q: &ExactPmf) -> Result<Vec<(BigRational, BigRational)>> {
    let (lo, pairs) = aligned(p, q);
    for (i, (a, b)) in pairs.iter().enumerate() {
        if b.is_zero() && !a.is_zero() {
            return Err(Error::SupportViolation(lo + i as i64));
        }
    }
    Ok(pairs)
}

/// `Σ_k (p_k/q_k − 1)² q_k`.
pub fn chi2_exact(p: &ExactPmf, q: &ExactPmf) -> Result<BigRational> {
    let pairs = check_support(p, q)?;
    Ok(pairs
        .iter()
        .filter(|(_, b)| !b.is_zero())
        .map(|(a, b)| {
            let d = a - b;
            &d * &d / b
        })
        .sum())
}

/// `Σ p_k ln(p_k/q_k)` at the configured float precision.
pub fn kl_divergence(p: &ExactPmf, q: &ExactPmf) -> Result<RealBound> {
    kl_divergence_prec(p, q, bigfloat::precision_bits())
}

pub fn kl_divergence_prec(p: &ExactPmf, q: &ExactPmf, prec: usize) -> Result<RealBound> {
    let prec = bigfloat::check_precision(prec)?;
    let pairs = check_support(p, q)?;
    let mut value = bigfloat::from_int(&BigInt::zero(), prec);
    let mut terms = 0usize;
    for (a, b) in pairs.iter().filter(|(a, _)| !a.is_zero()) {
        let ln = bigfloat::ln_rational(&(a / b), prec + 16)?;
        value += bigfloat::from_rational(a, prec + 16) * ln;
        terms += 1;
    }
    let value = value.with_precision(prec).value();
    // Each term carries at most a few units in the last place at prec+16 bits.
    let scale = bigfloat::to_f64(&value).abs().max(1.0);
    let abs_error = (terms as f64 + 1.0) * 8.0 * scale * 2f64.powi(-(prec as i32));
    Ok(RealBound { value, abs_error })
}

fn stirling2_row(m: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for i in 1..=m {
        let mut next = vec![BigUint::zero(); i + 1];
        for (k, v) in row.iter().enumerate() {
            next[k] += v * k;
            next[k + 1] += v;
        }
        row = next;
    }
    row
}

fn falling(x: usize, r: usize) -> BigUint {
    if r > x {
        return BigUint::zero();
    }
    (0..r).fold(BigUint::one(), |acc, i| acc * (x - i))
}

/// `n·2^r·E[(X_n)_r]` for `r = 0..=m`, integers from the closed-form PGF.
pub(crate) fn scaled_factorial_moments(n: &BigUint, m: usize) -> Vec<BigUint> {
    let powers = binary_powers(n);
    (0..=m)
        .map(|r| {
            let mut acc = BigUint::zero();
            for (shift, &size) in powers.iter().enumerate() {
                let mut inner = BigUint::zero();
                for i in 0..=r {
                    let t = falling(shift, i);
                    if t.is_zero() {
                        continue;
                    }
                    inner += (binomial(r as u64, i as i64) * t * falling(size, r - i)) << i;
                }
                acc += inner << size;
            }
            acc
        })
        .collect()
}

/// `E(X_n^m)` from derivatives of the closed-form PGF at `y = 1`.
pub fn moment_exact(n: &BigUint, m: usize) -> Result<BigRational> {
    if n.is_zero() {
        return Err(Error::EmptyDistribution);
    }
    let fm = scaled_factorial_moments(n, m);
    let s = stirling2_row(m);
    let mut num = BigUint::zero();
    for r in 0..=m {
        num += (&s[r] * &fm[r]) << (m - r);
    }
    Ok(BigRational::new(num.into(), BigInt::from(n.clone() << m)))
}

/// `dtv(L(X_n), Bi(λ))` in integer arithmetic.
pub fn dtv_to_binomial(n: &BigUint) -> Result<BigRational> {
    let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)?;
    let counts = mixture_counts(n);
    let row = binomial_row(lambda);
    let scale = BigInt::from(pow2(lambda));
    let nn = BigInt::from(n.clone());
    let mut sum = BigInt::zero();
    for (c, b) in counts.iter().zip(row.iter()) {
        sum += (BigInt::from(c.clone()) * &scale - &nn * BigInt::from(b.clone())).abs();
    }
    Ok(BigRational::new(sum, (nn * scale) << 1))
}

/// `(P(|X_n − (λ+1)/2| > c), 2·P(|Y_{λ+1} − (λ+1)/2| > c))`.
pub fn heppner_sides(n: &BigUint, c: u64) -> Result<(BigRational, BigRational)> {
    let p = pmf_mixture(n)?;
    let lambda = floor_log2(n).expect("n ≥ 1") as i64;
    let centre = lambda + 1;
    let far = |k: i64| (2 * k - centre).unsigned_abs() > 2 * c;
    let lhs = p.prob(far);
    let rhs = binomial_pmf(lambda as usize + 1).prob(far) * rat_int(2);
    Ok((lhs, rhs))
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `sup_x |P((X_n − λ₀/2)/√(λ₀/4) ≤ x) − Φ(x)|` with `λ₀ = ⌈log₂ n⌉`.
///
/// Both one-sided limits are checked at every atom.
pub fn chen_shao_normal(n: &BigUint) -> Result<f64> {
    let l0 = chen_shao_size(n)?;
    let p = pmf_mixture(n)?;
    let mu = l0 as f64 / 2.0;
    let sd = (l0 as f64 / 4.0).sqrt();
    let mut below = BigRational::zero();
    let mut worst: f64 = 0.0;
    for (i, m) in p.masses().iter().enumerate() {
        let z = (p.offset() as f64 + i as f64 - mu) / sd;
        let phi = normal_cdf(z);
        let before = crate::arith::to_f64(&below);
        below += m;
        let after = crate::arith::to_f64(&below);
        worst = worst.max((before - phi).abs()).max((after - phi).abs());
    }
    Ok(worst)
}

/// Kolmogorov distance between `X_n` and `Y_{⌈log₂ n⌉}`, both centred on the
/// same lattice.
pub fn chen_shao_binomial(n: &BigUint) -> Result<BigRational> {
    let l0 = chen_shao_size(n)?;
    Ok(kolmogorov_exact(&pmf_mixture(n)?, &binomial_pmf(l0)))
}

/// `6.2 / √⌈log₂ n⌉`.
pub fn chen_shao_bound(n: &BigUint) -> Result<f64> {
    Ok(6.2 / (chen_shao_size(n)? as f64).sqrt())
}

fn chen_shao_size(n: &BigUint) -> Result<usize> {
    match ceil_log2(n) {
        None => Err(Error::EmptyDistribution),
        Some(0) => Err(Error::Degenerate("n = 1 has a point-mass law".into())),
        Some(l) => Ok(l),
    }
}

/// `dtv(L(Y_k), L(Y_k + 1)) = P(Y_k = ⌊k/2⌋)`.
pub fn dtv_binomial_shift(k: usize) -> BigRational {
    BigRational::new(binomial(k as u64, (k / 2) as i64).into(), pow2(k).into())
}

/// `dtv(L(Y_k), L(Y_{k+1}))`, half of [`dtv_binomial_shift`].
pub fn dtv_binomial_step(k: usize) -> BigRational {
    dtv_binomial_shift(k) / rat_int(2)
}

/// Checks `4·dtv² ≤ χ²` exactly.
pub fn dtv_chi2_inequality(p: &ExactPmf, q: &ExactPmf) -> Result<bool> {
    let d = dtv_exact(p, q);
    Ok(&d * &d * rat_int(4) <= chi2_exact(p, q)?)
}

/// Reduces `(a, b)` to the rational `a/b`; used by callers holding counts.
pub fn ratio(a: &BigUint, b: &BigUint) -> BigRational {
    let g = a.gcd(b);
    BigRational::new((a / &g).into(), (b / &g).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::digits::mean_exact;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn pmf(masses: &[(i64, i64)]) -> ExactPmf {
        ExactPmf::new(0, masses.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    #[test]
    fn twelve() {
        let expect = pmf(&[(1, 12), (4, 12), (5, 12), (2, 12)]);
        assert_eq!(pmf_bruteforce(&big(12)).unwrap(), expect);
        assert_eq!(pmf_mixture(&big(12)).unwrap(), expect);
        let g = pgf_closed_form(&big(12), 2).unwrap();
        assert_eq!(pmf_from_pgf(&g).unwrap(), expect);
        let b3 = binomial_pmf(3);
        assert_eq!(dtv_exact(&expect, &b3), rat(1, 12));
        assert_eq!(kolmogorov_exact(&expect, &b3), rat(1, 12));
        assert_eq!(chi2_exact(&expect, &b3).unwrap(), rat(1, 27));
        assert_eq!(dtv_to_binomial(&big(12)).unwrap(), rat(1, 12));
        assert_eq!(moment_exact(&big(12), 2).unwrap(), rat(7, 2));
        let v = moment_exact(&big(12), 2).unwrap() - rat(25, 9) - rat(3, 4);
        assert_eq!(v, rat(-1, 36));
    }

    #[test]
    fn small_laws() {
        assert_eq!(pmf_bruteforce(&big(2)).unwrap(), pmf(&[(1, 2), (1, 2)]));
        assert_eq!(pmf_bruteforce(&big(8)).unwrap(), binomial_pmf(3));
        assert_eq!(pmf_mixture(&big(6)).unwrap(), pmf(&[(1, 6), (3, 6), (2, 6)]));
        assert_eq!(pmf_mixture(&big(64)).unwrap(), binomial_pmf(6));
        assert_eq!(binomial_pmf(0), ExactPmf::dirac(0));
        assert_eq!(binomial_pmf(2), pmf(&[(1, 4), (2, 4), (1, 4)]));
        let k6 = kolmogorov_exact(&pmf_mixture(&big(6)).unwrap(), &binomial_pmf(2));
        assert_eq!(k6, rat(1, 12));
        assert!(matches!(
            pmf_bruteforce(&big(ORACLE_CAP + 1)),
            Err(Error::OracleRange { .. })
        ));
        assert!(matches!(pmf_mixture(&big(0)), Err(Error::EmptyDistribution)));
    }

    #[test]
    fn mixture_terms() {
        let mix = BinomialMixture::of(&big(12)).unwrap();
        assert_eq!(mix.terms.len(), 2);
        assert_eq!(mix.terms[0].weight, rat(2, 3));
        assert_eq!((mix.terms[1].size, mix.terms[1].shift), (2, 1));
        let total: BigRational = mix.terms.iter().map(|t| t.weight.clone()).sum();
        assert!(total.is_one());
    }

    #[test]
    fn generating_functions() {
        assert_eq!(
            pgf_closed_form(&big(3), 2).unwrap(),
            Poly::new(vec![rat(1, 3), rat(2, 3)])
        );
        // q^k gives ((1 + … + y^{q−1})/q)^k.
        let p = pgf_closed_form(&big(27), 3).unwrap();
        let third = rat(1, 3);
        let base = Poly::new(vec![third.clone(), third.clone(), third]);
        let cube = &(&base * &base) * &base;
        assert_eq!(p, cube);
        for q in [3u64, 10] {
            for n in 1..500u64 {
                let counts = pgf_counts(&big(n), q).unwrap();
                let mut brute = vec![0u64; counts.len()];
                for j in 0..n {
                    brute[nu_u64(j, q) as usize] += 1;
                }
                let brute: Vec<BigUint> = brute.into_iter().map(BigUint::from).collect();
                assert_eq!(counts, brute, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn streaming_oracle() {
        for (n, counts) in BruteForceCounts::new(2).unwrap().take(300) {
            let counts: Vec<BigUint> = counts.into_iter().map(BigUint::from).collect();
            assert_eq!(counts, mixture_counts(&big(n)), "n={n}");
        }
    }

    #[test]
    fn distances_self() {
        let p = pmf_mixture(&big(37)).unwrap();
        assert!(dtv_exact(&p, &p).is_zero());
        assert!(kolmogorov_exact(&p, &p).is_zero());
        assert!(chi2_exact(&p, &p).unwrap().is_zero());
        assert_eq!(kl_divergence(&p, &p).unwrap().to_f64(), 0.0);
        let shifted = p.shifted(1);
        assert!(matches!(chi2_exact(&shifted, &p), Err(Error::SupportViolation(_))));
    }

    #[test]
    fn kl_below_chi2() {
        for n in [6u64, 12, 37, 1000] {
            let p = pmf_mixture(&big(n)).unwrap();
            let lambda = floor_log2(&big(n)).unwrap();
            let q = binomial_pmf(lambda);
            let kl = kl_divergence(&p, &q).unwrap();
            let chi = crate::arith::to_f64(&chi2_exact(&p, &q).unwrap());
            assert!(kl.to_f64() > 0.0 && kl.to_f64() <= chi, "n={n}");
            assert!(kl.abs_error < 1e-30);
            assert!(dtv_chi2_inequality(&p, &q).unwrap());
        }
    }

    #[test]
    fn moments() {
        for n in 1..300u64 {
            let p = pmf_bruteforce(&big(n)).unwrap();
            assert_eq!(moment_exact(&big(n), 0).unwrap(), rat(1, 1));
            assert_eq!(moment_exact(&big(n), 1).unwrap(), mean_exact(&big(n), 2).unwrap());
            for m in 2..5 {
                assert_eq!(moment_exact(&big(n), m).unwrap(), p.moment(m as u32), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn heppner_small() {
        for n in 1..200u64 {
            for c in 0..6 {
                let (lhs, rhs) = heppner_sides(&big(n), c).unwrap();
                assert!(lhs <= rhs, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn chen_shao_small() {
        assert!(chen_shao_normal(&big(1)).is_err());
        for n in 2..300u64 {
            let k = chen_shao_normal(&big(n)).unwrap();
            assert!(k <= chen_shao_bound(&big(n)).unwrap());
            assert!(crate::arith::to_f64(&chen_shao_binomial(&big(n)).unwrap()) <= 1.0);
        }
    }

    #[test]
    fn binomial_shift_distance() {
        for k in 0..40usize {
            let y = binomial_pmf(k);
            assert_eq!(dtv_exact(&y, &y.shifted(1)), dtv_binomial_shift(k));
            assert_eq!(dtv_exact(&y, &binomial_pmf(k + 1)), dtv_binomial_step(k));
        }
    }
}
