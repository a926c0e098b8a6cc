//! Krawtchouk polynomials for `Bi(N, p)`, the Parseval identity they
//! induce, and the explicit χ² majorant built on it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{binary_powers, binomial, floor_log2};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest `N` accepted for a dense table.
pub const MAX_TABLE_SIZE: usize = 512;

#[derive(Clone, Debug)]
pub struct KrawtchoukFamily {
    size: usize,
    p: BigRational,
    q: BigRational,
    /// `table[j][t] = K_j(t)`.
    table: Vec<Vec<BigRational>>,
}

fn check_p(p: &BigRational) -> Result<BigRational> {
    if !p.is_positive() || p >= &BigRational::one() {
        return Err(Error::Contract(format!("p = {p} is outside (0, 1)")));
    }
    Ok(BigRational::one() - p)
}

/// `(1+qw)^t` and `(1−pw)^t` for `t = 0..=N`.
fn moebius_powers(size: usize, p: &BigRational, q: &BigRational) -> (Vec<Poly>, Vec<Poly>) {
    let one = BigRational::one();
    let up = Poly::new(vec![one.clone(), q.clone()]);
    let down = Poly::new(vec![one.clone(), -p.clone()]);
    let mut ups = vec![Poly::constant(one.clone())];
    let mut downs = vec![Poly::constant(one)];
    for t in 0..size {
        ups.push(&ups[t] * &up);
        downs.push(&downs[t] * &down);
    }
    (ups, downs)
}

/// `K_j(t)` = coefficient of `wʲ` in `(1+qw)^t (1−pw)^{N−t}`.
pub fn krawtchouk_table(size: usize, p: &BigRational) -> Result<KrawtchoukFamily> {
    let q = check_p(p)?;
    if size > MAX_TABLE_SIZE {
        return Err(Error::Contract(format!(
            "table size {size} exceeds {MAX_TABLE_SIZE}"
        )));
    }
    let (ups, downs) = moebius_powers(size, p, &q);
    let mut table = vec![vec![BigRational::zero(); size + 1]; size + 1];
    for t in 0..=size {
        let gen = &ups[t] * &downs[size - t];
        for (j, row) in table.iter_mut().enumerate() {
            row[t] = gen.coeff(j);
        }
    }
    Ok(KrawtchoukFamily {
        size,
        p: p.clone(),
        q,
        table,
    })
}

impl KrawtchoukFamily {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn get(&self, j: usize, t: usize) -> &BigRational {
        &self.table[j][t]
    }

    /// `B(N,t) = C(N,t) pᵗ q^{N−t}`.
    pub fn weight(&self, t: usize) -> BigRational {
        let c = BigRational::from_integer(BigInt::from(binomial(self.size as u64, t as i64)));
        c * num_traits::pow(self.p.clone(), t) * num_traits::pow(self.q.clone(), self.size - t)
    }

    /// `C(N,j)(pq)ʲ`, the squared norm of `K_j`.
    pub fn norm(&self, j: usize) -> BigRational {
        let c = BigRational::from_integer(BigInt::from(binomial(self.size as u64, j as i64)));
        c * num_traits::pow(&self.p * &self.q, j)
    }

    /// `Σ_t B(N,t) K_n(t) K_m(t)`.
    pub fn inner(&self, n: usize, m: usize) -> BigRational {
        (0..=self.size)
            .map(|t| self.weight(t) * &self.table[n][t] * &self.table[m][t])
            .sum()
    }

    /// First `(n, m)` whose inner product differs from `δ_{nm} C(N,n)(pq)ⁿ`.
    pub fn orthogonality_violation(&self) -> Option<(usize, usize)> {
        let w: Vec<BigRational> = (0..=self.size).map(|t| self.weight(t)).collect();
        for n in 0..=self.size {
            for m in n..=self.size {
                let s: BigRational = (0..=self.size)
                    .map(|t| &w[t] * &self.table[n][t] * &self.table[m][t])
                    .sum();
                let want = if n == m { self.norm(n) } else { BigRational::zero() };
                if s != want {
                    return Some((n, m));
                }
            }
        }
        None
    }

    /// `b_j` in `f_t / B(N,t) = Σ_j b_j K_j(t)`, by projection.
    pub fn projection(&self, f: &Poly) -> Result<Vec<BigRational>> {
        check_degree(f, self.size)?;
        Ok((0..=self.size)
            .map(|j| {
                let s: BigRational = (0..=self.size).map(|t| f.coeff(t) * &self.table[j][t]).sum();
                s / self.norm(j)
            })
            .collect())
    }

    /// Parseval's two sides with `c_j = Σ_t f_t K_j(t)` read off the table
    /// and `C(N,j)^{−1}` from the Beta integral.
    pub fn parseval(&self, f: &Poly) -> Result<(BigRational, BigRational)> {
        check_degree(f, self.size)?;
        let pq = &self.p * &self.q;
        let lhs: BigRational = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(t, ft)| ft * ft / self.weight(t))
            .sum();
        let mut pq_pow = BigRational::one();
        let mut rhs = BigRational::zero();
        for j in 0..=self.size {
            let cj: BigRational = f
                .coeffs()
                .iter()
                .enumerate()
                .map(|(t, ft)| ft * &self.table[j][t])
                .sum();
            rhs += &cj * &cj * beta_scaled(j, self.size) / &pq_pow;
            pq_pow *= &pq;
        }
        Ok((lhs, rhs))
    }

    /// `Σ_j b_j K_j(t)` for each `t`.
    pub fn synthesize(&self, b: &[BigRational]) -> Vec<BigRational> {
        (0..=self.size)
            .map(|t| b.iter().zip(&self.table).map(|(bj, row)| bj * &row[t]).sum())
            .collect()
    }
}

fn check_degree(f: &Poly, size: usize) -> Result<()> {
    match f.degree() {
        Some(d) if d > size => Err(Error::Degree { degree: d, n: size }),
        _ => Ok(()),
    }
}

/// Coefficients of `(1−pw)^N f((1+qw)/(1−pw))`.
pub fn expansion_coeffs(f: &Poly, size: usize, p: &BigRational) -> Result<Vec<BigRational>> {
    let q = check_p(p)?;
    check_degree(f, size)?;
    let (ups, downs) = moebius_powers(size, p, &q);
    let mut acc = Poly::zero();
    for (t, ft) in f.coeffs().iter().enumerate() {
        if !ft.is_zero() {
            acc = &acc + &(&ups[t] * &downs[size - t]).scale(ft);
        }
    }
    Ok((0..=size).map(|j| acc.coeff(j)).collect())
}

/// `Σ_t f_t²/B(N,t)` against `Σ_j c_j² (N+1)·B(j+1, N−j+1) / (pq)ʲ`,
/// the Beta integral standing in for `C(N,j)^{−1}`.
pub fn parseval_check(f: &Poly, size: usize, p: &BigRational) -> Result<(BigRational, BigRational)> {
    let c = expansion_coeffs(f, size, p)?;
    let q = BigRational::one() - p;
    let pq = p * &q;
    let lhs: BigRational = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(t, ft)| {
            let b = BigRational::from_integer(BigInt::from(binomial(size as u64, t as i64)))
                * num_traits::pow(p.clone(), t)
                * num_traits::pow(q.clone(), size - t);
            ft * ft / b
        })
        .sum();
    let rhs: BigRational = c
        .iter()
        .enumerate()
        .map(|(j, cj)| cj * cj * beta_scaled(j, size) / num_traits::pow(pq.clone(), j))
        .sum();
    Ok((lhs, rhs))
}

/// `(N+1) ∫₀^∞ u^j (1+u)^{−N−2} du = (N+1) j! (N−j)! / (N+1)!`.
fn beta_scaled(j: usize, size: usize) -> BigRational {
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |a, i| a * i);
    BigRational::new(fact(j) * fact(size - j) * (size + 1), fact(size + 1))
}

/// The circle mean `J(f,N;r)` by the trapezoid rule, exact up to rounding
/// once the node count exceeds `2N`.
pub fn parseval_integral(f: &Poly, size: usize, p: f64, r: f64) -> Result<f64> {
    check_degree(f, size)?;
    let q = 1.0 - p;
    let fc: Vec<f64> = f.coeffs().iter().map(crate::arith::to_f64).collect();
    let nodes = 2 * size + 2;
    let mut acc = 0.0;
    for k in 0..nodes {
        let th = std::f64::consts::TAU * k as f64 / nodes as f64;
        let (s, c) = th.sin_cos();
        let den = (1.0 - p * r * c, -p * r * s);
        let num = (1.0 + q * r * c, q * r * s);
        // Σ f_t num^t den^{N−t}
        let mut val = (0.0, 0.0);
        for (t, ft) in fc.iter().enumerate() {
            let term = cmul(cpow(num, t), cpow(den, size - t));
            val.0 += ft * term.0;
            val.1 += ft * term.1;
        }
        acc += val.0 * val.0 + val.1 * val.1;
    }
    Ok(acc / nodes as f64)
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cpow(z: (f64, f64), k: usize) -> (f64, f64) {
    (0..k).fold((1.0, 0.0), |acc, _| cmul(acc, z))
}

/// Square of `Σ_{j≥2} (λ−λ_j) 2^{−(λ−λ_j+1)/2} √((λ+1)/((λ_j+2)(λ_j+1)))`,
/// a majorant of `χ²(X_n, Y_λ)`.
pub fn chi2_upper_bound(n: &BigUint) -> Result<f64> {
    let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)?;
    let l = lambda as f64;
    let s: f64 = binary_powers(n)
        .iter()
        .skip(1)
        .map(|&lj| {
            let d = (lambda - lj) as f64;
            let lj = lj as f64;
            d * 2f64.powf(-(d + 1.0) / 2.0) * ((l + 1.0) / ((lj + 2.0) * (lj + 1.0))).sqrt()
        })
        .sum();
    Ok(s * s)
}

/// `PGF(X_n) − ((1+z)/2)^λ` as a polynomial of degree `λ`.
pub fn chi2_test_polynomial(n: &BigUint) -> Result<Poly> {
    let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)?;
    let pgf = crate::dist::pgf_closed_form(n, 2)?;
    let half = BigRational::new(1.into(), 2.into());
    Ok(&pgf - &Poly::binomial_power(&half, &half, lambda))
}

/// Exact `χ²(X_n, Y_λ)` routed through the Parseval identity.
pub fn chi2_via_parseval(n: &BigUint) -> Result<BigRational> {
    let f = chi2_test_polynomial(n)?;
    let lambda = floor_log2(n).ok_or(Error::EmptyDistribution)?;
    let half = BigRational::new(1.into(), 2.into());
    Ok(parseval_check(&f, lambda, &half)?.1)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::dist::{binomial_pmf, chi2_exact, pmf_mixture};
    use proptest::prelude::*;

    #[test]
    fn small_tables() {
        let k = krawtchouk_table(1, &rat(1, 2)).unwrap();
        assert_eq!(k.get(0, 0), &rat(1, 1));
        assert_eq!(k.get(1, 0), &rat(-1, 2));
        assert_eq!(k.get(0, 1), &rat(1, 1));
        assert_eq!(k.get(1, 1), &rat(1, 2));
        let k = krawtchouk_table(2, &rat(1, 2)).unwrap();
        assert_eq!(k.inner(1, 1), rat(1, 2));
        assert!(krawtchouk_table(3, &rat(1, 1)).is_err());
        assert!(krawtchouk_table(MAX_TABLE_SIZE + 1, &rat(1, 2)).is_err());
    }

    #[test]
    fn orthogonality() {
        for p in [rat(1, 2), rat(1, 3), rat(3, 4)] {
            for size in [0usize, 1, 5, 12] {
                let k = krawtchouk_table(size, &p).unwrap();
                assert!((0..=size).all(|t| k.get(0, t).is_one()));
                assert_eq!(k.orthogonality_violation(), None);
            }
        }
    }

    #[test]
    fn coefficient_examples() {
        let z = Poly::monomial(1);
        assert_eq!(expansion_coeffs(&z, 1, &rat(1, 2)).unwrap(), vec![rat(1, 1), rat(1, 2)]);
        let one = Poly::constant(rat(1, 1));
        assert_eq!(
            expansion_coeffs(&one, 3, &rat(1, 3)).unwrap(),
            vec![rat(1, 1), rat(-1, 1), rat(1, 3), rat(-1, 27)]
        );
        assert!(matches!(
            expansion_coeffs(&Poly::monomial(3), 2, &rat(1, 2)),
            Err(Error::Degree { degree: 3, n: 2 })
        ));
        assert_eq!(parseval_check(&z, 1, &rat(1, 2)).unwrap(), (rat(2, 1), rat(2, 1)));
        let (l, r) = parseval_check(&Poly::zero(), 4, &rat(1, 3)).unwrap();
        assert!(l.is_zero() && r.is_zero());
    }

    #[test]
    fn chi2_at_twelve() {
        let n = BigUint::from(12u32);
        let f = chi2_test_polynomial(&n).unwrap().scale(&rat(12, 1));
        let (l, r) = parseval_check(&f, 3, &rat(1, 2)).unwrap();
        assert_eq!(l, rat(144, 27));
        assert_eq!(l, r);
        assert_eq!(chi2_via_parseval(&n).unwrap(), rat(1, 27));
        assert!((chi2_upper_bound(&n).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(chi2_upper_bound(&BigUint::from(1u32 << 10)).unwrap(), 0.0);
    }

    #[test]
    fn bound_dominates_exact() {
        for n in 2u32..3000 {
            let n = BigUint::from(n);
            let lambda = floor_log2(&n).unwrap();
            let exact = chi2_exact(&pmf_mixture(&n).unwrap(), &binomial_pmf(lambda)).unwrap();
            let e = crate::arith::to_f64(&exact);
            assert!(e <= chi2_upper_bound(&n).unwrap() * (1.0 + 1e-12), "n = {n}");
            assert!(e * lambda as f64 <= 3.0);
        }
    }

    #[test]
    fn circle_mean_matches_sum() {
        let f = Poly::from_ints([3, -1, 4, 1, -5]);
        let p = rat(1, 3);
        let c = expansion_coeffs(&f, 6, &p).unwrap();
        for r in [0.5f64, 1.0, 1.7] {
            let sum: f64 = c
                .iter()
                .enumerate()
                .map(|(j, cj)| crate::arith::to_f64(cj).powi(2) * r.powi(2 * j as i32))
                .sum();
            let j = parseval_integral(&f, 6, 1.0 / 3.0, r).unwrap();
            assert!((j - sum).abs() <= 1e-10 * sum.max(1.0));
        }
    }

    fn small_poly(size: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-20i64..=20, 1i64..=6), 0..=size + 1)
            .prop_map(|v| Poly::new(v.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn parseval_and_projection(f in small_poly(9), pi in 0usize..3) {
            let p = [rat(1, 2), rat(1, 3), rat(3, 4)][pi].clone();
            let k = krawtchouk_table(9, &p).unwrap();
            let (l, r) = parseval_check(&f, 9, &p).unwrap();
            prop_assert_eq!(&l, &r);
            prop_assert_eq!(k.parseval(&f).unwrap(), (l, r));
            let b = k.projection(&f).unwrap();
            let c = expansion_coeffs(&f, 9, &p).unwrap();
            for j in 0..=9 {
                prop_assert_eq!(&c[j], &(&b[j] * k.norm(j)));
            }
            let back = k.synthesize(&b);
            for (t, v) in back.iter().enumerate().take(10) {
                prop_assert_eq!(v, &(f.coeff(t) / k.weight(t)));
            }
        }
    }
}
