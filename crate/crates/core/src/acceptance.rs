//! The acceptance suite: eleven pass/fail criteria with pinned tolerances.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{rat, to_f64};
use crate::digits::mean_exact;
use crate::dist::{
    binomial_pmf, chen_shao_bound, chen_shao_normal, chi2_exact, dtv_to_binomial, mixture_counts,
    pgf_counts, pmf_mixture, BruteForceCounts, ExactPmf,
};
use crate::error::{Error, Result};
use crate::expansion::{a_coeffs_explicit, dtv_asymptotic, hermite_constant, l1_residual, gap_ratio, ResidualRange};
use crate::figures::{figure_csv, FigureOptions};
use crate::krawtchouk::{chi2_upper_bound, krawtchouk_table};
use crate::numeration::{code_pmf, gray_weight, CodingSystem};
use crate::periodic::{f1_eval, f_eval, variance_fluctuation, variance_fluctuation_log2, DyadicPoint};
use crate::poly::Poly;
use crate::stein::{
    g_uniform_bound, half_line, increment_violation, max_abs_g, mean_correction_scale, stein_mean_correction,
    stein_residual, stein_solve,
};
use crate::sweep::{gap_samples, log_uniform, par_map, StepMode, SweepConfig};

pub const CRITERIA: u8 = 11;

/// `γ(1..=64)` as plotted.
pub const GRAY_PLOT: [u64; 64] = [
    1, 2, 1, 2, 3, 2, 1, 2, 3, 4, 3, 2, 3, 2, 1, 2, 3, 4, 3, 4, 5, 4, 3, 2, 3, 4, 3, 2, 3, 2, 1, 2,
    3, 4, 3, 4, 5, 4, 3, 4, 5, 6, 5, 4, 5, 4, 3, 2, 3, 4, 3, 4, 5, 4, 3, 2, 3, 4, 3, 2, 3, 2, 1, 2,
];

const FIGURE4: &str = include_str!("../fixtures/figure4.csv");
const FIGURE13: &str = include_str!("../fixtures/figure13.csv");

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.1}s of {}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "three-way pmf equality",
        2 => "mean fluctuation identity",
        3 => "dtv minus main term",
        4 => "l1 expansion residuals",
        5 => "dtv order for a large leading gap",
        6 => "Delange identity",
        7 => "variance fluctuation range",
        8 => "Stein solutions and bounds",
        9 => "Krawtchouk orthogonality, Parseval, chi-square",
        10 => "coding systems",
        11 => "figure goldens",
        _ => "unknown",
    }
}

fn budget(id: u8) -> Duration {
    Duration::from_secs(match id {
        3 | 4 => 600,
        5 | 7 | 9 => 300,
        10 => 180,
        11 => 60,
        _ => 120,
    })
}

/// Runs one criterion on `jobs` threads (`0` = all cores).
pub fn run(id: u8, jobs: usize) -> Outcome {
    let start = Instant::now();
    let result = match id {
        1 => pmf_equality(),
        2 => mean_identity(jobs),
        3 => dtv_residual(jobs),
        4 => l1_expansion(jobs),
        5 => leading_gap(jobs),
        6 => delange(jobs),
        7 => variance_range(jobs),
        8 => stein(jobs),
        9 => krawtchouk(jobs),
        10 => coding(jobs),
        11 => goldens(jobs),
        _ => Err(Error::Contract(format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (ok, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    let budget = budget(id);
    Outcome {
        id,
        title: title(id),
        passed: ok && elapsed <= budget,
        detail,
        elapsed,
        budget,
    }
}

pub fn run_all(jobs: usize) -> Vec<Outcome> {
    (1..=CRITERIA).map(|id| run(id, jobs)).collect()
}

type Verdict = Result<(bool, String)>;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn lambda(n: u64) -> u32 {
    63 - n.leading_zeros()
}

fn pmf_equality() -> Verdict {
    const LIMIT: u64 = 100_000;
    for (n, counts) in BruteForceCounts::new(2)?.take(LIMIT as usize) {
        let nn = big(n);
        let counts: Vec<BigUint> = counts.into_iter().map(BigUint::from).collect();
        let brute = ExactPmf::from_counts(0, &counts, &nn)?;
        let mixture = ExactPmf::from_counts(0, &mixture_counts(&nn), &nn)?;
        let pgf = ExactPmf::from_counts(0, &pgf_counts(&nn, 2)?, &nn)?;
        if brute != mixture || brute != pgf {
            return Ok((false, format!("routes disagree at n = {n}")));
        }
    }
    Ok((true, format!("exact agreement for n ≤ {LIMIT}")))
}

fn chunks(lo: u64, hi: u64, size: u64) -> Vec<(u64, u64)> {
    (lo..=hi)
        .step_by(size as usize)
        .map(|a| (a, (a + size - 1).min(hi)))
        .collect()
}

fn mean_identity(jobs: usize) -> Verdict {
    const LIMIT: u64 = 1_000_000;
    let bad = par_map(jobs, &chunks(1, LIMIT, 10_000), None, |&(a, b)| {
        for n in a..=b {
            let nn = big(n);
            let f = f_eval(&DyadicPoint::log2_of(n))?;
            let want = mean_exact(&nn, 2)? - rat(lambda(n) as i64, 2);
            if f.exact() != Some(&want) {
                return Ok(Some(n));
            }
        }
        Ok(None)
    })?;
    Ok(match bad.into_iter().flatten().next() {
        Some(n) => (false, format!("mismatch at n = {n}")),
        None => (true, format!("exact for n ≤ {LIMIT}")),
    })
}

fn dtv_residual(jobs: usize) -> Verdict {
    let cfg = SweepConfig {
        start: 1 << 5,
        end: 1 << 20,
        mode: StepMode::DyadicDense { per_octave: 1 << 13 },
        ..Default::default()
    };
    let ns = cfg.points()?;
    let res = par_map(jobs, &ns, None, |&n| {
        let nn = big(n);
        Ok(to_f64(&dtv_to_binomial(&nn)?) - dtv_asymptotic(&nn)?)
    })?;
    let (lo, hi) = (-0.01, 0.23);
    let mut worst_lo = (f64::INFINITY, 0);
    let mut worst_hi = (f64::NEG_INFINITY, 0);
    let mut worst_scaled = (0.0f64, 0);
    for (&n, &r) in ns.iter().zip(&res) {
        if r < worst_lo.0 {
            worst_lo = (r, n);
        }
        if r > worst_hi.0 {
            worst_hi = (r, n);
        }
        let s = lambda(n) as f64 * r.abs();
        if s > worst_scaled.0 {
            worst_scaled = (s, n);
        }
    }
    let ok = worst_lo.0 >= lo && worst_hi.0 <= hi && worst_scaled.0 <= 5.0;
    Ok((
        ok,
        format!(
            "{} points; residual in [{:.5} at n={}, {:.5} at n={}], need [{lo}, {hi}]; max λ|res| = {:.3} at n={} (≤ 5)",
            ns.len(),
            worst_lo.0,
            worst_lo.1,
            worst_hi.0,
            worst_hi.1,
            worst_scaled.0,
            worst_scaled.1
        ),
    ))
}

fn l1_expansion(jobs: usize) -> Verdict {
    let ns = log_uniform(10, 20, 1000, 0x5eed_0004);
    let h = [hermite_constant(1)?, hermite_constant(2)?];
    let stats = par_map(jobs, &ns, None, |&n| {
        let nn = big(n);
        let a = a_coeffs_explicit(&nn, 2)?;
        let l = lambda(n) as f64;
        let mut out = [0.0; 2];
        for m in 1..=2usize {
            let l1 = to_f64(&l1_residual(&nn, m, ResidualRange::Support)?);
            let main = h[m - 1] * to_f64(&a[m]).abs() / l.powf(m as f64 / 2.0);
            out[m - 1] = l.powf((m as f64 + 1.0) / 2.0) * (l1 - main).abs();
        }
        Ok(out)
    })?;
    let c1 = stats.iter().map(|s| s[0]).fold(0.0, f64::max);
    let c2 = stats.iter().map(|s| s[1]).fold(0.0, f64::max);
    Ok((
        c1 <= 20.0 && c2 <= 20.0,
        format!("{} samples in [2^10, 2^20]; constants m=1: {c1:.3}, m=2: {c2:.3} (≤ 20)", ns.len()),
    ))
}

fn leading_gap(jobs: usize) -> Verdict {
    let ns = gap_samples(24, 8, 8, 0x5eed_0005);
    let ratios = par_map(jobs, &ns, None, |&n| gap_ratio(&big(n)))?;
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((
        lo >= 0.05 && hi <= 20.0,
        format!("{} samples, λ ≤ 24, gap ≥ 8; ratio in [{lo:.4}, {hi:.4}] (need [0.05, 20])", ns.len()),
    ))
}

fn delange(jobs: usize) -> Verdict {
    let mut worst = 0.0f64;
    for q in [2u64, 3, 10] {
        let ns: Vec<u64> = (1..=10_000).collect();
        let errs = par_map(jobs, &ns, None, |&n| {
            let nn = big(n);
            let x = (n as f64).ln() / (q as f64).ln();
            let f1 = f1_eval(x, q, 40)?.to_f64();
            let mean = to_f64(&mean_exact(&nn, q)?);
            Ok((f1 + (q as f64 - 1.0) / 2.0 * x - mean).abs())
        })?;
        worst = errs.into_iter().fold(worst, f64::max);
    }
    Ok((worst <= 1e-9, format!("max error {worst:.3e} over q ∈ {{2,3,10}}, n ≤ 10^4 (≤ 1e-9)")))
}

fn variance_range(jobs: usize) -> Verdict {
    let parts = par_map(jobs, &chunks(2, 1 << 20, 1 << 14), None, |&(a, b)| {
        let mut lo = (f64::INFINITY, 0);
        let mut hi = (f64::NEG_INFINITY, 0);
        let mut lo2 = f64::INFINITY;
        let mut hi2 = f64::NEG_INFINITY;
        for n in a..=b {
            let nn = big(n);
            let v = to_f64(&variance_fluctuation(&nn)?);
            if v < lo.0 {
                lo = (v, n);
            }
            if v > hi.0 {
                hi = (v, n);
            }
            let w = variance_fluctuation_log2(&nn)?;
            lo2 = lo2.min(w);
            hi2 = hi2.max(w);
        }
        Ok((lo, hi, lo2, hi2))
    })?;
    let lo = parts.iter().map(|p| p.0).fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
    let hi = parts.iter().map(|p| p.1).fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a });
    let lo2 = parts.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
    let hi2 = parts.iter().map(|p| p.3).fold(f64::NEG_INFINITY, f64::max);
    Ok((
        lo.0 >= -0.25 && hi.0 <= 0.05,
        format!(
            "V − λ/4 over [2, 2^20] spans [{:.5} at n={}, {:.5} at n={}] (need [-0.25, 0.05]); V − log₂n/4 spans [{lo2:.5}, {hi2:.5}]",
            lo.0, lo.1, hi.0, hi.1
        ),
    ))
}

fn stein(jobs: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for case in 0..200 {
        let lam = rng.gen_range(1..=64usize);
        let h: Vec<BigRational> = (0..=lam)
            .map(|_| if rng.gen_bool(0.5) { BigRational::one() } else { BigRational::zero() })
            .collect();
        let sol = stein_solve(lam, &h)?;
        if !stein_residual(&sol).is_zero() {
            return Ok((false, format!("nonzero residual in case {case} (λ = {lam})")));
        }
        if max_abs_g(&sol) > g_uniform_bound(lam)? {
            return Ok((false, format!("uniform bound fails in case {case} (λ = {lam})")));
        }
        if let Some(j) = increment_violation(&sol) {
            return Ok((false, format!("increment bound fails at j = {j}, case {case}")));
        }
    }
    let ns: Vec<u64> = log_uniform(10, 20, 300, 0x5eed_0088)
        .into_iter()
        .filter(|n| !n.is_power_of_two())
        .collect();
    let fits = par_map(jobs, &ns, None, |&n| {
        let nn = big(n);
        let lam = lambda(n) as usize;
        let scale = mean_correction_scale(&nn).expect("not a power of two");
        let (mut c, mut cf): (f64, f64) = (0.0, 0.0);
        for t in 0..lam as i64 {
            let mc = stein_mean_correction(&nn, &half_line(lam, t))?;
            c = c.max(to_f64(&mc.difference()).abs() / scale);
            cf = cf.max(to_f64(&mc.flipped_difference()).abs() / scale);
        }
        Ok((c, cf))
    })?;
    let (c, cf) = fits.into_iter().fold((0.0, 0.0), |(a, b), (x, y)| (f64::max(a, x), f64::max(b, y)));
    Ok((
        c <= 10.0,
        format!(
            "200 random solutions exact and within bounds; mean-correction constant {c:.3} over {} n (≤ 10), {cf:.3} with the leading sign flipped",
            ns.len()
        ),
    ))
}

fn random_poly(rng: &mut ChaCha8Rng, size: usize) -> Poly {
    let deg = rng.gen_range(0..=size);
    Poly::new(
        (0..=deg)
            .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=5)))
            .collect(),
    )
}

fn krawtchouk(jobs: usize) -> Verdict {
    let ps = [rat(1, 2), rat(1, 3), rat(3, 4)];
    let cells: Vec<(usize, usize)> = (0..=40).flat_map(|n| (0..3).map(move |p| (n, p))).collect();
    let bad = par_map(jobs, &cells, None, |&(size, pi)| {
        let fam = krawtchouk_table(size, &ps[pi])?;
        if let Some(pair) = fam.orthogonality_violation() {
            return Ok(Some(format!("orthogonality fails at N={size}, p={}, {pair:?}", ps[pi])));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009 ^ ((size as u64) << 8) ^ pi as u64);
        for _ in 0..100 {
            let f = random_poly(&mut rng, size);
            let (l, r) = fam.parseval(&f)?;
            if l != r {
                return Ok(Some(format!("Parseval fails at N={size}, p={}", ps[pi])));
            }
        }
        Ok(None)
    })?;
    if let Some(msg) = bad.into_iter().flatten().next() {
        return Ok((false, msg));
    }
    let worst = par_map(jobs, &chunks(2, 100_000, 2_000), None, |&(a, b)| {
        let mut scaled: f64 = 0.0;
        for n in a..=b {
            let nn = big(n);
            let lam = lambda(n) as usize;
            let exact = to_f64(&chi2_exact(&pmf_mixture(&nn)?, &binomial_pmf(lam))?);
            if exact > chi2_upper_bound(&nn)? * (1.0 + 1e-12) {
                return Err(Error::Numeric(format!("chi-square majorant fails at n = {n}")));
            }
            scaled = scaled.max(lam as f64 * exact);
        }
        Ok(scaled)
    });
    match worst {
        Err(Error::Numeric(msg)) => Ok((false, msg)),
        Err(e) => Err(e),
        Ok(v) => {
            let s = v.into_iter().fold(0.0, f64::max);
            Ok((
                s <= 3.0,
                format!("N ≤ 40 × 3 p exact, 100 polynomials each; chi2 ≤ majorant for n ≤ 10^5; max λ·chi2 = {s:.4} (≤ 3)"),
            ))
        }
    }
}

fn coding(jobs: usize) -> Verdict {
    const LIMIT: u64 = 100_000;
    let mut systems = Vec::new();
    for mut s in [CodingSystem::binary(), CodingSystem::gray(), CodingSystem::transcomplement()] {
        if let Err(e) = s.verify_halving(10_000) {
            return Ok((false, format!("{} fails halving: {e:?}", s.name())));
        }
        systems.push(s.certified(LIMIT / 2)?);
    }
    if let Some(n) = (1..=64u64).find(|&n| gray_weight(n) != GRAY_PLOT[n as usize - 1]) {
        return Ok((false, format!("gray weight differs from the plot at n = {n}")));
    }
    let bad = par_map(jobs, &systems, None, |sys| {
        let mut counts: Vec<BigUint> = Vec::new();
        for j in 0..LIMIT {
            let w = sys.weight(j) as usize;
            if w >= counts.len() {
                counts.resize(w + 1, BigUint::zero());
            }
            counts[w] += 1u32;
            let n = big(j + 1);
            if ExactPmf::from_counts(0, &counts, &n)? != code_pmf(sys, &n)? {
                return Ok(Some(format!("{}: closed form differs at n = {}", sys.name(), j + 1)));
            }
        }
        Ok(None)
    })?;
    if let Some(msg) = bad.into_iter().flatten().next() {
        return Ok((false, msg));
    }
    let margin = par_map(jobs, &chunks(2, LIMIT, 2_000), None, |&(a, b)| {
        let mut worst = (f64::INFINITY, 0);
        for n in a..=b {
            let nn = big(n);
            let m = chen_shao_bound(&nn)? - chen_shao_normal(&nn)?;
            if m < worst.0 {
                worst = (m, n);
            }
        }
        Ok(worst)
    })?;
    let worst = margin.into_iter().fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
    Ok((
        worst.0 >= 0.0,
        format!(
            "halving certified to 10^4; plot values match; closed forms exact for n ≤ 10^5; Kolmogorov bound slack ≥ {:.4} (n = {})",
            worst.0, worst.1
        ),
    ))
}

fn goldens(jobs: usize) -> Verdict {
    let opts = FigureOptions { max_lambda: None, jobs };
    let four = figure_csv(4, &opts)?;
    let thirteen = figure_csv(13, &opts)?;
    let endpoints = four
        .lines()
        .skip(1)
        .filter(|l| l.split(',').next().and_then(|n| n.parse::<u64>().ok()).is_some_and(u64::is_power_of_two))
        .all(|l| l.ends_with(",0"));
    let ok = four == FIGURE4 && thirteen == FIGURE13 && endpoints;
    Ok((
        ok,
        format!(
            "figure 4 {}, figure 13 {}, sawtooth endpoints {}",
            if four == FIGURE4 { "identical" } else { "differs" },
            if thirteen == FIGURE13 { "identical" } else { "differs" },
            if endpoints { "exactly 0" } else { "nonzero" }
        ),
    ))
}
