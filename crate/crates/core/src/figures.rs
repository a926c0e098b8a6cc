//! CSV tables behind the published plots. Output is deterministic: fixed
//! header, increasing `n`, rationals as `p/q`, reals to 12 significant digits.

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::arith::{fmt_rational, fmt_sig12, frac_log2, log2_f64, rat, to_f64};
use crate::dist::dtv_to_binomial;
use crate::digits::mean_exact;
use crate::error::{Error, Result};
use crate::expansion::dtv_asymptotic;
use crate::numeration::{g1_g2, gray_weight, CodingSystem};
use crate::periodic::{f1_eval, f2corr_eval, f_eval, variance_fluctuation_log2, DyadicPoint};
use crate::sweep::par_map;

pub const FIGURES: [u32; 9] = [2, 4, 5, 8, 10, 11, 13, 14, 15];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FigureOptions {
    /// Sweep `n ≤ 2^max_lambda`, or sample one period at `n ∈ [2^L, 2^{L+1}]`.
    pub max_lambda: Option<u32>,
    pub jobs: usize,
}


/// Default resolution per figure.
pub fn default_lambda(id: u32) -> u32 {
    match id {
        2 | 4 => 9,
        10 => 12,
        13 => 6,
        _ => 10,
    }
}

/// The largest resolution accepted, keeping table sizes in check.
pub const MAX_FIGURE_LAMBDA: u32 = 22;

pub fn figure_csv(id: u32, opts: &FigureOptions) -> Result<String> {
    let l = opts.max_lambda.unwrap_or_else(|| default_lambda(id));
    if l == 0 || l > MAX_FIGURE_LAMBDA {
        return Err(Error::Contract(format!(
            "--max-lambda must lie in 1..={MAX_FIGURE_LAMBDA}"
        )));
    }
    let jobs = opts.jobs;
    match id {
        2 => sweep(l, jobs, "n,log2n,dtv_minus_main_term", |n| {
            let exact = to_f64(&dtv_to_binomial(n)?);
            Ok(vec![fmt_sig12(log2_f64(n)), fmt_sig12(exact - dtv_asymptotic(n)?)])
        }),
        4 => sweep(l, jobs, "n,log2n,half_log2n_minus_mean", |n| {
            Ok(vec![fmt_sig12(log2_f64(n)), fmt_sig12(half_log2_minus_mean(n)?)])
        }),
        5 => period(l, jobs, "n,x,minus_f1", |_, x| {
            Ok(vec![fmt_sig12(-f1_eval(x, 2, 48)?.to_f64())])
        }),
        8 => period(l, jobs, "n,x,minus_f2", |n, _| {
            Ok(vec![fmt_sig12(-variance_fluctuation_log2(n)?)])
        }),
        10 => period(l, jobs, "n,x,f,abs_f", |n, _| {
            let v = exact_value(f_eval(&DyadicPoint::log2_of(n.clone()))?)?;
            Ok(vec![fmt_rational(&v), fmt_sig12(to_f64(&v).abs())])
        }),
        11 => period(l, jobs, "n,x,f2,abs_f2", |n, _| {
            let v = exact_value(f2corr_eval(&DyadicPoint::log2_of(n.clone()))?)?;
            Ok(vec![fmt_rational(&v), fmt_sig12(to_f64(&v).abs())])
        }),
        13 => {
            let mut out = String::from("n,gamma\n");
            for n in 1..=1u64 << l {
                out.push_str(&format!("{n},{}\n", gray_weight(n)));
            }
            Ok(out)
        }
        14 | 15 => {
            let gray = CodingSystem::gray().certified(1u64 << l)?;
            let head = if id == 14 { "n,x,g1" } else { "n,x,g2" };
            period(l, jobs, head, move |n, x| {
                let fl = g1_g2(&gray, n)?;
                let g = if id == 14 { &fl.g1 } else { &fl.g2 };
                Ok(vec![fmt_sig12(g.eval(if x == 1.0 { 0.0 } else { x }))])
            })
        }
        _ => Err(Error::Contract(format!(
            "no figure {id}; choose one of {FIGURES:?}"
        ))),
    }
}

fn exact_value(v: crate::periodic::PeriodicValue) -> Result<BigRational> {
    v.exact()
        .cloned()
        .ok_or_else(|| Error::Numeric("expected an exact value at log₂ n".into()))
}

/// `½ log₂ n − E(X_n)`: the rational `λ/2 − E(X_n)` plus `{log₂ n}/2`.
pub fn half_log2_minus_mean(n: &BigUint) -> Result<f64> {
    let lambda = crate::arith::floor_log2(n).ok_or(Error::EmptyDistribution)?;
    let gap = rat(lambda as i64, 2) - mean_exact(n, 2)?;
    Ok(to_f64(&gap) + frac_log2(n) / 2.0)
}

fn sweep<F>(l: u32, jobs: usize, header: &str, row: F) -> Result<String>
where
    F: Fn(&BigUint) -> Result<Vec<String>> + Sync + Send,
{
    let ns: Vec<u64> = (2..=1u64 << l).collect();
    let rows = par_map(jobs, &ns, None, |&n| row(&BigUint::from(n)))?;
    Ok(render(header, &ns, rows))
}

/// One period, `x = log₂ n − L` for `n ∈ [2^L, 2^{L+1}]`.
fn period<F>(l: u32, jobs: usize, header: &str, row: F) -> Result<String>
where
    F: Fn(&BigUint, f64) -> Result<Vec<String>> + Sync + Send,
{
    let ns: Vec<u64> = ((1u64 << l)..=(1u64 << (l + 1))).collect();
    let top = 1u64 << (l + 1);
    let rows = par_map(jobs, &ns, None, |&n| {
        let big = BigUint::from(n);
        let x = if n == top { 1.0 } else { frac_log2(&big) };
        let mut cells = vec![fmt_sig12(x)];
        cells.extend(row(&big, x)?);
        Ok(cells)
    })?;
    Ok(render(header, &ns, rows))
}

fn render(header: &str, ns: &[u64], rows: Vec<Vec<String>>) -> String {
    let mut out = String::with_capacity(ns.len() * 32);
    out.push_str(header);
    out.push('\n');
    for (n, cells) in ns.iter().zip(rows) {
        out.push_str(&n.to_string());
        for c in cells {
            out.push(',');
            out.push_str(&c);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(csv: &str) -> Vec<Vec<String>> {
        csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
    }

    #[test]
    fn sawtooth_endpoints() {
        let csv = figure_csv(4, &FigureOptions::default()).unwrap();
        assert!(csv.starts_with("n,log2n,half_log2n_minus_mean\n"));
        for r in rows(&csv) {
            let n: u64 = r[0].parse().unwrap();
            let v: f64 = r[2].parse().unwrap();
            if n.is_power_of_two() {
                assert_eq!(r[2], "0");
            }
            assert!((0.0..0.5).contains(&v), "n = {n}");
        }
    }

    #[test]
    fn gray_table() {
        let csv = figure_csv(13, &FigureOptions::default()).unwrap();
        let r = rows(&csv);
        assert_eq!(r.len(), 64);
        assert_eq!(r[18], vec!["19".to_string(), "3".to_string()]);
    }

    #[test]
    fn every_figure_renders() {
        for id in FIGURES {
            let opts = FigureOptions { max_lambda: Some(5), jobs: 2 };
            let csv = figure_csv(id, &opts).unwrap();
            let width = csv.lines().next().unwrap().split(',').count();
            assert!(csv.lines().skip(1).all(|l| l.split(',').count() == width), "{id}");
            assert_eq!(csv, figure_csv(id, &FigureOptions { jobs: 1, ..opts }).unwrap());
        }
        assert!(figure_csv(3, &FigureOptions::default()).is_err());
        assert!(figure_csv(2, &FigureOptions { max_lambda: Some(40), jobs: 0 }).is_err());
    }

    #[test]
    fn periodic_endpoints() {
        let opts = FigureOptions { max_lambda: Some(6), jobs: 0 };
        for id in [10, 11, 14] {
            let r = rows(&figure_csv(id, &opts).unwrap());
            let (first, last) = (&r[0], &r[r.len() - 1]);
            assert_eq!(first[1], "0");
            assert_eq!(last[1], "1");
            assert_eq!(first[2..], last[2..], "figure {id}");
        }
    }
}
