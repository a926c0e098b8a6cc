//! Probabilists' Hermite polynomials and adaptive Gauss–Kronrod quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// `∫_a^b f` by global adaptive G7–K15: the interval with the largest error
/// estimate is bisected until the summed estimate meets `rel_tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 4000;
    let mut parts = vec![(a, b, kronrod(&f, a, b))];
    loop {
        let total: f64 = parts.iter().map(|p| p.2 .0).sum();
        let err: f64 = parts.iter().map(|p| p.2 .1).sum();
        if err <= rel_tol * total.abs() || err <= 64.0 * f64::EPSILON * total.abs() || err == 0.0 {
            return Ok(total);
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Numeric(format!(
                "quadrature on [{a}, {b}] stalled at error {err:e}"
            )));
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        parts.push((lo, mid, kronrod(&f, lo, mid)));
        parts.push((mid, hi, kronrod(&f, mid, hi)));
    }
}

/// `He_m(x)` from `He_{k+1} = x·He_k − k·He_{k−1}`.
pub fn hermite(m: usize, x: f64) -> f64 {
    hermite_pair(m, x).0
}

/// `(He_m(x), He_{m−1}(x))`, with `He_{−1} = 0`.
fn hermite_pair(m: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..m {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// The `m` real roots of `He_m`, increasing, to about `1e−13`.
pub fn hermite_roots(m: usize) -> Vec<f64> {
    if m == 0 {
        return Vec::new();
    }
    let bound = (4.0 * m as f64 + 2.0).sqrt() + 1.0;
    let step = (0.05 / (m as f64).sqrt()).min(1e-2);
    let mut roots = Vec::with_capacity(m);
    let mut x = -bound;
    let mut fx = hermite(m, x);
    while x < bound && roots.len() < m {
        let y = x + step;
        let fy = hermite(m, y);
        if fy == 0.0 {
            roots.push(y);
            x = y + step;
            fx = hermite(m, x);
            continue;
        }
        if fx.signum() != fy.signum() {
            let (mut lo, mut hi) = (x, y);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if hermite(m, mid).signum() == fx.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x = y;
        fx = fy;
    }
    roots
}

fn gauss_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `E|He_m(Z)|` for standard normal `Z`, by quadrature split at the roots.
pub fn hermite_abs_mean(m: usize) -> Result<f64> {
    let roots = hermite_roots(m);
    if roots.len() != m {
        return Err(Error::Numeric(format!("found {} of {m} Hermite roots", roots.len())));
    }
    let cut = roots.last().map_or(0.0, |r| r.abs()) + 40.0;
    let mut edges = vec![-cut];
    edges.extend(roots.iter().copied());
    edges.push(cut);
    let f = |x: f64| hermite(m, x).abs() * gauss_density(x);
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += integrate(f, w[0], w[1], 1e-13)?;
    }
    Ok(total)
}

/// Same quantity from `∫_a^b He_m φ = [−He_{m−1} φ]_a^b` between roots.
pub fn hermite_abs_mean_closed(m: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    hermite_roots(m)
        .iter()
        .map(|&r| 2.0 * hermite_pair(m, r).1.abs() * gauss_density(r))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials() {
        assert_eq!(hermite(0, 3.0), 1.0);
        assert_eq!(hermite(2, 3.0), 8.0);
        assert_eq!(hermite(3, 2.0), 2.0);
        let r = hermite_roots(2);
        assert!((r[0] + 1.0).abs() < 1e-13 && (r[1] - 1.0).abs() < 1e-13);
        let r = hermite_roots(3);
        assert!((r[2] - 3f64.sqrt()).abs() < 1e-13 && r[1].abs() < 1e-13);
    }

    #[test]
    fn gauss_integrals() {
        let v = integrate(gauss_density, -40.0, 40.0, 1e-14).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
        assert!((hermite_abs_mean(1).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-13);
        let e2 = 4.0 * gauss_density(1.0);
        assert!((hermite_abs_mean(2).unwrap() - e2).abs() < 1e-13);
    }

    #[test]
    fn routes_agree() {
        for m in 0..=20 {
            let q = hermite_abs_mean(m).unwrap();
            let c = hermite_abs_mean_closed(m);
            assert!(((q - c) / c).abs() < 1e-10, "m={m}: {q} vs {c}");
        }
    }
}
