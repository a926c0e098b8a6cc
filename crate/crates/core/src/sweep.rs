//! Parameter sweeps over `n`, evaluated in parallel and returned in `n`-order.

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bigfloat::MIN_PRECISION;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepMode {
    Linear { step: u64 },
    /// Every `n` while an octave has at most `per_octave` members, else
    /// `per_octave` evenly spaced points plus both octave ends.
    DyadicDense { per_octave: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub start: u64,
    pub end: u64,
    pub mode: StepMode,
    pub q: u64,
    pub m: usize,
    pub system: String,
    pub output: Option<PathBuf>,
    pub precision: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            start: 1,
            end: 1 << 10,
            mode: StepMode::Linear { step: 1 },
            q: 2,
            m: 1,
            system: "binary".into(),
            output: None,
            precision: crate::bigfloat::DEFAULT_PRECISION,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.start < 1 || self.end < self.start {
            return Err(Error::Contract(format!(
                "sweep range {}..={} is empty or starts below 1",
                self.start, self.end
            )));
        }
        if self.precision < MIN_PRECISION {
            return Err(Error::Contract(format!(
                "precision {} is below {MIN_PRECISION} bits",
                self.precision
            )));
        }
        if self.q < 2 {
            return Err(Error::InvalidBase(self.q));
        }
        match self.mode {
            StepMode::Linear { step: 0 } | StepMode::DyadicDense { per_octave: 0 } => {
                Err(Error::Contract("sweep step must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    /// The sampled `n`, increasing and without repeats.
    pub fn points(&self) -> Result<Vec<u64>> {
        self.validate()?;
        Ok(match self.mode {
            StepMode::Linear { step } => (self.start..=self.end).step_by(step as usize).collect(),
            StepMode::DyadicDense { per_octave } => dyadic_dense(self.start, self.end, per_octave),
        })
    }
}

fn dyadic_dense(start: u64, end: u64, per_octave: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 63 - start.leading_zeros();
    loop {
        let lo = (1u64 << k).max(start);
        let hi = if k == 63 { u64::MAX } else { (1u64 << (k + 1)) - 1 }.min(end);
        if lo > end {
            break;
        }
        let width = hi - lo + 1;
        if width <= per_octave {
            out.extend(lo..=hi);
        } else {
            out.extend((0..per_octave).map(|i| lo + (width - 1) * i / (per_octave - 1).max(1)));
            out.push(hi);
        }
        if hi == end || k == 63 {
            break;
        }
        k += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Counts finished items across worker threads.
#[derive(Debug, Default)]
pub struct Progress(AtomicU64);

impl Progress {
    pub fn tick(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }

    pub fn done(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

/// Maps `f` over `items` on `jobs` threads (`0` = all cores), keeping order.
pub fn par_map<T, U, F>(jobs: usize, items: &[T], progress: Option<&Progress>, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
    pool.install(|| {
        items
            .par_iter()
            .map(|x| {
                let r = f(x);
                if let Some(p) = progress {
                    p.tick();
                }
                r
            })
            .collect()
    })
}

/// `count` integers log-uniform in `[2^lo, 2^hi]`, sorted.
pub fn log_uniform(lo: u32, hi: u32, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<u64> = (0..count)
        .map(|_| {
            let e: f64 = rng.gen_range(lo as f64..=hi as f64);
            (2f64.powf(e) as u64).clamp(1u64 << lo, 1u64 << hi)
        })
        .collect();
    v.sort_unstable();
    v
}

/// Integers `2^λ + 2^{λ−d} + r` with `r < 2^{λ−d}` random, for every
/// `λ ≤ max_lambda` and `min_gap ≤ d ≤ λ`.
pub fn gap_samples(max_lambda: u32, min_gap: u32, per_cell: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vec::new();
    for lambda in min_gap..=max_lambda {
        for d in min_gap..=lambda {
            let second = lambda - d;
            for _ in 0..per_cell {
                let tail = if second == 0 { 0 } else { rng.gen_range(0..1u64 << second) };
                v.push((1u64 << lambda) + (1u64 << second) + tail);
            }
        }
    }
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_sets() {
        let cfg = SweepConfig {
            start: 3,
            end: 20,
            mode: StepMode::Linear { step: 4 },
            ..Default::default()
        };
        assert_eq!(cfg.points().unwrap(), vec![3, 7, 11, 15, 19]);
        let dense = SweepConfig {
            start: 1,
            end: 1 << 12,
            mode: StepMode::DyadicDense { per_octave: 64 },
            ..Default::default()
        };
        let p = dense.points().unwrap();
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert!(p.contains(&127) && p.contains(&128) && p.contains(&4095) && p.contains(&4096));
        assert!(p.len() < 64 * 14);
        let bad = SweepConfig { start: 0, ..Default::default() };
        assert!(bad.points().is_err());
        let low = SweepConfig { precision: 32, ..Default::default() };
        assert!(low.validate().is_err());
    }

    #[test]
    fn ordered_parallel_map() {
        let items: Vec<u64> = (0..10_000).collect();
        let progress = Progress::default();
        let out = par_map(4, &items, Some(&progress), |&x| Ok(x * x)).unwrap();
        assert_eq!(out, items.iter().map(|x| x * x).collect::<Vec<_>>());
        assert_eq!(progress.done(), 10_000);
        let failed = par_map(2, &items, None, |&x| {
            if x == 77 { Err(Error::Numeric("boom".into())) } else { Ok(x) }
        });
        assert!(failed.is_err());
    }

    #[test]
    fn samplers() {
        let a = log_uniform(10, 20, 1000, 7);
        assert_eq!(a, log_uniform(10, 20, 1000, 7));
        assert!(a.iter().all(|&n| (1 << 10..=1 << 20).contains(&n)));
        let g = gap_samples(12, 8, 2, 1);
        for n in g {
            let lambda = 63 - n.leading_zeros();
            let rest = n - (1 << lambda);
            let second = 63 - rest.leading_zeros();
            assert!(lambda - second >= 8);
        }
    }
}
