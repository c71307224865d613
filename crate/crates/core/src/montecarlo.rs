//! Seeded Monte Carlo estimates of the central moments of `X`.
//!
//! Sample `s` draws its matrix from a ChaCha8 generator seeded with `seed`
//! and switched to stream `s`, so the estimate does not depend on how samples
//! are split across threads. Samples are reduced to an exact histogram of `X`
//! and every moment is computed from it in rational arithmetic; floats appear
//! only in the final report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{rat_to_f64, BigRat};
use crate::error::{Error, Result};
use crate::gf2::{count_kernel_words, low_mask, WordBasis};
use crate::limits::Limits;
use crate::moments::EnsembleParams;
use crate::report::RationalJson;

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub params: EnsembleParams,
    pub k_max: u32,
    pub samples: u64,
    pub seed: u64,
    /// Thread count; has no effect on the result.
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McMoment {
    pub k: u32,
    /// Sample mean of `X^k`.
    pub raw_moment: f64,
    /// Sample mean of `(X - E X)^k`, with the exact mean.
    pub central_moment: f64,
    /// `central_moment` as an exact rational.
    pub central_exact: RationalJson,
    /// `central_moment / Var^{k/2}` with the exact variance.
    pub normalized: f64,
    /// `central_moment / V^{k/2}` with `V` the sample second central moment.
    pub normalized_empirical: f64,
    /// Standard error of `central_moment`.
    pub stderr: f64,
    pub stderr_normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub params: EnsembleParams,
    pub samples: u64,
    pub seed: u64,
    pub moments: Vec<McMoment>,
    /// `X` value -> number of samples.
    pub histogram: BTreeMap<u64, u64>,
}

/// Draws one matrix with i.i.d. uniform entries and returns `|L ∩ ker M|`.
pub fn sample_x<R: RngCore + ?Sized>(params: &EnsembleParams, rng: &mut R, limits: &Limits) -> Result<u64> {
    let n = params.n() as usize;
    let mask = low_mask(n);
    let mut basis = WordBasis::new();
    let mut rows = Vec::with_capacity(params.m() as usize);
    for _ in 0..params.m() {
        let row = rng.next_u64() & mask;
        let reduced = basis.reduce(row);
        if reduced != 0 {
            basis.insert(reduced);
            rows.push(reduced);
        }
    }
    // The independent reduced rows span the same row space, so the kernel is unchanged.
    let cols: Vec<u128> = (0..n)
        .map(|j| {
            rows.iter()
                .enumerate()
                .fold(0u128, |acc, (r, &row)| acc | (u128::from((row >> j) & 1) << r))
        })
        .collect();
    let x = count_kernel_words(&cols, rows.len(), params.i() as usize, limits)?;
    Ok(x as u64)
}

fn stream_rng(base: &ChaCha8Rng, index: u64) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_stream(index);
    rng
}

/// Runs `cfg.samples` independent draws and summarizes moments `1..=k_max`.
pub fn estimate(cfg: &McConfig, limits: &Limits) -> Result<McReport> {
    if cfg.samples < 2 {
        return Err(Error::invalid("at least two samples are needed for a standard error"));
    }
    if cfg.k_max == 0 || cfg.k_max > limits.max_k {
        return Err(Error::invalid(format!(
            "k_max={} must lie in 1..={}",
            cfg.k_max, limits.max_k
        )));
    }
    if cfg.workers == 0 {
        return Err(Error::invalid("workers must be positive"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let chunks = cfg.samples.div_ceil(CHUNK);
    let histogram = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| -> Result<BTreeMap<u64, u64>> {
                let mut hist = BTreeMap::new();
                for s in c * CHUNK..((c + 1) * CHUNK).min(cfg.samples) {
                    let x = sample_x(&cfg.params, &mut stream_rng(&base, s), limits)?;
                    *hist.entry(x).or_insert(0) += 1;
                }
                Ok(hist)
            })
            .try_reduce(BTreeMap::new, |mut a, b| {
                for (x, c) in b {
                    *a.entry(x).or_insert(0) += c;
                }
                Ok(a)
            })
    })?;
    Ok(summarize(&cfg.params, cfg.k_max, cfg.seed, histogram))
}

/// Moments `1..=k_max` of a histogram of `X` values.
pub fn summarize(params: &EnsembleParams, k_max: u32, seed: u64, histogram: BTreeMap<u64, u64>) -> McReport {
    let samples: u64 = histogram.values().sum();
    let total = BigInt::from(samples);
    let m = params.m();
    let class = BigInt::from(params.class_size());
    let var = params.variance();
    let var_f = rat_to_f64(&var);

    // centered values scaled by 2^m so they stay integral
    let centered: Vec<(BigInt, BigInt, BigInt)> = histogram
        .iter()
        .map(|(&x, &c)| (BigInt::from(x), (BigInt::from(x) << m) - &class, BigInt::from(c)))
        .collect();
    let power_sum = |f: &dyn Fn(&(BigInt, BigInt, BigInt)) -> BigInt| -> BigInt { centered.iter().map(f).sum() };
    let central = |k: u32| -> BigRat { BigRat::new(power_sum(&|(_, d, c)| d.pow(k) * c), &total << (m * k)) };
    let empirical_var = rat_to_f64(&central(2));

    let moments = (1..=k_max)
        .map(|k| {
            let raw = BigRat::new(power_sum(&|(x, _, c)| x.pow(k) * c), total.clone());
            let mean_k = central(k);
            let mean_2k = central(2 * k);
            // unbiased sample variance of the per-sample statistic (X - mu)^k
            let spread = (mean_2k - &mean_k * &mean_k) * BigRat::new(total.clone(), &total - 1);
            let stderr = (rat_to_f64(&spread) / samples as f64).max(0.0).sqrt();
            let half = var.pow((k / 2) as i32);
            let odd = if k % 2 == 1 { var_f.sqrt() } else { 1.0 };
            let normalized = rat_to_f64(&(&mean_k / &half)) / odd;
            let scale = rat_to_f64(&half) * odd;
            McMoment {
                k,
                raw_moment: rat_to_f64(&raw),
                central_moment: rat_to_f64(&mean_k),
                central_exact: RationalJson::from(&mean_k),
                normalized,
                normalized_empirical: rat_to_f64(&mean_k) / empirical_var.powf(f64::from(k) / 2.0),
                stderr,
                stderr_normalized: stderr / scale,
            }
        })
        .collect();
    McReport {
        params: *params,
        samples,
        seed,
        moments,
        histogram,
    }
}

impl McReport {
    /// Header `k,raw_moment,central_moment,normalized,stderr`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,raw_moment,central_moment,normalized,stderr\n");
        for m in &self.moments {
            let _ = writeln!(
                out,
                "{},{:e},{:e},{:e},{:e}",
                m.k, m.raw_moment, m.central_moment, m.normalized, m.stderr
            );
        }
        out
    }

    pub fn moment(&self, k: u32) -> Option<&McMoment> {
        self.moments.iter().find(|m| m.k == k)
    }
}

/// `(k - 1)!!` for even `k`, the `k`-th moment of a standard normal; zero for odd `k`.
pub fn gaussian_moment(k: u32) -> BigInt {
    if k % 2 == 1 {
        return BigInt::zero();
    }
    (1..k).step_by(2).fold(BigInt::one(), |acc, j| acc * j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::binomial;
    use crate::moments::{central_moment_exact, Method};

    struct Zeros;

    impl RngCore for Zeros {
        fn next_u32(&mut self) -> u32 {
            0
        }
        fn next_u64(&mut self) -> u64 {
            0
        }
        fn fill_bytes(&mut self, dst: &mut [u8]) {
            dst.fill(0);
        }
    }

    /// Hands out the queued rows in order.
    struct Rows(Vec<u64>);

    impl RngCore for Rows {
        fn next_u32(&mut self) -> u32 {
            self.next_u64() as u32
        }
        fn next_u64(&mut self) -> u64 {
            self.0.remove(0)
        }
        fn fill_bytes(&mut self, _: &mut [u8]) {
            unimplemented!()
        }
    }

    fn config(n: u32, i: u32, m: u32, samples: u64, seed: u64, workers: usize) -> McConfig {
        McConfig {
            params: EnsembleParams::new(n, i, m).unwrap(),
            k_max: 4,
            samples,
            seed,
            workers,
        }
    }

    #[test]
    fn sample_examples() {
        let l = Limits::default();
        for (n, i, m) in [(4, 2, 1), (10, 3, 4), (20, 10, 3)] {
            let p = EnsembleParams::new(n, i, m).unwrap();
            assert_eq!(
                BigInt::from(sample_x(&p, &mut Zeros, &l).unwrap()),
                BigInt::from(binomial(n.into(), i.into()))
            );
        }
        let p = EnsembleParams::new(4, 2, 1).unwrap();
        // row 1100: only 1100 and 0011 among weight-2 vectors are orthogonal
        assert_eq!(sample_x(&p, &mut Rows(vec![0b0011]), &l).unwrap(), 2);
        assert_eq!(sample_x(&p, &mut Rows(vec![0b0001]), &l).unwrap(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = EnsembleParams::new(12, 5, 4).unwrap();
        for _ in 0..200 {
            assert!(sample_x(&p, &mut rng, &l).unwrap() <= 792);
        }
    }

    #[test]
    fn small_case_matches_exact() {
        let l = Limits::default();
        let cfg = config(4, 2, 1, 200_000, 11, 4);
        let r = estimate(&cfg, &l).unwrap();
        assert_eq!(r.samples, 200_000);
        for k in 1..=4 {
            let exact = rat_to_f64(&central_moment_exact(&cfg.params, k, Method::Ensemble, &l).unwrap().0);
            let m = r.moment(k).unwrap();
            assert!(
                (m.central_moment - exact).abs() <= 4.0 * m.stderr,
                "k={k}: {} vs {exact}",
                m.central_moment
            );
        }
        let second = r.moment(2).unwrap();
        assert!((second.normalized - 1.0).abs() <= 4.0 * second.stderr_normalized);
        assert!((r.moment(2).unwrap().normalized_empirical - 1.0).abs() < 1e-12);
    }

    #[test]
    fn workers_do_not_change_the_report() {
        let l = Limits::default();
        let one = estimate(&config(9, 3, 3, 20_000, 5, 1), &l).unwrap();
        let eight = estimate(&config(9, 3, 3, 20_000, 5, 8), &l).unwrap();
        assert_eq!(one, eight);
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&eight).unwrap()
        );
        let other = estimate(&config(9, 3, 3, 20_000, 6, 1), &l).unwrap();
        assert_ne!(one.histogram, other.histogram);
    }

    #[test]
    fn rejects_bad_configs_and_budget() {
        let l = Limits::default();
        assert!(estimate(&config(4, 2, 1, 1, 0, 1), &l).is_err());
        assert!(estimate(&config(4, 2, 1, 10, 0, 0), &l).is_err());
        let tight = Limits {
            max_sample_work: 10,
            ..l
        };
        assert!(matches!(
            estimate(&config(30, 15, 20, 10, 0, 1), &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let r = estimate(&config(5, 2, 2, 1000, 3, 2), &Limits::default()).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,raw_moment,central_moment,normalized,stderr");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn gaussian_regime_within_factor_two() {
        let l = Limits::default();
        let cfg = config(16, 4, 8, 20_000, 17, 4);
        let k0 = crate::exponents::find_k0(&cfg.params, 8, &l).unwrap().k0;
        assert!(k0.is_some_and(|k0| k0 > 4), "k0 = {k0:?}");
        let r = estimate(&cfg, &l).unwrap();
        let fourth = r.moment(4).unwrap().normalized;
        assert!((1.5..=6.0).contains(&fourth), "normalized fourth moment {fourth}");
        assert_eq!(gaussian_moment(4), BigInt::from(3));
        assert_eq!(gaussian_moment(6), BigInt::from(15));
        assert_eq!(gaussian_moment(3), BigInt::zero());
    }
}
