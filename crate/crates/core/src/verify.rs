//! The acceptance suite: twelve numbered checks run against the engines,
//! at a quick level for interactive use or at full scale.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{binomial, nat_to_rat, pow2_neg, rat, BigRat};
use crate::error::Result;
use crate::exponents::{psi_diagnostics, psi_n, trend_row};
use crate::gf2::{coloop_positions, VectorSequence};
use crate::krawtchouk::{zero_sum_count_bruteforce, KrawtchoukTable};
use crate::limits::Limits;
use crate::moments::{
    central_moment_exact, central_moment_from_distribution, dual_character_sum_check, holder_bound,
    product_expectation, product_expectation_oracle, sample_dual_point, sandwich_sum, structured_tuple_count,
    x_distribution, CoverConfig, EnsembleParams, Method,
};
use crate::montecarlo::{estimate, McConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

/// A deliberate defect, for checking that the suite notices it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    None,
    TamperedRecurrence,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub level: Level,
    pub seed: u64,
    pub limits: Limits,
    pub fault: Fault,
}

impl VerifyOptions {
    pub fn new(level: Level, seed: u64) -> Self {
        VerifyOptions {
            level,
            seed,
            limits: Limits::default(),
            fault: Fault::None,
        }
    }

    fn full(&self) -> bool {
        self.level == Level::Full
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Produced output for inspection; nothing asserted.
    Reported,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{:>8}] criterion {:>2}: {} ({} ms) {}",
            format!("{:?}", self.verdict).to_uppercase(),
            self.id,
            self.name,
            self.elapsed_ms,
            self.detail
        )
    }
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "variance identity"),
    (2, "ensemble and tuple-sum routes agree"),
    (3, "product expectation: coloops vanish, per-term sandwich, oracle"),
    (4, "central moment sandwich"),
    (5, "central moment lower bound"),
    (6, "signed moment counts zero-sum tuples"),
    (7, "Krawtchouk identities"),
    (8, "structured count below the norm product"),
    (9, "dual character sum"),
    (10, "norm diagnostics"),
    (11, "Monte Carlo calibration"),
    (12, "exponent trend report"),
];

type Outcome = Result<(Verdict, String)>;

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

pub fn run_check(id: u32, opts: &VerifyOptions) -> CheckResult {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown criterion");
    let start = Instant::now();
    let outcome = match id {
        1 => variance_identity(opts),
        2 => route_agreement(opts),
        3 => product_expectation_checks(opts),
        4 => sandwich_checks(opts, false),
        5 => sandwich_checks(opts, true),
        6 => zero_sum_counts(opts),
        7 => krawtchouk_identities(opts),
        8 => holder_domination(opts),
        9 => dual_sums(opts),
        10 => norm_diagnostics(opts),
        11 => monte_carlo_calibration(opts),
        12 => trend_report(opts),
        _ => Ok((Verdict::Fail, format!("no criterion {id}"))),
    };
    let (verdict, detail) = outcome.unwrap_or_else(|e| (Verdict::Fail, format!("error: {e}")));
    CheckResult {
        id,
        name,
        verdict,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CheckResult> {
    CRITERIA.iter().map(|&(id, _)| run_check(id, opts)).collect()
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.verdict != Verdict::Fail)
}

/// One line per check, then a summary line.
pub fn render_table(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(out, "{}", r.line());
    }
    let failed = results.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let _ = writeln!(out, "{} checks, {} failed", results.len(), failed);
    out
}

/// Tables `K_0..=K_{i_max}` from the recurrence, honoring the injected fault.
fn recurrence_tables(n: u32, i_max: u32, opts: &VerifyOptions) -> Result<Vec<KrawtchoukTable>> {
    KrawtchoukTable::recurrence_with(n, i_max, &opts.limits, opts.fault == Fault::TamperedRecurrence)
}

fn variance_identity(opts: &VerifyOptions) -> Outcome {
    let n_max = if opts.full() { 10 } else { 8 };
    let mut cases = 0;
    for n in 2..=n_max {
        for m in 1..=3.min(n - 1) {
            for i in 1..n {
                let p = EnsembleParams::new(n, i, m)?;
                let (v, _) = central_moment_exact(&p, 2, Method::Auto, &opts.limits)?;
                if v != p.variance() {
                    return Ok((Verdict::Fail, format!("(n,i,m)=({n},{i},{m}): {v} != {}", p.variance())));
                }
                cases += 1;
            }
        }
    }
    Ok((Verdict::Pass, format!("{cases} ensembles, n <= {n_max}")))
}

fn route_agreement(opts: &VerifyOptions) -> Outcome {
    let n_max = if opts.full() { 5 } else { 4 };
    let mut cases = 0;
    for n in 2..=n_max {
        for m in 1..=3.min(n - 1) {
            for i in 1..=n {
                let p = EnsembleParams::new(n, i, m)?;
                let dist = x_distribution(&p, &opts.limits)?;
                for k in 1..=4 {
                    let ens = central_moment_from_distribution(&p, &dist, k);
                    let (tup, _) = central_moment_exact(&p, k, Method::TupleSum, &opts.limits)?;
                    if ens != tup {
                        return Ok((Verdict::Fail, format!("(n,i,m,k)=({n},{i},{m},{k}): {ens} vs {tup}")));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok((Verdict::Pass, format!("{cases} (n,i,m,k) cells, n <= {n_max}")))
}

fn product_expectation_checks(opts: &VerifyOptions) -> Outcome {
    let oracle_m_max = if opts.full() { 3 } else { 2 };
    let mut seqs = Vec::new();
    let mut stack: Vec<Vec<u64>> = (1..16u64).map(|w| vec![w]).collect();
    while let Some(s) = stack.pop() {
        if s.len() < 4 {
            for w in 1..16u64 {
                let mut t = s.clone();
                t.push(w);
                stack.push(t);
            }
        }
        seqs.push(s);
    }
    let (mut coloop, mut bounded, mut oracle) = (0u64, 0u64, 0u64);
    for words in &seqs {
        let seq = VectorSequence::from_words(4, words)?;
        let has_coloop = !coloop_positions(&seq).is_empty();
        let k = words.len() as u32;
        let r = seq.rank() as u32;
        for m in 1..=6u32 {
            let p = pow2_neg(m);
            let value = product_expectation(&seq, &p, &opts.limits)?;
            if has_coloop {
                if !value.is_zero() {
                    return Ok((
                        Verdict::Fail,
                        format!("{words:?} has a coloop but E = {value} at m={m}"),
                    ));
                }
                coloop += 1;
            } else if m >= 5 && k < m {
                let base = p.pow(r as i32);
                let low = &base / BigRat::from_integer(2.into());
                let high = &base * BigRat::from_integer(2.into());
                if value < low || value > high {
                    return Ok((
                        Verdict::Fail,
                        format!("{words:?} at m={m}: {value} outside [{low}, {high}]"),
                    ));
                }
                bounded += 1;
            }
            if m <= oracle_m_max {
                let params = EnsembleParams::new(4, 1, m)?;
                let direct = product_expectation_oracle(&seq, &params, &opts.limits)?;
                if direct != value {
                    return Ok((
                        Verdict::Fail,
                        format!("{words:?} at m={m}: formula {value}, oracle {direct}"),
                    ));
                }
                oracle += 1;
            }
        }
    }
    Ok((
        Verdict::Pass,
        format!(
            "{} sequences; {coloop} coloop zeros, {bounded} bounded terms, {oracle} oracle matches (m <= {oracle_m_max})",
            seqs.len()
        ),
    ))
}

const SANDWICH_CONFIGS: [(u32, u32, u32, u32); 3] = [(5, 2, 3, 2), (6, 2, 4, 2), (6, 2, 4, 3)];

fn sandwich_checks(opts: &VerifyOptions, lower_bound: bool) -> Outcome {
    let configs: &[(u32, u32, u32, u32)] = if opts.full() {
        &SANDWICH_CONFIGS
    } else {
        &SANDWICH_CONFIGS[..1]
    };
    let mut dist_cache: Option<((u32, u32, u32), _)> = None;
    let mut notes = Vec::new();
    for &(n, i, m, k) in configs {
        let p = EnsembleParams::new(n, i, m)?;
        let dist = match &dist_cache {
            Some((key, d)) if *key == (n, i, m) => d,
            _ => {
                dist_cache = Some(((n, i, m), x_distribution(&p, &opts.limits)?));
                &dist_cache.as_ref().unwrap().1
            }
        };
        let moment = central_moment_from_distribution(&p, dist, k);
        let two = BigRat::from_integer(2.into());
        if lower_bound {
            let table = KrawtchoukTable::build(n, i, &opts.limits)?;
            let bound = p.p().pow(k as i32 - 1) * table.signed_moment_k(k) / &two;
            if moment < bound {
                return Ok((Verdict::Fail, format!("({n},{i},{m},{k}): {moment} < {bound}")));
            }
            notes.push(format!("({n},{i},{m},{k}): {moment} >= {bound}"));
        } else {
            let s = sandwich_sum(&p, k, &opts.limits)?;
            if moment < &s / &two || moment > &s * &two {
                return Ok((
                    Verdict::Fail,
                    format!("({n},{i},{m},{k}): {moment} outside [S/2, 2S], S = {s}"),
                ));
            }
            notes.push(format!("({n},{i},{m},{k}): {moment} in [S/2, 2S], S = {s}"));
        }
    }
    Ok((Verdict::Pass, notes.join("; ")))
}

fn zero_sum_counts(opts: &VerifyOptions) -> Outcome {
    let n_max = if opts.full() { 12 } else { 9 };
    let mut cases = 0;
    for n in 1..=n_max {
        let tables = recurrence_tables(n, n, opts)?;
        for (i, table) in tables.iter().enumerate() {
            for k in 1..=3 {
                let brute = nat_to_rat(&zero_sum_count_bruteforce(n, i as u32, k, &opts.limits)?);
                if table.signed_moment_k(k) != brute {
                    return Ok((
                        Verdict::Fail,
                        format!(
                            "(n,i,k)=({n},{i},{k}): E K^k = {}, brute force {brute}",
                            table.signed_moment_k(k)
                        ),
                    ));
                }
                cases += 1;
            }
        }
    }
    let anchor = recurrence_tables(4, 2, opts)?[2].signed_moment_k(3);
    if anchor != rat(24, 1) {
        return Ok((Verdict::Fail, format!("(4,2,3) gives {anchor}, expected 24")));
    }
    Ok((
        Verdict::Pass,
        format!("{cases} (n,i,k) cells, n <= {n_max}; (4,2,3) = 24"),
    ))
}

fn krawtchouk_identities(opts: &VerifyOptions) -> Outcome {
    let n_max = if opts.full() { 64 } else { 32 };
    let mut cases = 0;
    for n in 0..=n_max {
        let tables = recurrence_tables(n, n, opts)?;
        for (i, table) in tables.iter().enumerate() {
            let class = BigInt::from(binomial(n.into(), i as u64));
            if *table.value(0) != class {
                return Ok((Verdict::Fail, format!("K_{i}(0) = {} at n={n}", table.value(0))));
            }
            if table.abs_norm_k(2) != BigRat::from_integer(class.clone()) {
                return Ok((Verdict::Fail, format!("Parseval fails at (n,i)=({n},{i})")));
            }
            if i % 2 == 0 && (0..=n).any(|j| table.value(j) != table.value(n - j)) {
                return Ok((Verdict::Fail, format!("symmetry fails at (n,i)=({n},{i})")));
            }
            cases += 1;
        }
    }
    Ok((Verdict::Pass, format!("{cases} tables, n <= {n_max}")))
}

fn holder_domination(opts: &VerifyOptions) -> Outcome {
    let mut cases = 0;
    let mut equalities = 0;
    for n in 2..=6u32 {
        let mut weights = vec![2.min(n), n / 2];
        weights.dedup();
        for i in weights {
            let table = KrawtchoukTable::build(n, i, &opts.limits)?;
            for r in 1..=3 {
                for v in 1..=2.min(r) {
                    for cfg in CoverConfig::enumerate_all(r, v) {
                        let count = nat_to_rat(&structured_tuple_count(n, i, &cfg, &opts.limits)?);
                        let bound = holder_bound(&cfg, &table);
                        if count > bound {
                            return Ok((Verdict::Fail, format!("{cfg:?} at (n,i)=({n},{i}): {count} > {bound}")));
                        }
                        if r == 1 && v == 1 {
                            if count != bound {
                                return Ok((Verdict::Fail, format!("r=v=1 at (n,i)=({n},{i}): {count} != {bound}")));
                            }
                            equalities += 1;
                        }
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok((
        Verdict::Pass,
        format!("{cases} (config, n, i) cases; equality in all {equalities} r=v=1 cases"),
    ))
}

fn dual_sums(opts: &VerifyOptions) -> Outcome {
    let samples = if opts.full() { 100 } else { 20 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = 0;
    let mut configs = 0;
    for r in 1..=3 {
        for v in 1..=2.min(r) {
            for cfg in CoverConfig::enumerate_all(r, v) {
                configs += 1;
                let n_top = opts.limits.max_dual_bits / (r + v);
                let lengths: Vec<u32> = if opts.full() {
                    (1..=n_top).collect()
                } else {
                    vec![n_top]
                };
                for n in lengths {
                    for s in 0..samples {
                        let ys = sample_dual_point(&cfg, n, s % 2 == 0, &mut rng);
                        let check = dual_character_sum_check(&cfg, n, &ys, &opts.limits)?;
                        if !check.matches {
                            return Ok((
                                Verdict::Fail,
                                format!("{cfg:?} n={n}: sum {} expected {}", check.sum, check.expected),
                            ));
                        }
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok((
        Verdict::Pass,
        format!("{configs} configs, {checks} samples, {samples} per (config, n)"),
    ))
}

fn norm_diagnostics(opts: &VerifyOptions) -> Outcome {
    let (n_max, k_max) = if opts.full() { (40, 20) } else { (24, 12) };
    let mut cases = 0;
    let mut dips = 0;
    for n in 1..=n_max {
        let tables = recurrence_tables(n, n / 2, opts)?;
        for table in &tables {
            if psi_n(table, 2)? != 0.0 {
                return Ok((Verdict::Fail, format!("psi_n(2) != 0 at (n,i)=({n},{})", table.i())));
            }
            let d = psi_diagnostics(table, 1..=k_max)?;
            if !d.exact_checks_pass() {
                return Ok((Verdict::Fail, format!("(n,i)=({n},{}): {:?}", table.i(), d.flags())));
            }
            dips += usize::from(!d.monotone_dips.is_empty());
            cases += 1;
        }
    }
    Ok((
        Verdict::Pass,
        format!("{cases} tables, n <= {n_max}, k <= {k_max}; psi/(k-2) dips reported in {dips} tables"),
    ))
}

fn monte_carlo_calibration(opts: &VerifyOptions) -> Outcome {
    let samples = if opts.full() { 1_000_000 } else { 100_000 };
    let params = EnsembleParams::new(4, 2, 1)?;
    let exact = 1.5;
    let mut within = 0;
    let seeds = 20u64;
    for s in 0..seeds {
        let cfg = McConfig {
            params,
            k_max: 2,
            samples,
            seed: opts.seed.wrapping_add(s),
            workers: 4,
        };
        let m = estimate(&cfg, &opts.limits)?;
        let second = m.moment(2).expect("k_max = 2");
        if (second.central_moment - exact).abs() <= 4.0 * second.stderr {
            within += 1;
        }
    }
    let base = McConfig {
        params,
        k_max: 4,
        samples: samples / 10,
        seed: opts.seed,
        workers: 1,
    };
    let one = estimate(&base, &opts.limits)?;
    let eight = estimate(&McConfig { workers: 8, ..base }, &opts.limits)?;
    let same = one == eight;
    Ok((
        verdict(within >= 19 && same),
        format!("{within}/{seeds} seeds within 4 SE at {samples} samples; workers 1 vs 8 identical: {same}"),
    ))
}

fn trend_report(opts: &VerifyOptions) -> Outcome {
    let mut out = String::from("n,i,m,k,theorem_exponent,lower_bound_rate,sandwich_upper_rate,bounds_apply");
    for n in [16u32, 24, 32, 40] {
        let p = EnsembleParams::new(n, n / 4, n / 8)?;
        for k in [4u32, 6, 8] {
            let row = trend_row(&p, k, &opts.limits)?;
            let upper = row
                .sandwich_upper_rate
                .map(|u| format!("{u:.6}"))
                .unwrap_or_else(|| "-".into());
            let _ = write!(
                out,
                "\n{},{},{},{},{:.6},{:.6},{},{}",
                row.n, row.i, row.m, row.k, row.theorem_exponent, row.lower_bound_rate, upper, row.bounds_apply
            );
        }
    }
    Ok((Verdict::Reported, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyOptions {
        VerifyOptions::new(Level::Quick, 1)
    }

    #[test]
    fn cheap_checks_pass() {
        for id in [1, 6, 7, 8, 10, 12] {
            let r = run_check(id, &quick());
            assert_ne!(r.verdict, Verdict::Fail, "{}", r.line());
        }
    }

    #[test]
    fn tampered_recurrence_is_caught() {
        let opts = VerifyOptions {
            fault: Fault::TamperedRecurrence,
            ..quick()
        };
        assert_eq!(run_check(7, &opts).verdict, Verdict::Fail);
        assert_eq!(run_check(6, &opts).verdict, Verdict::Fail);
    }

    #[test]
    fn unknown_criterion_fails_and_table_counts() {
        let r = run_check(99, &quick());
        assert_eq!(r.verdict, Verdict::Fail);
        let t = render_table(&[r]);
        assert!(t.ends_with("1 checks, 1 failed\n"));
    }
}
