//! Finite-`n` exponents built from Krawtchouk norms.
//!
//! * `psi_n(k) = (1/n) log2(||K_i||_k^k / ||K_i||_2^k)`
//! * `F_n(k) = psi_n(k) + (k/2) h(i/n)`
//! * `theorem_exponent(k) = psi_n(k) - (k/2 - 1) lambda`
//!
//! Every value here is a finite-`n` estimate of an asymptotic quantity.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{entropy, log2_rat, nat_to_rat, rat_to_f64, BigRat};
use crate::error::{Error, Result};
use crate::krawtchouk::KrawtchoukTable;
use crate::limits::Limits;
use crate::moments::EnsembleParams;
use crate::montecarlo::gaussian_moment;

const LOG_BITS: u32 = 60;

/// Tolerance for the reported (not asserted) monotonicity of `psi_n(k)/(k-2)`.
pub const MONOTONE_TOL: f64 = 1e-6;

/// `log2(a) - (k/2) log2(b)` in fixed point, exactly zero when `a = b^{k/2}`
/// holds at the level of the two logarithms' raw values.
fn log_ratio(a: &BigRat, b: &BigRat, k: u32) -> Result<f64> {
    let la = log2_rat(a, LOG_BITS)?;
    let lb = log2_rat(b, LOG_BITS)?;
    let twice = 2 * la.raw() - i128::from(k) * lb.raw();
    Ok(twice as f64 / 2f64.powi(la.frac_bits() as i32 + 1))
}

/// `psi_n` for the table's `(n, i)`; exactly 0 at `k = 2` and for `i = 0`.
pub fn psi_n(table: &KrawtchoukTable, k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::invalid(format!("psi_n needs k >= 2, got {k}")));
    }
    if table.n() == 0 {
        return Err(Error::invalid("psi_n needs n >= 1"));
    }
    let norm_k = table.abs_norm_k(k);
    let norm_2 = table.abs_norm_k(2);
    Ok(log_ratio(&norm_k, &norm_2, k)? / f64::from(table.n()))
}

pub fn f_n(table: &KrawtchoukTable, k: u32) -> Result<f64> {
    let gamma = BigRat::new(table.i().into(), table.n().into());
    Ok(psi_n(table, k)? + f64::from(k) / 2.0 * entropy(&gamma)?)
}

fn exponent_from_psi(psi: f64, params: &EnsembleParams, k: u32) -> f64 {
    psi - (f64::from(k) / 2.0 - 1.0) * rat_to_f64(&params.lambda())
}

/// `psi_n(k) - (k/2 - 1) m/n`.
pub fn theorem_exponent(params: &EnsembleParams, k: u32, limits: &Limits) -> Result<f64> {
    let table = KrawtchoukTable::build(params.n(), params.i(), limits)?;
    Ok(exponent_from_psi(psi_n(&table, k)?, params, k))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct K0Search {
    /// Least `k` in `3..=k_max` with a positive exponent.
    pub k0: Option<u32>,
    /// Orders above `k0` where the exponent is not positive.
    pub dips: Vec<u32>,
    /// `(k, exponent)` for `k` in `2..=k_max`.
    pub exponents: Vec<(u32, f64)>,
}

pub fn find_k0(params: &EnsembleParams, k_max: u32, limits: &Limits) -> Result<K0Search> {
    if k_max < 3 {
        return Err(Error::invalid(format!("k_max={k_max} must be at least 3")));
    }
    let table = KrawtchoukTable::build(params.n(), params.i(), limits)?;
    k0_from_table(&table, params, k_max)
}

fn k0_from_table(table: &KrawtchoukTable, params: &EnsembleParams, k_max: u32) -> Result<K0Search> {
    let exponents = (2..=k_max)
        .map(|k| Ok((k, exponent_from_psi(psi_n(table, k)?, params, k))))
        .collect::<Result<Vec<_>>>()?;
    let k0 = exponents.iter().find(|(k, e)| *k >= 3 && *e > 0.0).map(|(k, _)| *k);
    let dips = match k0 {
        Some(k0) => exponents
            .iter()
            .filter(|(k, e)| *k > k0 && *e <= 0.0)
            .map(|(k, _)| *k)
            .collect(),
        None => Vec::new(),
    };
    Ok(K0Search { k0, dips, exponents })
}

/// Exact checks (a) and (b), and the reported trend (c).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiDiagnostics {
    /// (a): `(k, ||K||_k^k >= 2^-n K(0)^k)`.
    pub origin_bound: Vec<(u32, bool)>,
    /// (b): `(a, b, c, ||K||_b^{2b} <= ||K||_a^a ||K||_c^c)` for `a + c = 2b`.
    pub log_convex: Vec<(u32, u32, u32, bool)>,
    /// (c): `(k, psi_n(k)/(k-2))` for `k >= 3`.
    pub psi_over_k: Vec<(u32, f64)>,
    /// Orders `k` where `psi_n(k)/(k-2)` drops by more than [`MONOTONE_TOL`].
    pub monotone_dips: Vec<u32>,
    /// Second differences of `psi_n`, for inspection.
    pub second_differences: Vec<(u32, f64)>,
}

impl PsiDiagnostics {
    pub fn exact_checks_pass(&self) -> bool {
        self.origin_bound.iter().all(|c| c.1) && self.log_convex.iter().all(|c| c.3)
    }

    pub fn flags(&self) -> Vec<String> {
        let verdict = |ok: bool| if ok { "ok" } else { "FAIL" };
        let mut out = vec![
            format!("a:{}", verdict(self.origin_bound.iter().all(|c| c.1))),
            format!("b:{}", verdict(self.log_convex.iter().all(|c| c.3))),
        ];
        if self.monotone_dips.is_empty() {
            out.push("c:monotone".into());
        } else {
            let ks: Vec<String> = self.monotone_dips.iter().map(u32::to_string).collect();
            out.push(format!("c:dip@{}", ks.join("/")));
        }
        out
    }
}

pub fn psi_diagnostics(table: &KrawtchoukTable, k_range: RangeInclusive<u32>) -> Result<PsiDiagnostics> {
    let (lo, hi) = (*k_range.start(), *k_range.end());
    if lo < 1 || hi < lo {
        return Err(Error::invalid(format!("bad k range {lo}..={hi}")));
    }
    let norms = table.abs_norms_up_to(hi.max(2));
    let norm = |k: u32| &norms[k as usize - 1];
    let origin = nat_to_rat(&crate::arith::binomial(table.n().into(), table.i().into()));
    let cube = BigRat::from_integer(BigInt::from(1) << table.n());

    let origin_bound = (lo..=hi)
        .map(|k| (k, *norm(k) >= origin.pow(k as i32) / &cube))
        .collect();
    let mut log_convex = Vec::new();
    for b in lo..=hi {
        for a in lo..b {
            let c = 2 * b - a;
            if c <= hi {
                log_convex.push((a, b, c, norm(b) * norm(b) <= norm(a) * norm(c)));
            }
        }
    }
    let mut psi_over_k = Vec::new();
    let mut second_differences = Vec::new();
    let psis: Vec<(u32, f64)> = (lo.max(2)..=hi)
        .map(|k| Ok((k, psi_n(table, k)?)))
        .collect::<Result<_>>()?;
    for (k, psi) in &psis {
        if *k >= 3 {
            psi_over_k.push((*k, psi / f64::from(k - 2)));
        }
    }
    for w in psis.windows(3) {
        second_differences.push((w[1].0, w[2].1 - 2.0 * w[1].1 + w[0].1));
    }
    let monotone_dips = psi_over_k
        .windows(2)
        .filter(|w| w[1].1 < w[0].1 - MONOTONE_TOL)
        .map(|w| w[1].0)
        .collect();
    Ok(PsiDiagnostics {
        origin_bound,
        log_convex,
        psi_over_k,
        monotone_dips,
        second_differences,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentReport {
    pub n: u32,
    pub i: u32,
    pub k: u32,
    pub m: u32,
    pub psi_n: f64,
    #[serde(rename = "F_n")]
    pub f_n: f64,
    pub theorem_exponent: f64,
    /// Predicted `(1/n) log2` of the normalized `k`-th moment: the exponent when
    /// it is positive, else `log2((k-1)!!)/n` for even `k`, else none.
    pub predicted_normalized_log: Option<f64>,
    pub k0: Option<u32>,
    pub flags: Vec<String>,
}

/// One report per `k` in `2..=k_max`, sharing the table, `k0` and the diagnostics.
pub fn exponent_grid(params: &EnsembleParams, k_max: u32, limits: &Limits) -> Result<Vec<ExponentReport>> {
    if k_max < 3 || k_max > limits.max_k {
        return Err(Error::invalid(format!(
            "k_max={k_max} must lie in 3..={}",
            limits.max_k
        )));
    }
    let table = KrawtchoukTable::build(params.n(), params.i(), limits)?;
    let search = k0_from_table(&table, params, k_max)?;
    let diag = psi_diagnostics(&table, 2..=k_max)?;
    let mut flags = diag.flags();
    if !search.dips.is_empty() {
        let ks: Vec<String> = search.dips.iter().map(u32::to_string).collect();
        flags.push(format!("k0-dip@{}", ks.join("/")));
    }
    flags.push("finite-n".into());
    let h = entropy(&params.gamma())?;
    let n = f64::from(params.n());
    search
        .exponents
        .iter()
        .map(|&(k, exponent)| {
            let psi = psi_n(&table, k)?;
            let predicted = if exponent > 0.0 {
                Some(exponent)
            } else if k % 2 == 0 {
                Some(crate::arith::log2_nat(gaussian_moment(k).magnitude()) / n)
            } else {
                None
            };
            Ok(ExponentReport {
                n: params.n(),
                i: params.i(),
                k,
                m: params.m(),
                psi_n: psi,
                f_n: psi + f64::from(k) / 2.0 * h,
                theorem_exponent: exponent,
                predicted_normalized_log: predicted,
                k0: search.k0,
                flags: flags.clone(),
            })
        })
        .collect()
}

/// Header `n,i,k,m,psi_n,F_n,theorem_exponent,k0,flags`; flags are `;`-separated.
pub fn grid_csv(rows: &[ExponentReport]) -> String {
    let mut out = String::from("n,i,k,m,psi_n,F_n,theorem_exponent,k0,flags\n");
    for r in rows {
        let k0 = r.k0.map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{:.12},{:.12},{:.12},{},{}",
            r.n,
            r.i,
            r.k,
            r.m,
            r.psi_n,
            r.f_n,
            r.theorem_exponent,
            k0,
            r.flags.join(";")
        );
    }
    out
}

/// One row of the finite-`n` trend table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendRow {
    pub n: u32,
    pub i: u32,
    pub m: u32,
    pub k: u32,
    pub theorem_exponent: f64,
    /// `(1/n) log2(p^{k-1} E K^k / (2 Var^{k/2}))`, the exact lower-bound rate.
    pub lower_bound_rate: f64,
    /// `(1/n) log2(2 sum p^{r(S)} / Var^{k/2})` when the tuple sum fits the budget.
    pub sandwich_upper_rate: Option<f64>,
    /// Whether `k <= m - 1`, the range in which both bounds are proved.
    pub bounds_apply: bool,
}

pub fn trend_row(params: &EnsembleParams, k: u32, limits: &Limits) -> Result<TrendRow> {
    let table = KrawtchoukTable::build(params.n(), params.i(), limits)?;
    let exponent = exponent_from_psi(psi_n(&table, k)?, params, k);
    let n = f64::from(params.n());
    let var = params.variance();
    let var_log = log2_rat(&var, LOG_BITS)?.to_f64();
    let scaled =
        |q: &BigRat| -> Result<f64> { Ok((log2_rat(q, LOG_BITS)?.to_f64() - f64::from(k) / 2.0 * var_log) / n) };
    let lower = params.p().pow(k as i32 - 1) * table.signed_moment_k(k) / BigRat::from_integer(2.into());
    let upper = match crate::moments::sandwich_sum(params, k, limits) {
        Ok(s) => Some(scaled(&(s * BigRat::from_integer(2.into())))?),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(TrendRow {
        n: params.n(),
        i: params.i(),
        m: params.m(),
        k,
        theorem_exponent: exponent,
        lower_bound_rate: scaled(&lower)?,
        sandwich_upper_rate: upper,
        bounds_apply: k < params.m(),
    })
}
