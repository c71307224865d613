//! Exact central moments of `X = |L ∩ C|` for the kernel `C` of a uniformly
//! random `m x n` parity-check matrix, where `L` is the weight-`i` class.
//!
//! Two independent routes compute `E (X - E X)^k`:
//!
//! * **ensemble**: enumerate every one of the `2^{mn}` matrices and average;
//! * **tuple-sum**: expand the power and sum the Möbius-inversion closed form
//!   of `E prod Z_u` over all `k`-tuples in `L^k`.
//!
//! The remaining submodules cover the coloop-free sandwich sums, rank
//! profiles, and the cover configurations used to bound them.

mod cover;
mod ensemble;
mod expectation;
mod sandwich;

pub use cover::{
    dual_character_sum_check, holder_bound, sample_dual_point, structured_tuple_count, CoverConfig, DualCheck,
};
pub use ensemble::{product_expectation_oracle, x_distribution};
pub use expectation::{product_expectation, SequenceShape};
pub use sandwich::{rank_profile, sandwich_sum, RankProfile};

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use rayon::prelude::*;

use crate::arith::{binomial, entropy, nat_to_rat, pow2_neg, BigNat, BigRat};
use crate::error::{Error, Result};
use crate::gf2::weight_class_words;
use crate::limits::Limits;

/// The ensemble `(n, i, m)`: length, target weight and number of parity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleParams {
    n: u32,
    i: u32,
    m: u32,
}

impl EnsembleParams {
    /// Requires `0 < i <= n` and `0 < m < n`.
    pub fn new(n: u32, i: u32, m: u32) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::invalid(format!("weight i={i} must satisfy 0 < i <= n={n}")));
        }
        if m == 0 || m >= n {
            return Err(Error::invalid(format!("rows m={m} must satisfy 0 < m < n={n}")));
        }
        if n > 64 {
            return Err(Error::invalid(format!("length n={n} exceeds 64")));
        }
        Ok(EnsembleParams { n, i, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p = 2^-m`, the probability that a fixed nonzero vector lies in `C`.
    pub fn p(&self) -> BigRat {
        pow2_neg(self.m)
    }

    pub fn gamma(&self) -> BigRat {
        BigRat::new(self.i.into(), self.n.into())
    }

    pub fn lambda(&self) -> BigRat {
        BigRat::new(self.m.into(), self.n.into())
    }

    pub fn class_size(&self) -> BigNat {
        binomial(self.n.into(), self.i.into())
    }

    /// `E X = C(n, i) p`.
    pub fn mean(&self) -> BigRat {
        nat_to_rat(&self.class_size()) * self.p()
    }

    /// `Var X = C(n, i) p (1 - p)`.
    pub fn variance(&self) -> BigRat {
        let p = self.p();
        nat_to_rat(&self.class_size()) * &p * (BigRat::one() - &p)
    }

    /// Conditions the asymptotic statements assume but the engines do not need.
    pub fn advisories(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.i % 2 == 1 {
            out.push("odd weight i".to_string());
        }
        if 2 * self.i > self.n {
            out.push("i > n/2".to_string());
        }
        let h = entropy(&self.gamma()).unwrap_or(0.0);
        if crate::arith::rat_to_f64(&self.lambda()) >= h {
            out.push("lambda >= h(gamma)".to_string());
        }
        out
    }
}

/// Which exact route computes a central moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Ensemble,
    TupleSum,
    /// Ensemble when it fits the matrix cap, otherwise tuple-sum.
    Auto,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Ensemble => "ensemble",
            Method::TupleSum => "tuple-sum",
            Method::Auto => "auto",
        }
    }
}

/// Exact `E (X - E X)^k`, with the route that produced it.
pub fn central_moment_exact(
    params: &EnsembleParams,
    k: u32,
    method: Method,
    limits: &Limits,
) -> Result<(BigRat, Method)> {
    match method {
        Method::Ensemble => {
            let dist = x_distribution(params, limits)?;
            Ok((central_moment_from_distribution(params, &dist, k), Method::Ensemble))
        }
        Method::TupleSum => Ok((
            expectation::central_moment_tuple_sum(params, k, limits)?,
            Method::TupleSum,
        )),
        Method::Auto => {
            let ensemble_ok = u64::from(params.n) * u64::from(params.m) <= u64::from(limits.max_matrix_bits);
            let tuple_work = params.class_size().pow(k);
            let ensemble_cost = BigUint::one() << (params.n * params.m);
            if ensemble_ok && (ensemble_cost <= tuple_work || limits.check_tuples("", &tuple_work).is_err()) {
                central_moment_exact(params, k, Method::Ensemble, limits)
            } else {
                match central_moment_exact(params, k, Method::TupleSum, limits) {
                    Err(Error::BudgetExceeded { .. }) if !ensemble_ok => Err(Error::budget(
                        "central moment (both routes)",
                        format!("2^{} matrices or {} tuples", params.n * params.m, tuple_work),
                        format!(
                            "2^{} matrices and {} tuples",
                            limits.max_matrix_bits, limits.max_tuple_work
                        ),
                    )),
                    other => other,
                }
            }
        }
    }
}

/// `E (X - mu)^k` from an exact histogram `X -> number of matrices`.
pub fn central_moment_from_distribution(params: &EnsembleParams, dist: &BTreeMap<u64, BigNat>, k: u32) -> BigRat {
    // (x - C/2^m) = (x 2^m - C) / 2^m
    let c = BigInt::from(params.class_size());
    let total: BigNat = dist.values().sum();
    let mut acc = BigInt::zero();
    for (&x, count) in dist {
        let centered = (BigInt::from(x) << params.m) - &c;
        acc += centered.pow(k) * BigInt::from(count.clone());
    }
    BigRat::new(acc, BigInt::from(total) << (params.m * k))
}

/// The weight class as words, after checking that `C(n, i)^k` tuples fit the budget.
pub(crate) fn tuple_space(n: u32, i: u32, k: u32, limits: &Limits) -> Result<Vec<u64>> {
    let words = weight_class_words(n as usize, i as usize, limits)?;
    limits.check_tuples("tuple enumeration over L^k", &BigUint::from(words.len()).pow(k))?;
    Ok(words)
}

/// Folds `f` over every ordered `k`-tuple of `words`, sharding on the first
/// coordinate. `merge` must be associative and commutative.
pub(crate) fn fold_tuples<A, I, F, M>(words: &[u64], k: u32, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, &[u64]) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    assert!(k >= 1);
    let k = k as usize;
    words
        .par_iter()
        .map(|&first| {
            let mut acc = init();
            let mut idx = vec![0usize; k - 1];
            let mut tuple: Vec<u64> = std::iter::once(first)
                .chain(std::iter::repeat_n(words[0], k - 1))
                .collect();
            loop {
                fold(&mut acc, &tuple);
                let mut d = 0;
                loop {
                    if d == k - 1 {
                        return acc;
                    }
                    idx[d] += 1;
                    if idx[d] < words.len() {
                        tuple[d + 1] = words[idx[d]];
                        break;
                    }
                    idx[d] = 0;
                    tuple[d + 1] = words[0];
                    d += 1;
                }
            }
        })
        .reduce(&init, &merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn params_validation() {
        assert!(EnsembleParams::new(4, 2, 1).is_ok());
        assert!(EnsembleParams::new(4, 4, 1).is_ok());
        assert!(EnsembleParams::new(4, 0, 1).is_err());
        assert!(EnsembleParams::new(4, 5, 1).is_err());
        assert!(EnsembleParams::new(4, 2, 0).is_err());
        assert!(EnsembleParams::new(4, 2, 4).is_err());
        let p = EnsembleParams::new(4, 2, 1).unwrap();
        assert_eq!(p.p(), rat(1, 2));
        assert_eq!(p.mean(), rat(3, 1));
        assert_eq!(p.variance(), rat(3, 2));
        assert_eq!(p.gamma(), rat(1, 2));
        assert_eq!(p.lambda(), rat(1, 4));
        assert_eq!(EnsembleParams::new(8, 7, 6).unwrap().advisories().len(), 3);
        assert!(EnsembleParams::new(8, 2, 3).unwrap().advisories().is_empty());
    }

    #[test]
    fn central_moment_examples() {
        let l = Limits::default();
        let p = EnsembleParams::new(4, 2, 1).unwrap();
        for method in [Method::Ensemble, Method::TupleSum] {
            assert_eq!(central_moment_exact(&p, 1, method, &l).unwrap().0, BigRat::zero());
            assert_eq!(central_moment_exact(&p, 2, method, &l).unwrap().0, rat(3, 2));
        }
    }

    #[test]
    fn row_weight_hand_count() {
        // One row of weight w leaves X = C(w,2) + C(4-w,2) weight-2 vectors in the kernel.
        let p = EnsembleParams::new(4, 2, 1).unwrap();
        let dist = x_distribution(&p, &Limits::default()).unwrap();
        let expect: BTreeMap<u64, BigNat> = [(2u64, 6u32), (3, 8), (6, 2)]
            .into_iter()
            .map(|(x, c)| (x, BigNat::from(c)))
            .collect();
        assert_eq!(dist, expect);
        let second = central_moment_from_distribution(&p, &dist, 2);
        assert_eq!(second, rat(168, 16) - rat(9, 1));
    }

    #[test]
    fn routes_agree_on_small_ensembles() {
        let l = Limits::default();
        for n in 2..=5u32 {
            for m in 1..n.min(4) {
                for i in 1..=n {
                    let p = EnsembleParams::new(n, i, m).unwrap();
                    let dist = x_distribution(&p, &l).unwrap();
                    for k in 1..=4 {
                        let ens = central_moment_from_distribution(&p, &dist, k);
                        let tup = central_moment_exact(&p, k, Method::TupleSum, &l).unwrap().0;
                        assert_eq!(ens, tup, "n={n} i={i} m={m} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn fold_visits_every_tuple_once() {
        let words = [1u64, 2, 4];
        let seen = fold_tuples(
            &words,
            3,
            Vec::new,
            |acc, t| acc.push(t.to_vec()),
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        let mut seen = seen;
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 27);
        let count = fold_tuples(&words, 1, || 0u32, |a, _| *a += 1, |a, b| a + b);
        assert_eq!(count, 3);
    }

    #[test]
    fn auto_falls_back_and_reports_budget() {
        let p = EnsembleParams::new(10, 5, 3).unwrap();
        let l = Limits::default();
        let (v, route) = central_moment_exact(&p, 2, Method::Auto, &l).unwrap();
        assert_eq!(route, Method::TupleSum);
        assert_eq!(v, p.variance());
        let tight = Limits {
            max_tuple_work: 10,
            max_matrix_bits: 10,
            ..l
        };
        assert!(matches!(
            central_moment_exact(&p, 2, Method::Auto, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
