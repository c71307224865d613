//! Coloop-free tuples in `L^k`: the sandwich sum `sum p^{r(S)}` and the
//! counts `N(r)` of such tuples by rank.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{fold_tuples, tuple_space, EnsembleParams};
use crate::arith::{nat_to_rat, BigNat, BigRat};
use crate::error::{Error, Result};
use crate::gf2::{is_coloop_free_words, rank_words, relation_support};
use crate::limits::Limits;

fn add_vecs(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

/// `sum p^{r(S)}` over the coloop-free `S in L^k`.
///
/// A tuple is coloop-free exactly when the supports of its linear relations
/// cover every position.
pub fn sandwich_sum(params: &EnsembleParams, k: u32, limits: &Limits) -> Result<BigRat> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let words = tuple_space(params.n(), params.i(), k, limits)?;
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let by_rank = fold_tuples(
        &words,
        k,
        || vec![0u64; k as usize + 1],
        |acc, tuple| {
            let (r, support) = relation_support(tuple);
            if support == full {
                acc[r] += 1;
            }
        },
        add_vecs,
    );
    let p = params.p();
    let mut total = BigRat::zero();
    let mut p_pow = BigRat::from_integer(1.into());
    for count in by_rank {
        total += &p_pow * BigRat::from_integer(count.into());
        p_pow *= &p;
    }
    Ok(total)
}

/// Coloop-free tuple counts by rank, with zero-sum tuple counts alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub n: u32,
    pub i: u32,
    pub k: u32,
    /// `counts[r]` = number of coloop-free tuples of rank `r`, for `r` in `0..=k`.
    pub counts: Vec<BigNat>,
    /// `zero_sum_by_rank[r]` = number of tuples with zero XOR and rank `r`.
    pub zero_sum_by_rank: Vec<BigNat>,
}

impl RankProfile {
    /// `N(r)`; zero outside `0..=k`.
    pub fn n_of(&self, r: u32) -> BigNat {
        self.counts.get(r as usize).cloned().unwrap_or_default()
    }

    pub fn zero_sum_total(&self) -> BigNat {
        self.zero_sum_by_rank.iter().sum()
    }

    /// Zero-sum tuples of rank `k - 1`, the `k`-circuits.
    pub fn circuits(&self) -> BigNat {
        match self.k {
            0 => BigUint::zero(),
            k => self.zero_sum_by_rank[k as usize - 1].clone(),
        }
    }

    /// `sum_r p^r N(r)`.
    pub fn sandwich_from(&self, p: &BigRat) -> BigRat {
        let mut total = BigRat::zero();
        let mut p_pow = BigRat::from_integer(1.into());
        for count in &self.counts {
            total += &p_pow * nat_to_rat(count);
            p_pow *= p;
        }
        total
    }
}

/// Classifies every tuple in `L^k` by rank, using the removal test for coloops.
pub fn rank_profile(n: u32, i: u32, k: u32, limits: &Limits) -> Result<RankProfile> {
    if k == 0 || k > 64 {
        return Err(Error::invalid(format!("k={k} must lie in 1..=64")));
    }
    if i > n {
        return Err(Error::invalid(format!("weight i={i} exceeds n={n}")));
    }
    let words = tuple_space(n, i, k, limits)?;
    let width = k as usize + 1;
    let (counts, zero) = fold_tuples(
        &words,
        k,
        || (vec![0u64; width], vec![0u64; width]),
        |(counts, zero), tuple| {
            let r = rank_words(tuple);
            if is_coloop_free_words(tuple) {
                counts[r] += 1;
            }
            if tuple.iter().fold(0, |a, &w| a ^ w) == 0 {
                zero[r] += 1;
            }
        },
        |(a, b), (c, d)| (add_vecs(a, c), add_vecs(b, d)),
    );
    Ok(RankProfile {
        n,
        i,
        k,
        counts: counts.into_iter().map(BigUint::from).collect(),
        zero_sum_by_rank: zero.into_iter().map(BigUint::from).collect(),
    })
}
