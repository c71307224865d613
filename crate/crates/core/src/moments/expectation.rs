//! Closed form of `E_C prod_r Z_{u_r}` with `Z_u = 1{u in C} - p`.
//!
//! With `t` distinct vectors of multiplicities `s_1..s_t` summing to `k`,
//!
//! ```text
//! E prod Z = (-1)^k p^k sum_{x ⊆ [t]} (-1)^{|x|} p^{r(x) - <s,x>} prod_{d in x} (p^{s_d} - (p-1)^{s_d})
//! ```
//!
//! where `r(x)` is the rank of the selected distinct vectors and
//! `<s,x> = sum_{d in x} s_d`. Writing `p = a/b` in lowest terms, every term
//! is an integer over the common denominator `b^{k + r(S)}`:
//!
//! ```text
//! (-1)^{|x|} a^{k + r(x) - <s,x>} b^{r(S) - r(x)} prod_{d in x} (a^{s_d} - (a-b)^{s_d})
//! ```

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{fold_tuples, tuple_space, EnsembleParams};
use crate::arith::BigRat;
use crate::error::{Error, Result};
use crate::gf2::{VectorSequence, WordBasis, XorBasis};
use crate::limits::Limits;

/// Integer pieces of the closed form for one `p` and one multiplicity pattern.
struct Terms {
    a_pow: Vec<BigInt>,
    b_pow: Vec<BigInt>,
    c: Vec<BigInt>,
    b: BigInt,
    k: u32,
}

impl Terms {
    fn new(p: &BigRat, mults: &[u32]) -> Result<Self> {
        if !p.is_positive() || *p >= BigRat::one() {
            return Err(Error::invalid(format!("p = {p} must lie strictly between 0 and 1")));
        }
        let (a, b) = (p.numer().clone(), p.denom().clone());
        let k: u32 = mults.iter().sum();
        let t = mults.len() as u32;
        let powers = |base: &BigInt, upto: u32| {
            let mut v = vec![BigInt::one()];
            for e in 1..=upto {
                let next = &v[e as usize - 1] * base;
                v.push(next);
            }
            v
        };
        let a_minus_b = &a - &b;
        let c = mults.iter().map(|&s| a.pow(s) - a_minus_b.pow(s)).collect();
        Ok(Terms {
            a_pow: powers(&a, k + t),
            b_pow: powers(&b, t),
            c,
            b,
            k,
        })
    }

    fn term(&self, size: u32, rank_x: u32, mass_x: u32, rank_s: u32, prod: &BigInt) -> BigInt {
        let v = &self.a_pow[(self.k + rank_x - mass_x) as usize] * &self.b_pow[(rank_s - rank_x) as usize] * prod;
        if size % 2 == 1 {
            -v
        } else {
            v
        }
    }

    fn finish(&self, acc: BigInt, rank_s: u32) -> BigRat {
        let signed = if self.k % 2 == 1 { -acc } else { acc };
        BigRat::new(signed, self.b.pow(self.k + rank_s))
    }
}

/// Exact `E_C prod_r Z_{u_r}` for a sequence of nonzero vectors, by the
/// Möbius-inversion sum over subsets of its distinct vectors.
pub fn product_expectation(seq: &VectorSequence, p: &BigRat, limits: &Limits) -> Result<BigRat> {
    if seq.vectors().iter().any(|v| v.is_zero()) {
        return Err(Error::invalid("product_expectation needs nonzero vectors"));
    }
    let t = seq.distinct_count();
    if t > limits.max_distinct {
        return Err(Error::budget(
            "Möbius sum (2^t terms)",
            format!("t = {t}"),
            format!("t <= {}", limits.max_distinct),
        ));
    }
    let terms = Terms::new(p, seq.multiplicities())?;
    let distinct: Vec<_> = seq.distinct().cloned().collect();
    let rank_s = seq.rank() as u32;

    struct Walk<'a> {
        terms: &'a Terms,
        distinct: &'a [crate::gf2::BitVec],
        mults: &'a [u32],
        rank_s: u32,
    }
    impl Walk<'_> {
        fn go(&self, d: usize, basis: &XorBasis, mass: u32, size: u32, prod: &BigInt) -> BigInt {
            if d == self.distinct.len() {
                return self.terms.term(size, basis.rank() as u32, mass, self.rank_s, prod);
            }
            let skip = self.go(d + 1, basis, mass, size, prod);
            let mut with = basis.clone();
            with.insert(&self.distinct[d]);
            let take = self.go(d + 1, &with, mass + self.mults[d], size + 1, &(prod * &self.terms.c[d]));
            skip + take
        }
    }
    let walk = Walk {
        terms: &terms,
        distinct: &distinct,
        mults: seq.multiplicities(),
        rank_s,
    };
    let acc = walk.go(0, &XorBasis::new(), 0, 0, &BigInt::one());
    Ok(terms.finish(acc, rank_s))
}

/// Everything the closed form depends on: the multiplicities of the distinct
/// vectors (first-occurrence order) and the rank of every subset of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceShape {
    multiplicities: Vec<u32>,
    subset_ranks: Vec<u32>,
}

impl SequenceShape {
    pub fn of(seq: &VectorSequence) -> Self {
        let t = seq.distinct_count();
        SequenceShape {
            multiplicities: seq.multiplicities().to_vec(),
            subset_ranks: (0..1u64 << t).map(|mask| seq.subset_rank(mask) as u32).collect(),
        }
    }

    pub(crate) fn of_words(words: &[u64]) -> Self {
        let mut distinct: Vec<u64> = Vec::with_capacity(words.len());
        let mut multiplicities: Vec<u32> = Vec::with_capacity(words.len());
        for &w in words {
            match distinct.iter().position(|&d| d == w) {
                Some(d) => multiplicities[d] += 1,
                None => {
                    distinct.push(w);
                    multiplicities.push(1);
                }
            }
        }
        let t = distinct.len();
        let subset_ranks = (0..1u64 << t)
            .map(|mask| {
                let mut basis = WordBasis::new();
                for (d, &w) in distinct.iter().enumerate() {
                    if mask >> d & 1 == 1 {
                        basis.insert(w);
                    }
                }
                basis.rank() as u32
            })
            .collect();
        SequenceShape {
            multiplicities,
            subset_ranks,
        }
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn rank(&self) -> u32 {
        *self.subset_ranks.last().unwrap()
    }

    /// The closed form evaluated from the shape alone.
    pub fn product_expectation(&self, p: &BigRat) -> Result<BigRat> {
        let terms = Terms::new(p, &self.multiplicities)?;
        let t = self.multiplicities.len();
        let rank_s = self.rank();
        let mut prods: Vec<BigInt> = Vec::with_capacity(1 << t);
        let mut masses: Vec<u32> = Vec::with_capacity(1 << t);
        let mut acc = BigInt::zero();
        for mask in 0..1usize << t {
            let (prod, mass) = if mask == 0 {
                (BigInt::one(), 0)
            } else {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                (&prods[rest] * &terms.c[low], masses[rest] + self.multiplicities[low])
            };
            acc += terms.term(mask.count_ones(), self.subset_ranks[mask], mass, rank_s, &prod);
            prods.push(prod);
            masses.push(mass);
        }
        Ok(terms.finish(acc, rank_s))
    }
}

/// `sum_{S in L^k} E prod Z` with one closed-form evaluation per distinct shape.
pub(crate) fn central_moment_tuple_sum(params: &EnsembleParams, k: u32, limits: &Limits) -> Result<BigRat> {
    if k == 0 {
        return Ok(BigRat::one());
    }
    let words = tuple_space(params.n(), params.i(), k, limits)?;
    let shapes: HashMap<SequenceShape, u64> = fold_tuples(
        &words,
        k,
        HashMap::new,
        |acc, tuple| *acc.entry(SequenceShape::of_words(tuple)).or_insert(0) += 1,
        |mut a, b| {
            for (s, c) in b {
                *a.entry(s).or_insert(0) += c;
            }
            a
        },
    );
    let p = params.p();
    let shapes: Vec<_> = shapes.into_iter().collect();
    shapes
        .par_iter()
        .map(|(shape, count)| Ok(shape.product_expectation(&p)? * BigRat::from_integer(BigInt::from(*count))))
        .try_reduce(BigRat::zero, |a, b| Ok(a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{pow2_neg, rat};
    use crate::gf2::coloop_positions;
    use crate::moments::product_expectation_oracle;

    fn seq(words: &[u64]) -> VectorSequence {
        VectorSequence::from_words(4, words).unwrap()
    }

    /// Inclusion-exclusion from the rank rule P(all of R in C) = p^{r(R)}:
    /// E prod (Y_u - p) = sum over subsets B of positions of p^{r(B)} (-p)^{k-|B|}.
    fn expand_by_positions(words: &[u64], p: &BigRat) -> BigRat {
        let k = words.len();
        let mut acc = BigRat::zero();
        for mask in 0..1u32 << k {
            let chosen: Vec<u64> = (0..k).filter(|j| mask >> j & 1 == 1).map(|j| words[j]).collect();
            let r = crate::gf2::rank_words(&chosen) as i32;
            let minus_p = -p.clone();
            acc += p.pow(r) * minus_p.pow(k as i32 - chosen.len() as i32);
        }
        acc
    }

    #[test]
    fn closed_form_examples() {
        let l = Limits::default();
        let p = rat(1, 8);
        assert_eq!(product_expectation(&seq(&[3]), &p, &l).unwrap(), BigRat::zero());
        assert_eq!(
            product_expectation(&seq(&[3, 3]), &p, &l).unwrap(),
            &p * (BigRat::one() - &p)
        );
        let tri = seq(&[0b0011, 0b0110, 0b0101]);
        let expect = &p * &p * (BigRat::one() - &p);
        assert_eq!(product_expectation(&tri, &p, &l).unwrap(), expect);
        assert_eq!(SequenceShape::of(&tri).product_expectation(&p).unwrap(), expect);
    }

    #[test]
    fn closed_form_matches_position_expansion() {
        let l = Limits::default();
        let all: Vec<u64> = (1..16).collect();
        for p in [rat(1, 2), rat(1, 32), rat(2, 3), rat(3, 7)] {
            for a in &all {
                for b in &all {
                    for c in [1u64, 6, 9, 15] {
                        let words = [*a, *b, c, *a ^ *b];
                        if words.contains(&0) {
                            continue;
                        }
                        let s = seq(&words);
                        let got = product_expectation(&s, &p, &l).unwrap();
                        assert_eq!(got, expand_by_positions(&words, &p), "{words:?} p={p}");
                        assert_eq!(SequenceShape::of(&s).product_expectation(&p).unwrap(), got);
                        assert_eq!(SequenceShape::of_words(&words), SequenceShape::of(&s));
                        if !coloop_positions(&s).is_empty() {
                            assert!(got.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_ensemble_on_triples() {
        let l = Limits::default();
        let params = EnsembleParams::new(4, 2, 2).unwrap();
        for a in 1..16u64 {
            for b in 1..16u64 {
                for c in [3u64, 5, 10] {
                    let s = seq(&[a, b, c]);
                    assert_eq!(
                        product_expectation(&s, &params.p(), &l).unwrap(),
                        product_expectation_oracle(&s, &params, &l).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let l = Limits::default();
        assert!(product_expectation(&seq(&[3]), &rat(1, 1), &l).is_err());
        assert!(product_expectation(&seq(&[3]), &rat(0, 1), &l).is_err());
        let z = VectorSequence::with_zeros(vec!["0000".parse().unwrap()]).unwrap();
        assert!(product_expectation(&z, &rat(1, 2), &l).is_err());
        let tight = Limits { max_distinct: 2, ..l };
        assert!(matches!(
            product_expectation(&seq(&[1, 2, 4]), &rat(1, 2), &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn many_distinct_vectors() {
        // 12 distinct vectors summing to zero in pairs: (e_j, e_j) repeated.
        let words: Vec<u64> = (0..12).flat_map(|j| [1u64 << j, 1u64 << j]).collect();
        let s = VectorSequence::from_words(12, &words).unwrap();
        let p = pow2_neg(5);
        let single = &p * (BigRat::one() - &p);
        // independent coordinates: the expectation factorises
        assert_eq!(product_expectation(&s, &p, &Limits::default()).unwrap(), single.pow(12));
    }
}
