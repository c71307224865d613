//! Brute-force averages over every parity-check matrix of a given shape.
//!
//! Matrix number `idx` in `0..2^{mn}` has column `j` equal to bits
//! `m*j .. m*(j+1)` of `idx`. Kernels are counted with matrix multiplicity.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;

use super::EnsembleParams;
use crate::arith::{BigNat, BigRat};
use crate::error::{Error, Result};
use crate::gf2::{count_kernel_words, VectorSequence};
use crate::limits::Limits;

const BLOCK: u64 = 1 << 14;

fn columns_of(idx: u64, n: usize, m: u32, out: &mut [u128]) {
    let mask = (1u64 << m) - 1;
    for (j, c) in out.iter_mut().enumerate().take(n) {
        *c = u128::from((idx >> (m as usize * j)) & mask);
    }
}

/// Exact distribution of `X` over all `2^{mn}` matrices: value -> matrix count.
pub fn x_distribution(params: &EnsembleParams, limits: &Limits) -> Result<BTreeMap<u64, BigNat>> {
    let (n, m) = (params.n() as usize, params.m());
    let bits = n as u64 * u64::from(m);
    limits.check_matrix_bits("ensemble enumeration", bits)?;
    let total = 1u64 << bits;
    let i = params.i() as usize;
    let blocks = total.div_ceil(BLOCK);
    let merged = (0..blocks)
        .into_par_iter()
        .map(|b| -> Result<HashMap<u64, u64>> {
            let mut hist = HashMap::new();
            let mut cols = vec![0u128; n];
            for idx in b * BLOCK..((b + 1) * BLOCK).min(total) {
                columns_of(idx, n, m, &mut cols);
                let x = count_kernel_words(&cols, m as usize, i, limits)?;
                *hist.entry(x as u64).or_insert(0) += 1;
            }
            Ok(hist)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (x, c) in b {
                *a.entry(x).or_insert(0) += c;
            }
            Ok(a)
        })?;
    Ok(merged.into_iter().map(|(x, c)| (x, BigUint::from(c))).collect())
}

/// `E_C prod_r (1{M u_r = 0} - p)` averaged over every matrix, exactly.
pub fn product_expectation_oracle(seq: &VectorSequence, params: &EnsembleParams, limits: &Limits) -> Result<BigRat> {
    let (n, m) = (params.n() as usize, params.m());
    if seq.vector_len() != n {
        return Err(Error::invalid(format!(
            "sequence vectors have length {}, ensemble has n={n}",
            seq.vector_len()
        )));
    }
    let bits = n as u64 * u64::from(m);
    limits.check_matrix_bits("ensemble oracle", bits)?;
    let total = 1u64 << bits;
    let k = seq.len();
    let distinct: Vec<u64> = seq.distinct().map(|v| v.as_word().unwrap()).collect();
    let mults = seq.multiplicities().to_vec();

    // hist[a] = number of matrices whose kernel holds exactly `a` entries of the sequence
    let hist = (0..total.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut hist = vec![0u64; k + 1];
            let mut cols = vec![0u128; n];
            for idx in b * BLOCK..((b + 1) * BLOCK).min(total) {
                columns_of(idx, n, m, &mut cols);
                let mut a = 0usize;
                for (&u, &s) in distinct.iter().zip(&mults) {
                    let mut syn = 0u128;
                    let mut w = u;
                    while w != 0 {
                        syn ^= cols[w.trailing_zeros() as usize];
                        w &= w - 1;
                    }
                    if syn == 0 {
                        a += s as usize;
                    }
                }
                hist[a] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; k + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    // (1 - p)^a (-p)^{k-a} = (2^m - 1)^a (-1)^{k-a} / 2^{mk}
    let q: BigInt = (BigInt::from(1u32) << m) - 1u32;
    let mut acc = BigInt::zero();
    for (a, &count) in hist.iter().enumerate() {
        let mut term = q.pow(a as u32) * count;
        if (k - a) % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    Ok(BigRat::new(acc, BigInt::from(1) << (bits as u32 + m * k as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn seq(words: &[u64]) -> VectorSequence {
        VectorSequence::from_words(4, words).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let l = Limits::default();
        let p41 = EnsembleParams::new(4, 2, 1).unwrap();
        assert_eq!(
            product_expectation_oracle(&seq(&[0b0011, 0b0011]), &p41, &l).unwrap(),
            rat(1, 4)
        );
        assert_eq!(
            product_expectation_oracle(&seq(&[0b0011]), &p41, &l).unwrap(),
            rat(0, 1)
        );
        let p42 = EnsembleParams::new(4, 2, 2).unwrap();
        let triangle = seq(&[0b0011, 0b0110, 0b0101]);
        assert_eq!(product_expectation_oracle(&triangle, &p42, &l).unwrap(), rat(3, 64));
    }

    #[test]
    fn oracle_rejects_mismatch_and_cap() {
        let l = Limits::default();
        let p = EnsembleParams::new(5, 2, 1).unwrap();
        assert!(product_expectation_oracle(&seq(&[1]), &p, &l).is_err());
        let big = EnsembleParams::new(9, 2, 3).unwrap();
        let s = VectorSequence::from_words(9, &[3]).unwrap();
        let tight = Limits {
            max_matrix_bits: 20,
            ..l
        };
        assert!(matches!(
            product_expectation_oracle(&s, &big, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(x_distribution(&big, &tight).is_err());
    }

    #[test]
    fn distribution_totals_and_mean() {
        let l = Limits::default();
        let p = EnsembleParams::new(5, 2, 2).unwrap();
        let d = x_distribution(&p, &l).unwrap();
        let total: BigNat = d.values().sum();
        assert_eq!(total, BigUint::from(1u32) << 10);
        let sum: BigNat = d.iter().map(|(x, c)| c * *x).sum();
        assert_eq!(BigRat::new(sum.into(), total.into()), p.mean());
    }
}
