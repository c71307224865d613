//! Exact Krawtchouk tables, their norms under the uniform measure on the
//! cube, and the brute-force zero-sum tuple count they must agree with.
//!
//! `K_i(j) = sum_t (-1)^t C(j, t) C(n - j, i - t)` is the value at any point of
//! weight `j` of the sum of all weight-`i` Walsh characters. Norms are
//! expectations: `||K_i||_k^k = 2^-n sum_j C(n, j) |K_i(j)|^k`.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, BigNat, BigRat, BinomialRow};
use crate::error::{Error, Result};
use crate::gf2::weight_class_words;
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrawtchoukTable {
    n: u32,
    i: u32,
    values: Vec<BigInt>,
    weights: Vec<BigInt>,
}

impl KrawtchoukTable {
    /// Builds `K_i(0..=n)` from the alternating binomial sum.
    pub fn build(n: u32, i: u32, limits: &Limits) -> Result<Self> {
        check_range(n, i, limits)?;
        let values = (0..=n).map(|j| sum_formula(n, i, j)).collect();
        Ok(Self::from_parts(n, i, values))
    }

    /// All tables `K_0..=K_{i_max}` for length `n` via the three-term recurrence
    /// `(i+1) K_{i+1}(x) = (n - 2x) K_i(x) - (n - i + 1) K_{i-1}(x)`.
    pub fn build_by_recurrence(n: u32, i_max: u32, limits: &Limits) -> Result<Vec<Self>> {
        Self::recurrence_with(n, i_max, limits, false)
    }

    /// The recurrence with its back coefficient off by one when `tamper` is set.
    /// Exists so the verification suite can prove it notices a broken table.
    #[doc(hidden)]
    pub fn recurrence_with(n: u32, i_max: u32, limits: &Limits, tamper: bool) -> Result<Vec<Self>> {
        check_range(n, i_max, limits)?;
        let width = n as usize + 1;
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(i_max as usize + 1);
        rows.push(vec![BigInt::one(); width]);
        if i_max >= 1 {
            rows.push((0..=n).map(|x| BigInt::from(i64::from(n) - 2 * i64::from(x))).collect());
        }
        for i in 1..i_max {
            let row: Vec<BigInt> = (0..=n)
                .map(|x| {
                    let lead = BigInt::from(i64::from(n) - 2 * i64::from(x)) * &rows[i as usize][x as usize];
                    let back = BigInt::from(n - i + 1 - u32::from(tamper)) * &rows[i as usize - 1][x as usize];
                    (lead - back) / BigInt::from(i + 1)
                })
                .collect();
            rows.push(row);
        }
        Ok(rows
            .into_iter()
            .enumerate()
            .map(|(i, values)| Self::from_parts(n, i as u32, values))
            .collect())
    }

    /// Wraps precomputed values; used by tests that tamper with a table.
    pub fn from_parts(n: u32, i: u32, values: Vec<BigInt>) -> Self {
        assert_eq!(values.len(), n as usize + 1, "table needs n + 1 values");
        let weights = BinomialRow::new(u64::from(n))
            .as_slice()
            .iter()
            .map(|b| BigInt::from(b.clone()))
            .collect();
        KrawtchoukTable { n, i, values, weights }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn value(&self, j: u32) -> &BigInt {
        &self.values[j as usize]
    }

    fn weighted_sum(&self, k: u32, absolute: bool) -> BigRat {
        let total: BigInt = self
            .values
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(v, w)| {
                let base = if absolute { v.abs() } else { v.clone() };
                w * base.pow(k)
            })
            .sum();
        BigRat::new(total, BigInt::one() << self.n)
    }

    /// `||K_i||_k^k = 2^-n sum_j C(n, j) |K_i(j)|^k`, exact.
    pub fn abs_norm_k(&self, k: u32) -> BigRat {
        self.weighted_sum(k, true)
    }

    /// `E K_i^k = 2^-n sum_j C(n, j) K_i(j)^k`, exact. Always an integer: it
    /// counts ordered `k`-tuples of weight-`i` vectors with zero sum.
    pub fn signed_moment_k(&self, k: u32) -> BigRat {
        self.weighted_sum(k, false)
    }

    /// `abs_norm_k(k)` for every `k` in `1..=k_max` (index `k - 1`).
    pub fn abs_norms_up_to(&self, k_max: u32) -> Vec<BigRat> {
        let abs: Vec<BigInt> = self.values.iter().map(|v| v.abs()).collect();
        let mut powers: Vec<BigInt> = self.weights.clone();
        (1..=k_max)
            .map(|_| {
                for (p, a) in powers.iter_mut().zip(&abs) {
                    *p *= a;
                }
                BigRat::new(powers.iter().sum(), BigInt::one() << self.n)
            })
            .collect()
    }

    /// Share of `sum_j C(n, j) |K(j)|^k` carried by points outside the
    /// sign-change interval `[first sign change, last sign change]`.
    ///
    /// Returns `1.0` when the table never changes sign.
    pub fn outside_root_region_share(&self, k: u32) -> f64 {
        let sign = |v: &BigInt| v.signum();
        let n = self.n as usize;
        let lo = (1..=n).find(|&j| sign(&self.values[j]) != sign(&self.values[0]));
        let hi = (0..n).rev().find(|&j| sign(&self.values[j]) != sign(&self.values[n]));
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return 1.0;
        };
        let mass = |j: usize| &self.weights[j] * self.values[j].abs().pow(k);
        let total: BigInt = (0..=n).map(mass).sum();
        if total.is_zero() {
            return 1.0;
        }
        let inside: BigInt = (lo.min(hi)..=hi.max(lo)).map(mass).sum();
        crate::arith::rat_to_f64(&BigRat::new(total.clone() - inside, total))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,binom_n_j,k_i_j\n");
        for (j, (v, w)) in self.values.iter().zip(&self.weights).enumerate() {
            writeln!(out, "{j},{w},{v}").unwrap();
        }
        out
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            n: self.n,
            i: self.i,
            binom: self.weights.iter().map(|w| w.to_string()).collect(),
            values: self.values.iter().map(|v| v.to_string()).collect(),
        }
    }
}

/// JSON export of a table; integers as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub n: u32,
    pub i: u32,
    pub binom: Vec<String>,
    pub values: Vec<String>,
}

fn check_range(n: u32, i: u32, limits: &Limits) -> Result<()> {
    if i > n {
        return Err(Error::invalid(format!("degree {i} exceeds length {n}")));
    }
    if n > limits.max_kraw_n {
        return Err(Error::invalid(format!(
            "length {n} exceeds the Krawtchouk cap {}",
            limits.max_kraw_n
        )));
    }
    Ok(())
}

fn sum_formula(n: u32, i: u32, x: u32) -> BigInt {
    // C(x, t) ascending and C(n - x, i - t) descending in t, each updated by exact division.
    let rest = u64::from(n - x);
    let mut c_x = BigUint::one();
    let mut c_rest = binomial(rest, u64::from(i));
    let mut acc = BigInt::zero();
    for t in 0..=i.min(x) {
        let term = BigInt::from(&c_x * &c_rest);
        if t % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        c_x = c_x * (x - t) / (t + 1);
        let top = u64::from(i - t);
        // C(rest, top - 1) = C(rest, top) * top / (rest - top + 1)
        if top > 0 {
            c_rest = if top > rest {
                binomial(rest, top - 1)
            } else {
                c_rest * top / (rest - top + 1)
            };
        }
    }
    acc
}

/// Counts ordered `k`-tuples of weight-`i` vectors of length `n` whose XOR is zero,
/// by walking all `(k-1)`-tuples and testing the weight of their sum.
pub fn zero_sum_count_bruteforce(n: u32, i: u32, k: u32, limits: &Limits) -> Result<BigNat> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let words = weight_class_words(n as usize, i as usize, limits)?;
    let work = BigUint::from(words.len()).pow(k - 1);
    limits.check_tuples("zero-sum tuple enumeration", &work)?;
    if k == 1 {
        return Ok(BigUint::from(u32::from(i == 0)));
    }
    let depth = (k - 1) as usize;
    let count: u64 = words
        .par_iter()
        .map(|&first| {
            let mut local = 0u64;
            let mut idx = vec![0usize; depth - 1];
            loop {
                let acc = idx.iter().fold(first, |a, &j| a ^ words[j]);
                if acc.count_ones() == i {
                    local += 1;
                }
                // odometer over the remaining depth - 1 coordinates
                let mut d = 0;
                loop {
                    if d == idx.len() {
                        return local;
                    }
                    idx[d] += 1;
                    if idx[d] < words.len() {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
            }
        })
        .sum();
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn table(n: u32, i: u32) -> KrawtchoukTable {
        KrawtchoukTable::build(n, i, &Limits::default()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Character-sum oracle: K_i at a point of weight j is the sum over weight-i y of (-1)^<x,y>.
    fn character_sum(n: u32, i: u32, j: u32) -> i64 {
        let x: u64 = (1u64 << j) - 1;
        weight_class_words(n as usize, i as usize, &Limits::default())
            .unwrap()
            .iter()
            .map(|y| if (x & y).count_ones().is_multiple_of(2) { 1 } else { -1 })
            .sum()
    }

    #[test]
    fn table_examples() {
        assert_eq!(table(4, 2).values(), ints(&[6, 0, -2, 0, 6]).as_slice());
        assert_eq!(table(6, 0).values(), ints(&[1; 7]).as_slice());
        for n in 0..20 {
            for i in 0..=n {
                assert_eq!(table(n, i).value(0), &BigInt::from(binomial(n.into(), i.into())));
            }
        }
        assert!(KrawtchoukTable::build(4, 5, &Limits::default()).is_err());
        let small = Limits {
            max_kraw_n: 10,
            ..Limits::default()
        };
        assert!(KrawtchoukTable::build(11, 2, &small).is_err());
    }

    #[test]
    fn sum_formula_matches_character_sums() {
        for n in 0..=10 {
            for i in 0..=n {
                let t = table(n, i);
                for j in 0..=n {
                    assert_eq!(t.value(j), &BigInt::from(character_sum(n, i, j)), "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn recurrence_agrees_with_sum_formula() {
        for n in [0u32, 1, 2, 7, 16, 33, 64] {
            let rec = KrawtchoukTable::build_by_recurrence(n, n, &Limits::default()).unwrap();
            for (i, t) in rec.iter().enumerate() {
                assert_eq!(t, &table(n, i as u32), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn norm_examples() {
        let t = table(4, 2);
        assert_eq!(t.abs_norm_k(2), rat(6, 1));
        assert_eq!(t.abs_norm_k(3), rat(30, 1));
        assert_eq!(t.abs_norm_k(4), rat(168, 1));
        assert_eq!(t.signed_moment_k(2), rat(6, 1));
        assert_eq!(t.signed_moment_k(3), rat(24, 1));
        assert_eq!(table(4, 1).signed_moment_k(3), rat(0, 1));
        for k in 1..6 {
            assert_eq!(table(9, 0).abs_norm_k(k), rat(1, 1));
        }
        assert_eq!(
            t.abs_norms_up_to(4),
            vec![t.abs_norm_k(1), rat(6, 1), rat(30, 1), rat(168, 1)]
        );
    }

    #[test]
    fn zero_sum_examples() {
        let l = Limits::default();
        assert_eq!(zero_sum_count_bruteforce(4, 2, 2, &l).unwrap(), BigUint::from(6u32));
        assert_eq!(zero_sum_count_bruteforce(4, 2, 3, &l).unwrap(), BigUint::from(24u32));
        assert_eq!(zero_sum_count_bruteforce(7, 3, 1, &l).unwrap(), BigUint::zero());
        assert_eq!(zero_sum_count_bruteforce(7, 0, 1, &l).unwrap(), BigUint::one());
        let tight = Limits {
            max_tuple_work: 100,
            ..l
        };
        assert!(matches!(
            zero_sum_count_bruteforce(10, 5, 3, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn signed_moment_equals_zero_sum_count() {
        let l = Limits::default();
        for n in 1..=9 {
            for i in 0..=n {
                let t = table(n, i);
                for k in 1..=4 {
                    let m = t.signed_moment_k(k);
                    assert!(m.is_integer());
                    let count = zero_sum_count_bruteforce(n, i, k, &l).unwrap();
                    assert_eq!(m.to_integer(), BigInt::from(count), "n={n} i={i} k={k}");
                }
            }
        }
    }

    #[test]
    fn root_region_share_is_a_fraction() {
        let t = table(20, 4);
        let s = t.outside_root_region_share(6);
        assert!(s > 0.5 && s <= 1.0, "{s}");
        assert_eq!(table(5, 0).outside_root_region_share(3), 1.0);
    }

    #[test]
    fn exports() {
        let t = table(4, 2);
        assert_eq!(t.to_csv(), "j,binom_n_j,k_i_j\n0,1,6\n1,4,0\n2,6,-2\n3,4,0\n4,1,6\n");
        let json = serde_json::to_value(t.to_json()).unwrap();
        assert_eq!(json["values"][2], "-2");
        assert_eq!(json["binom"][2], "6");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn parseval_and_symmetry(n in 0u32..48, frac in 0.0f64..=1.0) {
                let i = (f64::from(n) * frac).round() as u32;
                let t = table(n, i);
                let c = BigRat::from_integer(BigInt::from(binomial(n.into(), i.into())));
                prop_assert_eq!(t.abs_norm_k(2), c.clone());
                prop_assert_eq!(t.signed_moment_k(2), c);
                if i.is_multiple_of(2) {
                    for j in 0..=n {
                        prop_assert_eq!(t.value(j), t.value(n - j));
                    }
                }
            }

            #[test]
            fn even_degree_even_order_norms_coincide(n in 1u32..30, half in 0u32..15, k in 1u32..6) {
                let i = (2 * half).min(n - n % 2);
                let t = table(n, i);
                prop_assert_eq!(t.abs_norm_k(2 * k), t.signed_moment_k(2 * k));
            }

            #[test]
            fn norms_are_log_convex(n in 1u32..30, frac in 0.0f64..=1.0, a in 1u32..10, gap in 1u32..6) {
                let i = (f64::from(n) * frac).round() as u32;
                let t = table(n, i);
                let (b, c) = (a + gap, a + 2 * gap);
                let nb = t.abs_norm_k(b);
                prop_assert!(&nb * &nb <= t.abs_norm_k(a) * t.abs_norm_k(c));
            }

            #[test]
            fn norm_at_least_origin_term(n in 1u32..30, frac in 0.0f64..=1.0, k in 1u32..12) {
                let i = (f64::from(n) * frac).round() as u32;
                let t = table(n, i);
                let c = BigInt::from(binomial(n.into(), i.into()));
                let bound = BigRat::new(c.pow(k), BigInt::one() << n);
                prop_assert!(t.abs_norm_k(k) >= bound);
            }
        }
    }
}
