//! Cover configurations: sets `S_1..S_v` of `[r]` that determine the last `v`
//! entries of an `(r + v)`-tuple as XORs of the first `r`.
//!
//! Sets are bitmasks; bit `a - 1` stands for element `a` of `[r]`.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::Rng;
use serde::Serialize;

use super::{fold_tuples, tuple_space};
use crate::arith::{BigNat, BigRat};
use crate::error::{Error, Result};
use crate::gf2::{low_mask, BitVec};
use crate::krawtchouk::KrawtchoukTable;
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoverConfig {
    r: u32,
    sets: Vec<u32>,
}

impl CoverConfig {
    /// Each set must be nonempty, add an element not covered by the earlier
    /// sets, and together the sets must cover `[r]`.
    pub fn new(r: u32, sets: Vec<u32>) -> Result<Self> {
        if r == 0 || r > 31 {
            return Err(Error::invalid(format!("r={r} must lie in 1..=31")));
        }
        if sets.is_empty() {
            return Err(Error::invalid("a cover needs at least one set"));
        }
        let universe = (1u32 << r) - 1;
        let mut seen = 0u32;
        for (d, &s) in sets.iter().enumerate() {
            if s == 0 {
                return Err(Error::invalid(format!("set {} is empty", d + 1)));
            }
            if s & !universe != 0 {
                return Err(Error::invalid(format!("set {} leaves [{r}]", d + 1)));
            }
            if s & !seen == 0 {
                return Err(Error::invalid(format!("set {} adds no new element", d + 1)));
            }
            seen |= s;
        }
        if seen != universe {
            return Err(Error::invalid(format!("sets do not cover [{r}]")));
        }
        Ok(CoverConfig { r, sets })
    }

    /// Builds from 1-based element lists, e.g. `&[&[1, 2]]`.
    pub fn from_lists(r: u32, lists: &[&[u32]]) -> Result<Self> {
        let mut sets = Vec::with_capacity(lists.len());
        for list in lists {
            let mut mask = 0u32;
            for &a in *list {
                if a == 0 || a > r {
                    return Err(Error::invalid(format!("element {a} outside [{r}]")));
                }
                mask |= 1 << (a - 1);
            }
            sets.push(mask);
        }
        CoverConfig::new(r, sets)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn v(&self) -> u32 {
        self.sets.len() as u32
    }

    pub fn sets(&self) -> &[u32] {
        &self.sets
    }

    /// `a_d = |S_d \ (S_1 ∪ .. ∪ S_{d-1})| + 1`.
    pub fn a_profile(&self) -> Vec<u32> {
        let mut seen = 0u32;
        self.sets
            .iter()
            .map(|&s| {
                let fresh = (s & !seen).count_ones();
                seen |= s;
                fresh + 1
            })
            .collect()
    }

    /// Every valid configuration with the given `r` and `v`.
    pub fn enumerate_all(r: u32, v: u32) -> Vec<CoverConfig> {
        if r == 0 || r > 16 || v == 0 || v > r {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut sets = Vec::with_capacity(v as usize);
        extend(r, v, 0, &mut sets, &mut out);
        out
    }
}

fn extend(r: u32, v: u32, seen: u32, sets: &mut Vec<u32>, out: &mut Vec<CoverConfig>) {
    let universe = (1u32 << r) - 1;
    if sets.len() == v as usize {
        if seen == universe {
            out.push(CoverConfig { r, sets: sets.clone() });
        }
        return;
    }
    for s in 1..=universe {
        if s & !seen != 0 {
            sets.push(s);
            extend(r, v, seen | s, sets, out);
            sets.pop();
        }
    }
}

fn xor_of(set: u32, xs: &[u64]) -> u64 {
    let mut acc = 0;
    let mut s = set;
    while s != 0 {
        acc ^= xs[s.trailing_zeros() as usize];
        s &= s - 1;
    }
    acc
}

/// Number of `(r + v)`-tuples in `L^{r+v}` with `x_{r+d} = XOR_{a in S_d} x_a`.
pub fn structured_tuple_count(n: u32, i: u32, cfg: &CoverConfig, limits: &Limits) -> Result<BigNat> {
    if i > n {
        return Err(Error::invalid(format!("weight i={i} exceeds n={n}")));
    }
    let words = tuple_space(n, i, cfg.r, limits)?;
    let count = fold_tuples(
        &words,
        cfg.r,
        || 0u64,
        |acc, xs| {
            if cfg.sets.iter().all(|&s| xor_of(s, xs).count_ones() == i) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    Ok(BigUint::from(count))
}

/// `prod_d ||K_i||_{a_d}^{a_d}`, the product-of-norms bound on the structured count.
pub fn holder_bound(cfg: &CoverConfig, table: &KrawtchoukTable) -> BigRat {
    cfg.a_profile()
        .into_iter()
        .fold(BigRat::one(), |acc, a| acc * table.abs_norm_k(a))
}

/// Outcome of one evaluation of the dual character sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCheck {
    /// `sum_{x in B} (-1)^{sum_j <x_j, y_j>}`, computed term by term.
    pub sum: BigInt,
    /// `2^{rn}` when the sample lies in the dual, otherwise 0.
    pub expected: BigInt,
    pub in_dual: bool,
    pub matches: bool,
}

/// Whether `(y_1..y_{r+v})` is orthogonal to every tuple of `B`, that is
/// `y_a = XOR_{d : a in S_d} y_{r+d}` for each `a in [r]`.
fn in_dual(cfg: &CoverConfig, ys: &[u64]) -> bool {
    let r = cfg.r as usize;
    (0..r).all(|a| {
        let tail = cfg
            .sets
            .iter()
            .enumerate()
            .filter(|(_, &s)| s >> a & 1 == 1)
            .fold(0, |acc, (d, _)| acc ^ ys[r + d]);
        ys[a] == tail
    })
}

/// Sums the characters of `y` over the code `B` of tuples determined by `cfg`
/// and compares with the closed form.
pub fn dual_character_sum_check(cfg: &CoverConfig, n: u32, sample: &[BitVec], limits: &Limits) -> Result<DualCheck> {
    let total = (cfg.r + cfg.v()) as usize;
    if sample.len() != total {
        return Err(Error::invalid(format!(
            "sample has {} entries, config needs {total}",
            sample.len()
        )));
    }
    if sample.iter().any(|y| y.len() != n as usize) {
        return Err(Error::invalid(format!("sample entries must have length {n}")));
    }
    let bits = total as u64 * u64::from(n);
    if bits > u64::from(limits.max_dual_bits) {
        return Err(Error::budget(
            "dual character sum",
            format!("(r+v)n = {bits}"),
            limits.max_dual_bits,
        ));
    }
    let ys: Vec<u64> = sample.iter().map(|y| y.as_word().unwrap_or(0)).collect();
    let r = cfg.r as usize;
    let rn = r as u32 * n;
    let mask = low_mask(n as usize);
    let mut xs = vec![0u64; r];
    let mut sum: i64 = 0;
    for idx in 0..1u64 << rn {
        for (a, x) in xs.iter_mut().enumerate() {
            *x = (idx >> (a as u32 * n)) & mask;
        }
        let mut parity = xs.iter().zip(&ys).fold(0, |acc, (x, y)| acc ^ (x & y).count_ones());
        for (d, &s) in cfg.sets.iter().enumerate() {
            parity ^= (xor_of(s, &xs) & ys[r + d]).count_ones();
        }
        sum += if parity & 1 == 0 { 1 } else { -1 };
    }
    let in_dual = in_dual(cfg, &ys);
    let expected = if in_dual { BigInt::one() << rn } else { BigInt::from(0) };
    let sum = BigInt::from(sum);
    Ok(DualCheck {
        matches: sum == expected,
        sum,
        expected,
        in_dual,
    })
}

/// A random sample `y_1..y_{r+v}` of length-`n` vectors that lies in the dual
/// of `B` when `in_dual` is set and outside it otherwise.
pub fn sample_dual_point<R: Rng + ?Sized>(cfg: &CoverConfig, n: u32, in_dual: bool, rng: &mut R) -> Vec<BitVec> {
    assert!((1..=64).contains(&n), "length must lie in 1..=64");
    let r = cfg.r as usize;
    let total = r + cfg.sets.len();
    let mask = low_mask(n as usize);
    let ys = loop {
        let mut ys: Vec<u64> = (0..total).map(|_| rng.random::<u64>() & mask).collect();
        if in_dual {
            for a in 0..r {
                ys[a] = cfg
                    .sets
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s >> a & 1 == 1)
                    .fold(0, |acc, (d, _)| acc ^ ys[r + d]);
            }
            break ys;
        }
        if !self::in_dual(cfg, &ys) {
            break ys;
        }
    };
    ys.into_iter().map(|w| BitVec::from_word(n as usize, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{binomial, nat_to_rat, rat};
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation_and_profile() {
        assert!(CoverConfig::new(2, vec![0b01, 0]).is_err());
        assert!(CoverConfig::new(2, vec![0b01]).is_err());
        assert!(CoverConfig::new(2, vec![0b01, 0b01]).is_err());
        assert!(CoverConfig::new(2, vec![0b100]).is_err());
        assert!(CoverConfig::new(2, vec![]).is_err());
        assert!(CoverConfig::from_lists(2, &[&[]]).is_err());
        let c = CoverConfig::from_lists(3, &[&[1, 2], &[2, 3]]).unwrap();
        assert_eq!(c.a_profile(), vec![3, 2]);
        for r in 1..=4 {
            for v in 1..=r {
                let all = CoverConfig::enumerate_all(r, v);
                assert!(!all.is_empty());
                for cfg in all {
                    let a = cfg.a_profile();
                    assert_eq!(a.iter().sum::<u32>(), r + v);
                    assert!(a.iter().all(|&x| x >= 2));
                    assert_eq!(CoverConfig::new(cfg.r(), cfg.sets().to_vec()).unwrap(), cfg);
                }
            }
        }
        assert!(CoverConfig::enumerate_all(2, 3).is_empty());
        assert_eq!(CoverConfig::enumerate_all(1, 1).len(), 1);
    }

    #[test]
    fn structured_count_examples() {
        let l = Limits::default();
        let single = CoverConfig::from_lists(1, &[&[1]]).unwrap();
        let pair = CoverConfig::from_lists(2, &[&[1, 2]]).unwrap();
        let t = KrawtchoukTable::build(4, 2, &l).unwrap();
        assert_eq!(structured_tuple_count(4, 2, &single, &l).unwrap(), BigUint::from(6u32));
        assert_eq!(holder_bound(&single, &t), rat(6, 1));
        assert_eq!(structured_tuple_count(4, 2, &pair, &l).unwrap(), BigUint::from(24u32));
        assert_eq!(holder_bound(&pair, &t), rat(30, 1));
        let t0 = KrawtchoukTable::build(4, 0, &l).unwrap();
        assert_eq!(holder_bound(&pair, &t0), rat(1, 1));
        for n in 2..=8u32 {
            for i in 1..=n {
                assert_eq!(
                    structured_tuple_count(n, i, &single, &l).unwrap(),
                    binomial(n.into(), i.into())
                );
            }
        }
    }

    /// `|A| = 2^{-vn} sum_{y_{r+1..r+v}} prod_d K(y_{r+d}) prod_a K(XOR_{d : a in S_d} y_{r+d})`.
    fn fourier_count(n: u32, i: u32, cfg: &CoverConfig) -> BigRat {
        let t = KrawtchoukTable::build(n, i, &Limits::default()).unwrap();
        let v = cfg.v() as usize;
        let r = cfg.r() as usize;
        let mut acc = BigInt::zero();
        let mut ys = vec![0u64; v];
        for idx in 0..1u64 << (v as u32 * n) {
            for (d, y) in ys.iter_mut().enumerate() {
                *y = (idx >> (d as u32 * n)) & low_mask(n as usize);
            }
            let mut prod = BigInt::one();
            for y in &ys {
                prod *= t.value(y.count_ones());
            }
            for a in 0..r {
                let y = cfg
                    .sets()
                    .iter()
                    .zip(&ys)
                    .filter(|(&s, _)| s >> a & 1 == 1)
                    .fold(0, |acc, (_, y)| acc ^ y);
                prod *= t.value(y.count_ones());
            }
            acc += prod;
        }
        BigRat::new(acc, BigInt::one() << (v as u32 * n))
    }

    #[test]
    fn structured_count_matches_fourier_side_and_bound() {
        let l = Limits::default();
        for n in 3..=6u32 {
            for i in [2, n / 2] {
                let t = KrawtchoukTable::build(n, i, &l).unwrap();
                for r in 1..=3 {
                    for v in 1..=2.min(r) {
                        for cfg in CoverConfig::enumerate_all(r, v) {
                            let count = nat_to_rat(&structured_tuple_count(n, i, &cfg, &l).unwrap());
                            assert!(count <= holder_bound(&cfg, &t), "n={n} i={i} {cfg:?}");
                            if v * n <= 12 {
                                assert_eq!(count, fourier_count(n, i, &cfg), "n={n} i={i} {cfg:?}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dual_sum_examples() {
        let l = Limits::default();
        let cfg = CoverConfig::from_lists(1, &[&[1]]).unwrap();
        let y = |w| BitVec::from_word(2, w);
        let same = dual_character_sum_check(&cfg, 2, &[y(0b10), y(0b10)], &l).unwrap();
        assert_eq!(same.sum, BigInt::from(4));
        assert!(same.in_dual && same.matches);
        let apart = dual_character_sum_check(&cfg, 2, &[y(0b10), y(0b11)], &l).unwrap();
        assert_eq!(apart.sum, BigInt::from(0));
        assert!(!apart.in_dual && apart.matches);
        let zero = dual_character_sum_check(&cfg, 2, &[y(0), y(0)], &l).unwrap();
        assert_eq!(zero.sum, BigInt::from(4));
        assert!(dual_character_sum_check(&cfg, 2, &[y(0)], &l).is_err());
        let wide = CoverConfig::from_lists(2, &[&[1, 2]]).unwrap();
        let long: Vec<BitVec> = (0..3).map(|_| BitVec::zeros(9)).collect();
        assert!(matches!(
            dual_character_sum_check(&wide, 9, &long, &l),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn sampled_points_land_where_asked() {
        let l = Limits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for cfg in CoverConfig::enumerate_all(2, 2)
            .into_iter()
            .chain(CoverConfig::enumerate_all(3, 1))
        {
            let n = 24 / (cfg.r() + cfg.v());
            for flag in [true, false] {
                for _ in 0..5 {
                    let ys = sample_dual_point(&cfg, n, flag, &mut rng);
                    let check = dual_character_sum_check(&cfg, n, &ys, &l).unwrap();
                    assert_eq!(check.in_dual, flag);
                    assert!(check.matches, "{cfg:?}");
                }
            }
        }
    }
}
