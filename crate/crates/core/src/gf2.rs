//! Bit vectors, GF(2) ranks, coloops, weight classes and kernel weight counts.
//!
//! Vectors are packed little-endian into `u64` words: position `j` lives in
//! bit `j % 64` of word `j / 64`. The enumeration engines work on bare `u64`
//! words (so they need `n <= 64`); the public [`BitVec`] type has no length
//! limit.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, BigNat};
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// The low `len` bits of `word`.
    pub fn from_word(len: usize, word: u64) -> Self {
        assert!(len <= 64, "from_word needs len <= 64");
        let mut v = BitVec::zeros(len);
        if len > 0 {
            v.words[0] = word & low_mask(len);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            v.set(j, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len);
        self.words[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, j: usize, bit: bool) {
        assert!(j < self.len);
        let w = &mut self.words[j / 64];
        if bit {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The packed word, for vectors of length at most 64.
    pub fn as_word(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn leading_bit(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Hex encoding in reading order: position 0 is the most significant bit
    /// of the first digit; the last digit is zero-padded on the right.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.len.div_ceil(4));
        for chunk in 0..self.len.div_ceil(4) {
            let mut digit = 0u32;
            for b in 0..4 {
                let j = chunk * 4 + b;
                if j < self.len && self.get(j) {
                    digit |= 8 >> b;
                }
            }
            out.push(char::from_digit(digit, 16).unwrap());
        }
        out
    }

    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        if hex.len() != len.div_ceil(4) {
            return Err(Error::invalid(format!(
                "hex row {hex:?} has {} digits, expected {} for length {len}",
                hex.len(),
                len.div_ceil(4)
            )));
        }
        let mut v = BitVec::zeros(len);
        for (chunk, c) in hex.chars().enumerate() {
            let digit = c
                .to_digit(16)
                .ok_or_else(|| Error::invalid(format!("bad hex digit {c:?}")))?;
            for b in 0..4 {
                let j = chunk * 4 + b;
                let bit = digit & (8 >> b) != 0;
                if j < len {
                    v.set(j, bit);
                } else if bit {
                    return Err(Error::invalid(format!("padding bits set in hex row {hex:?}")));
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVec {
    type Err = Error;

    /// Parses a string of `0`/`1` characters, position 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::invalid(format!("bad bit character {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitVec::from_bits(&bits))
    }
}

pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Echelon basis over [`BitVec`]s, keyed by leading bit.
#[derive(Debug, Clone, Default)]
pub struct XorBasis {
    rows: Vec<BitVec>,
}

impl XorBasis {
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce(&self, v: &mut BitVec) {
        // Rows are kept sorted by strictly decreasing leading bit.
        for row in &self.rows {
            let lead = row.leading_bit().unwrap();
            if v.get(lead) {
                v.xor_assign(row);
            }
        }
    }

    /// Inserts `v`; returns `true` if it was independent of the basis.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let mut v = v.clone();
        self.reduce(&mut v);
        match v.leading_bit() {
            None => false,
            Some(lead) => {
                let pos = self
                    .rows
                    .iter()
                    .position(|r| r.leading_bit().unwrap() < lead)
                    .unwrap_or(self.rows.len());
                self.rows.insert(pos, v);
                true
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        self.reduce(&mut v);
        v.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Echelon basis over single words, indexed by leading bit.
#[derive(Debug, Clone, Copy)]
pub struct WordBasis {
    rows: [u64; 64],
    rank: u32,
}

impl Default for WordBasis {
    fn default() -> Self {
        WordBasis { rows: [0; 64], rank: 0 }
    }
}

impl WordBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            if self.rows[lead] == 0 {
                return v;
            }
            v ^= self.rows[lead];
        }
        0
    }

    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        self.rows[63 - v.leading_zeros() as usize] = v;
        self.rank += 1;
        true
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }
}

/// GF(2) rank of a list of vectors (order and repeats are irrelevant).
pub fn rank(vectors: &[BitVec]) -> usize {
    let mut basis = XorBasis::new();
    vectors.iter().filter(|v| basis.insert(v)).count()
}

pub fn rank_words(vectors: &[u64]) -> usize {
    let mut basis = WordBasis::new();
    vectors.iter().filter(|&&v| basis.insert(v)).count()
}

/// An ordered `k`-tuple of vectors together with its multiplicity pattern.
///
/// The distinct vectors are listed in first-occurrence order; `multiplicities[d]`
/// counts how often `distinct()[d]` appears.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSequence {
    vectors: Vec<BitVec>,
    first_occurrence: Vec<usize>,
    multiplicities: Vec<u32>,
    slot: Vec<usize>,
}

impl VectorSequence {
    /// Builds a sequence of nonzero vectors of a common length.
    pub fn new(vectors: Vec<BitVec>) -> Result<Self> {
        Self::build(vectors, false)
    }

    /// Like [`VectorSequence::new`] but accepts zero vectors.
    pub fn with_zeros(vectors: Vec<BitVec>) -> Result<Self> {
        Self::build(vectors, true)
    }

    fn build(vectors: Vec<BitVec>, allow_zero: bool) -> Result<Self> {
        if let Some(first) = vectors.first() {
            if vectors.iter().any(|v| v.len() != first.len()) {
                return Err(Error::invalid("vectors in a sequence must share one length"));
            }
        }
        if !allow_zero && vectors.iter().any(BitVec::is_zero) {
            return Err(Error::invalid("zero vector in a sequence of nonzero vectors"));
        }
        let mut first_occurrence: Vec<usize> = Vec::new();
        let mut multiplicities: Vec<u32> = Vec::new();
        let mut slot = Vec::with_capacity(vectors.len());
        for (pos, v) in vectors.iter().enumerate() {
            match first_occurrence.iter().position(|&f| &vectors[f] == v) {
                Some(d) => {
                    multiplicities[d] += 1;
                    slot.push(d);
                }
                None => {
                    slot.push(first_occurrence.len());
                    first_occurrence.push(pos);
                    multiplicities.push(1);
                }
            }
        }
        Ok(VectorSequence {
            vectors,
            first_occurrence,
            multiplicities,
            slot,
        })
    }

    pub fn from_words(n: usize, words: &[u64]) -> Result<Self> {
        if n > 64 {
            return Err(Error::invalid("from_words needs n <= 64"));
        }
        if words.iter().any(|&w| w & !low_mask(n) != 0) {
            return Err(Error::invalid(format!("word does not fit in {n} bits")));
        }
        Self::new(words.iter().map(|&w| BitVec::from_word(n, w)).collect())
    }

    pub fn vectors(&self) -> &[BitVec] {
        &self.vectors
    }

    /// Number of entries `k`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Number of distinct vectors `t`.
    pub fn distinct_count(&self) -> usize {
        self.first_occurrence.len()
    }

    pub fn distinct(&self) -> impl Iterator<Item = &BitVec> + '_ {
        self.first_occurrence.iter().map(|&f| &self.vectors[f])
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// Index into [`Self::distinct`] for each position of the sequence.
    pub fn slots(&self) -> &[usize] {
        &self.slot
    }

    pub fn vector_len(&self) -> usize {
        self.vectors.first().map_or(0, BitVec::len)
    }

    pub fn rank(&self) -> usize {
        rank(&self.vectors)
    }

    /// Rank of the distinct vectors selected by bit `d` of `mask`.
    pub fn subset_rank(&self, mask: u64) -> usize {
        let mut basis = XorBasis::new();
        self.first_occurrence
            .iter()
            .enumerate()
            .filter(|(d, _)| mask >> d & 1 == 1)
            .filter(|(_, &f)| basis.insert(&self.vectors[f]))
            .count()
    }
}

/// Positions (0-based) whose vector is not in the span of all other entries.
pub fn coloop_positions(seq: &VectorSequence) -> BTreeSet<usize> {
    let full = seq.rank();
    (0..seq.len())
        .filter(|&j| {
            let rest: Vec<BitVec> = seq
                .vectors()
                .iter()
                .enumerate()
                .filter(|(pos, _)| *pos != j)
                .map(|(_, v)| v.clone())
                .collect();
            rank(&rest) + 1 == full
        })
        .collect()
}

/// Coloop-freeness of a word tuple: every entry lies in the span of the others.
pub fn is_coloop_free_words(vectors: &[u64]) -> bool {
    let full = rank_words(vectors);
    (0..vectors.len()).all(|j| {
        let mut basis = WordBasis::new();
        for (pos, &v) in vectors.iter().enumerate() {
            if pos != j {
                basis.insert(v);
            }
        }
        basis.rank() == full
    })
}

/// Rank of a word tuple together with the union of the supports of its
/// linear relations (bit `j` set iff position `j` takes part in some relation).
///
/// Elimination carries, for each reduced row, the combination of input
/// positions it came from; every input that reduces to zero yields one
/// relation, and those relations span the whole relation space.
pub fn relation_support(vectors: &[u64]) -> (usize, u64) {
    assert!(vectors.len() <= 64, "at most 64 positions");
    let mut rows = [(0u64, 0u64); 64];
    let mut rank = 0;
    let mut support = 0u64;
    for (j, &v) in vectors.iter().enumerate() {
        let (mut v, mut comb) = (v, 1u64 << j);
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            let (row, row_comb) = rows[lead];
            if row == 0 {
                break;
            }
            v ^= row;
            comb ^= row_comb;
        }
        if v == 0 {
            support |= comb;
        } else {
            rows[63 - v.leading_zeros() as usize] = (v, comb);
            rank += 1;
        }
    }
    (rank, support)
}

/// Weight-`i` vectors of length `n`, in colexicographic order.
#[derive(Debug, Clone)]
pub struct WeightClass {
    n: usize,
    support: Vec<usize>,
    done: bool,
}

impl Iterator for WeightClass {
    type Item = BitVec;

    fn next(&mut self) -> Option<BitVec> {
        if self.done {
            return None;
        }
        let mut v = BitVec::zeros(self.n);
        for &j in &self.support {
            v.set(j, true);
        }
        // Colex successor: bump the lowest element that has room, reset the ones below it.
        let i = self.support.len();
        let mut advanced = false;
        for d in 0..i {
            let limit = if d + 1 < i { self.support[d + 1] } else { self.n };
            if self.support[d] + 1 < limit {
                self.support[d] += 1;
                for (e, s) in self.support.iter_mut().take(d).enumerate() {
                    *s = e;
                }
                advanced = true;
                break;
            }
        }
        self.done = !advanced;
        Some(v)
    }
}

/// Streams each weight-`i` vector of length `n` exactly once, colex order.
pub fn enumerate_weight(n: usize, i: usize, limits: &Limits) -> Result<WeightClass> {
    if i > n {
        return Err(Error::invalid(format!("weight {i} exceeds length {n}")));
    }
    limits.check_tuples("weight class enumeration", &binomial(n as u64, i as u64))?;
    Ok(WeightClass {
        n,
        support: (0..i).collect(),
        done: false,
    })
}

/// All weight-`i` words of length `n <= 64`, increasing (which is colex order).
pub fn weight_class_words(n: usize, i: usize, limits: &Limits) -> Result<Vec<u64>> {
    if n > 64 {
        return Err(Error::invalid(format!("word enumeration needs n <= 64, got {n}")));
    }
    if i > n {
        return Err(Error::invalid(format!("weight {i} exceeds length {n}")));
    }
    let count = limits.check_tuples("weight class enumeration", &binomial(n as u64, i as u64))?;
    let mut out = Vec::with_capacity(count as usize);
    if i == 0 {
        out.push(0);
        return Ok(out);
    }
    let mut w: u64 = low_mask(i);
    loop {
        out.push(w);
        if out.len() as u64 == count {
            break;
        }
        // Gosper's hack.
        let c = w & w.wrapping_neg();
        let r = w + c;
        w = (((r ^ w) >> 2) / c) | r;
    }
    Ok(out)
}

/// An `m x n` matrix over GF(2), stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("matrix rows must all have length `cols`"));
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Rows given as `0`/`1` strings.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.parse()).collect::<Result<Vec<BitVec>>>()?;
        let cols = rows.first().map_or(0, BitVec::len);
        Self::from_rows(cols, rows)
    }

    pub fn from_hex_rows(cols: usize, rows: &[String]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| BitVec::from_hex(cols, r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(cols, rows)
    }

    pub fn to_hex_rows(&self) -> Vec<String> {
        self.rows.iter().map(BitVec::to_hex).collect()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows)
    }

    /// `M u` as an `m`-bit vector.
    pub fn mul_vec(&self, u: &BitVec) -> BitVec {
        BitVec::from_bits(&self.rows.iter().map(|r| r.dot(u)).collect::<Vec<_>>())
    }

    /// Column `j` packed as an `m`-bit word (bit `r` = entry `(r, j)`).
    pub fn columns(&self) -> Result<Vec<u128>> {
        if self.rows.len() > 128 {
            return Err(Error::invalid("column packing needs at most 128 rows"));
        }
        Ok((0..self.cols)
            .map(|j| {
                self.rows
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.get(j))
                    .fold(0u128, |acc, (r, _)| acc | 1 << r)
            })
            .collect())
    }
}

/// JSON fixture form of a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFixture {
    pub rows: usize,
    pub cols: usize,
    /// Hex rows, see [`BitVec::to_hex`].
    pub hex_rows: Vec<String>,
}

impl From<&BitMatrix> for MatrixFixture {
    fn from(m: &BitMatrix) -> Self {
        MatrixFixture {
            rows: m.row_count(),
            cols: m.col_count(),
            hex_rows: m.to_hex_rows(),
        }
    }
}

impl TryFrom<&MatrixFixture> for BitMatrix {
    type Error = Error;

    fn try_from(f: &MatrixFixture) -> Result<Self> {
        if f.hex_rows.len() != f.rows {
            return Err(Error::invalid("row count does not match hex rows"));
        }
        BitMatrix::from_hex_rows(f.cols, &f.hex_rows)
    }
}

/// Number of weight-`i` vectors `u` with `M u = 0`.
///
/// Chooses between a depth-first walk over the weight class and a dynamic
/// program over (weight, syndrome) pairs after row reduction, whichever is
/// cheaper; both must fit the tuple budget.
pub fn kernel_weight_count(matrix: &BitMatrix, i: usize, limits: &Limits) -> Result<BigNat> {
    let n = matrix.col_count();
    if i > n {
        return Err(Error::invalid(format!("weight {i} exceeds length {n}")));
    }
    let reduced = row_reduced_columns(matrix)?;
    let count = count_kernel_words(&reduced.0, reduced.1, i, limits)?;
    Ok(BigUint::from(count))
}

/// Columns of an equivalent full-rank matrix (same kernel) and its rank.
pub(crate) fn row_reduced_columns(matrix: &BitMatrix) -> Result<(Vec<u128>, usize)> {
    let mut basis = XorBasis::new();
    let independent: Vec<BitVec> = matrix.rows().iter().filter(|r| basis.insert(r)).cloned().collect();
    let r = independent.len();
    let reduced = BitMatrix::from_rows(matrix.col_count(), independent)?;
    Ok((reduced.columns()?, r))
}

pub(crate) fn count_kernel_words(cols: &[u128], rows: usize, i: usize, limits: &Limits) -> Result<u128> {
    let n = cols.len();
    let enum_cost = binomial(n as u64, i as u64).to_u64().unwrap_or(u64::MAX);
    let dp_cost = if rows < 40 {
        (n as u64).saturating_mul(i as u64 + 1).saturating_mul(1u64 << rows)
    } else {
        u64::MAX
    };
    if enum_cost <= dp_cost && enum_cost <= limits.max_sample_work {
        Ok(kernel_count_enumerate(cols, i))
    } else if dp_cost <= limits.max_sample_work {
        Ok(kernel_count_dp(cols, rows, i))
    } else {
        Err(Error::budget(
            "kernel weight count",
            enum_cost.min(dp_cost),
            limits.max_sample_work,
        ))
    }
}

/// Depth-first walk over `i`-subsets of columns, tracking the running syndrome.
pub(crate) fn kernel_count_enumerate(cols: &[u128], i: usize) -> u128 {
    fn walk(cols: &[u128], start: usize, left: usize, acc: u128) -> u128 {
        if left == 0 {
            return u128::from(acc == 0);
        }
        (start..=cols.len() - left)
            .map(|j| walk(cols, j + 1, left - 1, acc ^ cols[j]))
            .sum()
    }
    if i > cols.len() {
        return 0;
    }
    walk(cols, 0, i, 0)
}

/// `dp[s][x]` = number of `s`-subsets of the columns seen so far with syndrome `x`.
pub(crate) fn kernel_count_dp(cols: &[u128], rows: usize, i: usize) -> u128 {
    let states = 1usize << rows;
    let mut dp = vec![vec![0u128; states]; i + 1];
    dp[0][0] = 1;
    for (j, &c) in cols.iter().enumerate() {
        let c = c as usize;
        for s in (1..=i.min(j + 1)).rev() {
            let (lo, hi) = dp.split_at_mut(s);
            let prev = &lo[s - 1];
            let cur = &mut hi[0];
            for (x, &cnt) in prev.iter().enumerate() {
                if cnt != 0 {
                    cur[x ^ c] += cnt;
                }
            }
        }
    }
    dp[i][0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[v("0110")]), 1);
        assert_eq!(rank(&[v("0110"), v("0110")]), 1);
        assert_eq!(rank(&[v("1100"), v("0110"), v("1010")]), 2);
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank_words(&[0b0011, 0b0110, 0b0101]), 2);
    }

    #[test]
    fn coloop_examples() {
        let single = VectorSequence::new(vec![v("1100")]).unwrap();
        assert_eq!(coloop_positions(&single), BTreeSet::from([0]));

        let pair = VectorSequence::new(vec![v("1100"), v("1100")]).unwrap();
        assert!(coloop_positions(&pair).is_empty());

        let triangle = VectorSequence::new(vec![v("1100"), v("0110"), v("1010")]).unwrap();
        assert!(coloop_positions(&triangle).is_empty());

        let mixed = VectorSequence::new(vec![v("1100"), v("1100"), v("0011")]).unwrap();
        assert_eq!(coloop_positions(&mixed), BTreeSet::from([2]));
        assert!(!is_coloop_free_words(&[0b0011, 0b0011, 0b1100]));
        assert!(is_coloop_free_words(&[0b0011, 0b0110, 0b0101]));
    }

    #[test]
    fn sequence_multiplicities_in_first_occurrence_order() {
        let seq = VectorSequence::new(vec![v("011"), v("110"), v("011"), v("011")]).unwrap();
        assert_eq!(seq.distinct_count(), 2);
        assert_eq!(seq.multiplicities(), &[3, 1]);
        assert_eq!(seq.slots(), &[0, 1, 0, 0]);
        assert!(VectorSequence::new(vec![v("000")]).is_err());
        assert!(VectorSequence::with_zeros(vec![v("000")]).is_ok());
        assert!(VectorSequence::new(vec![v("01"), v("011")]).is_err());
    }

    #[test]
    fn weight_class_examples() {
        let l = Limits::default();
        let zero: Vec<_> = enumerate_weight(4, 0, &l).unwrap().collect();
        assert_eq!(zero, vec![v("0000")]);
        assert_eq!(enumerate_weight(4, 2, &l).unwrap().count(), 6);
        let full: Vec<_> = enumerate_weight(4, 4, &l).unwrap().collect();
        assert_eq!(full, vec![v("1111")]);
        assert!(enumerate_weight(3, 4, &l).is_err());
        let tight = Limits { max_tuple_work: 5, ..l };
        assert!(matches!(
            enumerate_weight(4, 2, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn colex_stream_matches_gosper_words() {
        let l = Limits::default();
        for n in 0..=12 {
            for i in 0..=n {
                let words = weight_class_words(n, i, &l).unwrap();
                let vecs: Vec<u64> = enumerate_weight(n, i, &l)
                    .unwrap()
                    .map(|b| b.as_word().unwrap())
                    .collect();
                assert_eq!(words, vecs, "n={n} i={i}");
                assert!(words.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(words.len() as u64, binomial(n as u64, i as u64).to_u64().unwrap());
            }
        }
    }

    #[test]
    fn kernel_weight_count_examples() {
        let l = Limits::default();
        let zero = BitMatrix::zeros(1, 4);
        assert_eq!(kernel_weight_count(&zero, 2, &l).unwrap(), BigUint::from(6u32));
        let m = BitMatrix::parse_rows(&["1100"]).unwrap();
        assert_eq!(kernel_weight_count(&m, 2, &l).unwrap(), BigUint::from(2u32));
        let m = BitMatrix::parse_rows(&["1000"]).unwrap();
        assert_eq!(kernel_weight_count(&m, 2, &l).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn kernel_count_paths_agree_and_sum_to_kernel_size() {
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..60 {
            let n = 2 + trial % 11;
            let m = 1 + trial % 5;
            let rows: Vec<BitVec> = (0..m).map(|_| BitVec::from_word(n, next())).collect();
            let matrix = BitMatrix::from_rows(n, rows).unwrap();
            let cols = matrix.columns().unwrap();
            let mut total = 0u128;
            for i in 0..=n {
                let a = kernel_count_enumerate(&cols, i);
                let b = kernel_count_dp(&cols, m, i);
                assert_eq!(a, b);
                // Direct oracle: multiply every weight-i vector.
                let direct = enumerate_weight(n, i, &Limits::default())
                    .unwrap()
                    .filter(|u| matrix.mul_vec(u).is_zero())
                    .count() as u128;
                assert_eq!(a, direct);
                total += a;
            }
            assert_eq!(total, 1u128 << (n - matrix.rank()));
        }
    }

    #[test]
    fn hex_rows_round_trip() {
        let m = BitMatrix::parse_rows(&["1100", "10001", "0"]).err();
        assert!(m.is_some());
        let m = BitMatrix::parse_rows(&["11000", "10001"]).unwrap();
        assert_eq!(m.to_hex_rows(), vec!["c0".to_string(), "88".to_string()]);
        let fixture = MatrixFixture::from(&m);
        let json = serde_json::to_string(&fixture).unwrap();
        let back: MatrixFixture = serde_json::from_str(&json).unwrap();
        assert_eq!(BitMatrix::try_from(&back).unwrap(), m);
        assert!(BitVec::from_hex(5, "8f").is_err());
        assert!(BitVec::from_hex(4, "g").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rank_ignores_order_and_repeats(words in prop::collection::vec(1u64..256, 1..8), seed in any::<u64>()) {
                let mut shuffled = words.clone();
                let len = shuffled.len();
                shuffled.rotate_left((seed as usize) % len);
                shuffled.reverse();
                let mut distinct = words.clone();
                distinct.sort_unstable();
                distinct.dedup();
                let r = rank_words(&words);
                prop_assert_eq!(r, rank_words(&shuffled));
                prop_assert_eq!(r, rank_words(&distinct));
                let seq = VectorSequence::from_words(8, &words).unwrap();
                prop_assert_eq!(seq.rank(), r);
            }

            #[test]
            fn coloop_free_means_every_removal_keeps_rank(words in prop::collection::vec(1u64..64, 1..7)) {
                let seq = VectorSequence::from_words(6, &words).unwrap();
                let coloops = coloop_positions(&seq);
                prop_assert_eq!(coloops.is_empty(), is_coloop_free_words(&words));
                let full = rank_words(&words);
                for j in 0..words.len() {
                    let mut rest = words.clone();
                    rest.remove(j);
                    let drops = rank_words(&rest) < full;
                    prop_assert_eq!(drops, coloops.contains(&j));
                }
                for (j, &w) in words.iter().enumerate() {
                    if words.iter().filter(|&&x| x == w).count() >= 2 {
                        prop_assert!(!coloops.contains(&j));
                    }
                }
            }

            #[test]
            fn relation_support_marks_exactly_the_non_coloops(words in prop::collection::vec(1u64..64, 1..7)) {
                let (r, support) = relation_support(&words);
                prop_assert_eq!(r, rank_words(&words));
                let seq = VectorSequence::from_words(6, &words).unwrap();
                let coloops = coloop_positions(&seq);
                for j in 0..words.len() {
                    prop_assert_eq!(support >> j & 1 == 0, coloops.contains(&j));
                }
            }

            #[test]
            fn hex_round_trip(bits in prop::collection::vec(any::<bool>(), 0..200)) {
                let v = BitVec::from_bits(&bits);
                prop_assert_eq!(BitVec::from_hex(bits.len(), &v.to_hex()).unwrap(), v);
            }
        }
    }
}
