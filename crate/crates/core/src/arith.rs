//! Exact integer and rational helpers: binomials, binary entropy and
//! fixed-point base-2 logarithms of rationals.

use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type BigNat = BigUint;
pub type BigRat = BigRational;

/// `C(n, k)`, zero when `k > n`.
///
/// Multiplicative formula; every intermediate value is itself a binomial
/// coefficient so each division is exact.
pub fn binomial(n: u64, k: u64) -> BigNat {
    if k > n {
        return BigNat::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigNat::one();
    for j in 1..=k {
        acc *= n - k + j;
        acc /= j;
    }
    acc
}

/// One full row `C(n, 0..=n)` of Pascal's triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialRow {
    n: u64,
    values: Vec<BigNat>,
}

impl BinomialRow {
    pub fn new(n: u64) -> Self {
        let mut values = Vec::with_capacity(n as usize + 1);
        let mut cur = BigNat::one();
        values.push(cur.clone());
        for k in 1..=n {
            cur = cur * (n - k + 1) / k;
            values.push(cur.clone());
        }
        BinomialRow { n, values }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `C(n, k)`; zero for `k > n`.
    pub fn get(&self, k: u64) -> BigNat {
        self.values.get(k as usize).cloned().unwrap_or_default()
    }

    pub fn as_slice(&self) -> &[BigNat] {
        &self.values
    }
}

/// Binary entropy `h(t) = t log2(1/t) + (1-t) log2(1/(1-t))` of a rational.
pub fn entropy(t: &BigRat) -> Result<f64> {
    if t.is_negative() || *t > BigRat::one() {
        return Err(Error::Domain(format!("entropy argument {t} outside [0, 1]")));
    }
    if t.is_zero() || t.is_one() {
        return Ok(0.0);
    }
    let num = t.numer().to_f64().unwrap_or(f64::NAN);
    let den = t.denom().to_f64().unwrap_or(f64::NAN);
    let rest = (t.denom() - t.numer()).to_f64().unwrap_or(f64::NAN);
    if !(num.is_finite() && den.is_finite()) {
        return entropy_f64(rat_to_f64(t));
    }
    // t = a/b, 1-t = (b-a)/b; log2 of each ratio evaluated without cancellation.
    Ok((num / den) * (den / num).log2() + (rest / den) * (den / rest).log2())
}

/// Binary entropy of a float in `[0, 1]`.
pub fn entropy_f64(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("entropy argument {t} outside [0, 1]")));
    }
    if t == 0.0 || t == 1.0 {
        return Ok(0.0);
    }
    Ok(-t * t.log2() - (1.0 - t) * (1.0 - t).log2())
}

/// A signed fixed-point number holding a base-2 logarithm.
///
/// `raw / 2^frac_bits` is within `2^-precision_bits` of the exact logarithm
/// of the value it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLog {
    raw: i128,
    frac_bits: u32,
    precision_bits: u32,
}

pub const MAX_LOG_PRECISION: u32 = 96;

impl FixedLog {
    pub fn raw(&self) -> i128 {
        self.raw
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn to_f64(&self) -> f64 {
        let int = (self.raw >> self.frac_bits) as f64;
        let frac = (self.raw & ((1i128 << self.frac_bits) - 1)) as f64;
        int + frac / 2f64.powi(self.frac_bits as i32)
    }

    /// Exact integer value, when the fractional part is zero.
    pub fn as_integer(&self) -> Option<i128> {
        (self.raw & ((1i128 << self.frac_bits) - 1) == 0).then_some(self.raw >> self.frac_bits)
    }
}

impl Add for FixedLog {
    type Output = FixedLog;

    fn add(self, rhs: FixedLog) -> FixedLog {
        assert_eq!(self.frac_bits, rhs.frac_bits, "mixed fixed-point scales");
        FixedLog {
            raw: self.raw + rhs.raw,
            frac_bits: self.frac_bits,
            precision_bits: self.precision_bits.min(rhs.precision_bits).saturating_sub(1),
        }
    }
}

impl Neg for FixedLog {
    type Output = FixedLog;

    fn neg(self) -> FixedLog {
        FixedLog { raw: -self.raw, ..self }
    }
}

impl Sub for FixedLog {
    type Output = FixedLog;

    fn sub(self, rhs: FixedLog) -> FixedLog {
        self + (-rhs)
    }
}

/// `log2(q)` for a positive rational, to within `2^-precision_bits`.
///
/// The integer part comes from bit lengths. The fractional bits come from
/// repeated squaring of the mantissa in `[1, 2)`, kept as a truncated
/// fixed-point integer with generous guard bits.
pub fn log2_rat(q: &BigRat, precision_bits: u32) -> Result<FixedLog> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("log2 of non-positive value {q}")));
    }
    if precision_bits == 0 || precision_bits > MAX_LOG_PRECISION {
        return Err(Error::invalid(format!(
            "precision_bits must be in 1..={MAX_LOG_PRECISION}, got {precision_bits}"
        )));
    }
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    let frac_bits = precision_bits + 2;
    let work = u64::from(frac_bits) + 32;

    let mut exp = num.bits() as i64 - den.bits() as i64;
    let mut y = if exp >= 0 {
        (num << work) / (den << exp as u64)
    } else {
        (num << (work + exp.unsigned_abs())) / den
    };
    let one = BigUint::one() << work;
    let two = BigUint::one() << (work + 1);
    if y < one {
        y <<= 1u32;
        exp -= 1;
    }
    debug_assert!(y >= one && y < two);

    let mut bits: i128 = 0;
    for _ in 0..frac_bits {
        y = (&y * &y) >> work;
        bits <<= 1;
        if y >= two {
            bits |= 1;
            y >>= 1u32;
        }
    }
    let int_part = i128::from(exp)
        .checked_mul(1i128 << frac_bits)
        .ok_or_else(|| Error::Domain("log2 exponent overflows fixed-point range".into()))?;
    Ok(FixedLog {
        raw: int_part + bits,
        frac_bits,
        precision_bits,
    })
}

/// `log2` of a positive big integer, as `f64`.
pub fn log2_nat(x: &BigNat) -> f64 {
    log2_rat(&BigRat::from_integer(BigInt::from(x.clone())), 52)
        .map(|l| l.to_f64())
        .unwrap_or(f64::NEG_INFINITY)
}

/// Lossy conversion of an exact rational, robust to huge numerators and denominators.
pub fn rat_to_f64(q: &BigRat) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    match log2_rat(&q.abs(), 52) {
        Ok(l) => sign * l.to_f64().exp2(),
        Err(_) => f64::NAN,
    }
}

pub fn rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

/// `2^-e` as an exact rational.
pub fn pow2_neg(e: u32) -> BigRat {
    BigRat::new(BigInt::one(), BigInt::one() << e)
}

pub fn nat_to_rat(x: &BigNat) -> BigRat {
    BigRat::from_integer(BigInt::from_biguint(Sign::Plus, x.clone()))
}

/// Integer value of a rational, if its reduced denominator is one.
pub fn rat_as_integer(q: &BigRat) -> Option<BigInt> {
    q.is_integer().then(|| q.numer().clone())
}
