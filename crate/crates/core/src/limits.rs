//! Work budgets and caps shared by every engine.
//!
//! Each exhaustive routine checks its own size estimate against one of these
//! fields before doing any work and returns [`Error::BudgetExceeded`] when it
//! does not fit.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of tuples (or vectors) any enumeration may visit.
    pub max_tuple_work: u64,
    /// Maximum `m * n` for exhaustive enumeration of parity-check matrices.
    pub max_matrix_bits: u32,
    /// Maximum number of distinct vectors in the Möbius-sum formula (2^t terms).
    pub max_distinct: usize,
    /// Maximum length for Krawtchouk tables.
    pub max_kraw_n: u32,
    /// Maximum moment order for norms.
    pub max_k: u32,
    /// Maximum `(r + v) * n` for the dual character sum.
    pub max_dual_bits: u32,
    /// Maximum number of weight-class vectors enumerated per Monte Carlo sample.
    pub max_sample_work: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tuple_work: 100_000_000,
            max_matrix_bits: 26,
            max_distinct: 24,
            max_kraw_n: 4096,
            max_k: 64,
            max_dual_bits: 24,
            max_sample_work: 100_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_tuples(&self, what: &'static str, work: &BigUint) -> Result<u64> {
        match u64::try_from(work) {
            Ok(w) if w <= self.max_tuple_work => Ok(w),
            _ => Err(Error::budget(what, work, self.max_tuple_work)),
        }
    }

    pub(crate) fn check_matrix_bits(&self, what: &'static str, bits: u64) -> Result<()> {
        if bits > u64::from(self.max_matrix_bits) {
            return Err(Error::budget(
                what,
                format!("2^{bits} matrices"),
                format!("2^{}", self.max_matrix_bits),
            ));
        }
        Ok(())
    }
}
