//! Audit of the divisor bound: at most `1 + x/(2^z k f(k))` depth-z
//! Carmichael numbers up to `x` are divisible by `k`.

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::arith::{self, ExactRational};
use crate::error::{Error, Result};

use super::DepthRecord;

/// Outcome of one divisor-bound audit.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundAudit {
    /// Depth-z Carmichael numbers `<= x` divisible by `k`.
    pub observed: u64,
    /// The exact bound `1 + x/(2^z k f(k))`.
    pub bound: ExactRational,
}

impl BoundAudit {
    pub fn violated(&self) -> bool {
        Ratio::from_integer(BigInt::from(self.observed)) > self.bound
    }
}

/// Count the records with `n <= x`, `exact_depth >= z`, and `k | n`, and
/// compare against the bound. `records` must cover every Carmichael number
/// up to `x`.
pub fn divisor_bound_audit(
    records: &[DepthRecord],
    x: u64,
    k: u64,
    z: u32,
) -> Result<BoundAudit> {
    if k < 2 {
        return Err(Error::domain("divisor bound requires k >= 2"));
    }
    let observed = records
        .iter()
        .filter(|rec| rec.n <= x && rec.exact_depth >= z && rec.n % k == 0)
        .count() as u64;
    let f_k = arith::f_of_k(&arith::factorize(k)?);
    let denominator = (BigInt::from(k) * BigInt::from(f_k)) << z;
    let bound = Ratio::from_integer(BigInt::from(1))
        + Ratio::new(BigInt::from(x), denominator);
    Ok(BoundAudit { observed, bound })
}
