//! Poisson model for the number of distinct prime factors, with the
//! truncation at three factors that every Carmichael number satisfies.

#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use crate::carmichael::DepthTable;
use crate::error::{Error, Result};

/// Mertens constant, the additive shift in the expected number of distinct
/// prime factors of an integer near `n`.
pub const MERTENS: f64 = 0.261497;

/// Poisson factor-count model truncated at `threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonModel {
    lambda: f64,
    threshold: u32,
}

impl PoissonModel {
    pub fn new(lambda: f64, threshold: u32) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain("lambda must be finite and positive"));
        }
        Ok(PoissonModel { lambda, threshold })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }
}

/// Expected number of distinct prime factors of a number of size `n`:
/// `ln ln n + M`. Requires `ln ln n >= 1` (that is, `n >= e^e`), below
/// which the model is meaningless.
pub fn erdos_kac_lambda(n: f64) -> Result<f64> {
    if !(n.is_finite() && n > 1.0) || n.ln().ln() < 1.0 - 1e-9 {
        return Err(Error::domain("log log n too small for the factor-count model"));
    }
    Ok(n.ln().ln() + MERTENS)
}

/// Truncated Poisson moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedMoments {
    /// `E[Z; Z >= t]`.
    pub partial_mean: f64,
    /// `Pr[Z >= t]`.
    pub tail_prob: f64,
    /// `E[Z | Z >= t]`.
    pub conditional_mean: f64,
}

/// Sum the tail series `sum_{k >= t} p_k` and `sum_{k >= t} k p_k`,
/// stopping once the next term is below `1e-18` of the running sums.
pub fn truncated_moments(model: &PoissonModel) -> TruncatedMoments {
    let lambda = model.lambda();
    let t = model.threshold();
    // Walk p_k = e^{-lambda} lambda^k / k! up to the threshold, then
    // accumulate the tail.
    let mut p = (-lambda).exp();
    for k in 0..t {
        p *= lambda / (k + 1) as f64;
    }
    let mut tail_prob = 0.0;
    let mut partial_mean = 0.0;
    let mut k = t;
    loop {
        tail_prob += p;
        partial_mean += k as f64 * p;
        p *= lambda / (k + 1) as f64;
        k += 1;
        if p < 1e-18 * (tail_prob + partial_mean + f64::MIN_POSITIVE) && k > t + 2 {
            break;
        }
    }
    TruncatedMoments {
        partial_mean,
        tail_prob,
        conditional_mean: partial_mean / tail_prob,
    }
}

/// Count-weighted mean number of prime factors across one row of a depth
/// table.
pub fn observed_factor_mean(table: &DepthTable, z_row: u32) -> Result<f64> {
    let total = table.total(z_row);
    if total == 0 {
        return Err(Error::domain("empty depth-table row"));
    }
    let weighted: u64 = table
        .columns()
        .map(|r| u64::from(r) * table.cell(z_row, r))
        .sum();
    Ok(weighted as f64 / total as f64)
}
