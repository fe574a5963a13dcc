//! Segmented enumeration of Carmichael numbers.
//!
//! Each segment keeps, per odd integer, the undivided residual, the running
//! lcm of `p - 1` over the primes divided out, a distinct-prime count, and a
//! squarefree flag. After the base primes are applied, the residual is
//! either 1 or a single prime above the segment's square root, so the
//! Korselt condition `lcm(p-1 : p | n) | n - 1` is decided without storing
//! factor lists. Memory is bounded by the segment length regardless of the
//! enumeration limit.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::lcm_u64;
use crate::error::{Error, Result};

use super::DepthRecord;

/// Capacity and memory knobs for [`enumerate_carmichaels`].
#[derive(Debug, Clone)]
pub struct SieveConfig {
    /// Hard cap on the enumeration limit; requests beyond it are refused.
    pub max_limit: u64,
    /// Number of odd integers processed per segment.
    pub segment_len: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            max_limit: 10_000_000_000,
            segment_len: 1 << 19,
        }
    }
}

/// Simple sieve of Eratosthenes; returns all primes `<= limit`.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        primes.push(p as u64);
        for m in (p * p..=limit).step_by(p) {
            composite[m] = true;
        }
    }
    primes
}

/// Carmichael numbers among the odd integers in `[lo, hi)`, ascending.
///
/// `lo` must be odd and `base_primes` must contain every odd prime up to
/// `isqrt(hi - 1)`. Segments are independent, so disjoint ranges can be
/// processed concurrently and concatenated in range order.
pub fn carmichaels_in_segment(lo: u64, hi: u64, base_primes: &[u64]) -> Vec<u64> {
    debug_assert!(lo % 2 == 1 && lo >= 3);
    if hi <= lo {
        return Vec::new();
    }
    let count = ((hi - lo) as usize).div_ceil(2);
    let mut residual: Vec<u64> = (0..count).map(|i| lo + 2 * i as u64).collect();
    let mut pm1_lcm: Vec<u64> = vec![1; count];
    let mut distinct: Vec<u8> = vec![0; count];
    let mut squarefree: Vec<bool> = vec![true; count];

    let top = hi - 1;
    for &p in base_primes {
        if p == 2 {
            continue;
        }
        if p.checked_mul(p).map_or(true, |sq| sq > top) {
            break;
        }
        // Smallest odd k with k*p >= lo (odd k keeps k*p odd).
        let mut k = lo.div_ceil(p);
        if k % 2 == 0 {
            k += 1;
        }
        let mut m = k * p;
        while m < hi {
            let i = ((m - lo) / 2) as usize;
            let mut e = 0u32;
            while residual[i] % p == 0 {
                residual[i] /= p;
                e += 1;
            }
            debug_assert!(e > 0);
            if e > 1 {
                squarefree[i] = false;
            }
            distinct[i] += 1;
            pm1_lcm[i] = lcm_u64(pm1_lcm[i], p - 1);
            m += 2 * p;
        }
    }

    let mut found = Vec::new();
    for i in 0..count {
        let n = lo + 2 * i as u64;
        if !squarefree[i] {
            continue;
        }
        let rem = residual[i];
        // Prime n: either untouched, or a single base prime divided it out.
        if rem == n || (rem == 1 && distinct[i] == 1) {
            continue;
        }
        let lcm = if rem > 1 {
            lcm_u64(pm1_lcm[i], rem - 1)
        } else {
            pm1_lcm[i]
        };
        if (n - 1) % lcm == 0 {
            found.push(n);
        }
    }
    found
}

/// Enumerate every Carmichael number `<= limit`, ascending, calling `sink`
/// once per number with its [`DepthRecord`]. Returns the count.
pub fn enumerate_carmichaels<F>(limit: u64, config: &SieveConfig, mut sink: F) -> Result<u64>
where
    F: FnMut(DepthRecord),
{
    if limit > config.max_limit {
        return Err(Error::capacity(alloc::format!(
            "enumeration limit {limit} exceeds configured cap {}",
            config.max_limit
        )));
    }
    if config.segment_len == 0 {
        return Err(Error::domain("segment_len must be positive"));
    }
    if limit < 3 {
        return Ok(0);
    }
    if limit == u64::MAX {
        return Err(Error::capacity("limit must be below u64::MAX"));
    }
    let base_primes = small_primes(limit.isqrt());
    let mut emitted = 0u64;
    let mut lo = 3u64;
    while lo <= limit {
        let hi = lo
            .saturating_add(2 * config.segment_len as u64)
            .min(limit + 1);
        for n in carmichaels_in_segment(lo, hi, &base_primes) {
            sink(DepthRecord::of(n)?);
            emitted += 1;
        }
        // Next odd value at or above the exclusive end.
        lo = if hi % 2 == 0 { hi + 1 } else { hi };
    }
    Ok(emitted)
}

/// Convenience wrapper collecting the records of every Carmichael number
/// `<= limit` under the default configuration.
pub fn collect_carmichaels(limit: u64, config: &SieveConfig) -> Result<Vec<DepthRecord>> {
    let mut out = Vec::new();
    enumerate_carmichaels(limit, config, |rec| out.push(rec))?;
    Ok(out)
}
