//! Parallel fan-out for enumeration and simulation.
//!
//! Enumeration splits into the same segments the serial path uses and
//! concatenates per-segment hits in range order; simulation splits the
//! tuple-index range into chunks whose randomness depends only on
//! `(seed, index)`. Either way the output is identical for any worker
//! count.

use rayon::prelude::*;

use zdeep_core::carmichael::{carmichaels_in_segment, small_primes, SieveConfig};
use zdeep_core::local_model::{monte_carlo_chunk, TupleStats};
use zdeep_core::{DepthRecord, Error, Result};

/// Segment bounds covering the odd numbers in `[3, limit]`.
fn segment_bounds(limit: u64, segment_len: usize) -> Vec<(u64, u64)> {
    let mut bounds = Vec::new();
    let mut lo = 3u64;
    while lo <= limit {
        let hi = lo
            .saturating_add(2 * segment_len as u64)
            .min(limit + 1);
        bounds.push((lo, hi));
        lo = if hi % 2 == 0 { hi + 1 } else { hi };
    }
    bounds
}

/// Enumerate every Carmichael number `<= limit` across the worker pool,
/// ascending.
pub fn enumerate_parallel(limit: u64, config: &SieveConfig) -> Result<Vec<DepthRecord>> {
    if limit > config.max_limit {
        return Err(Error::Capacity(format!(
            "enumeration limit {limit} exceeds configured cap {}",
            config.max_limit
        )));
    }
    if config.segment_len == 0 {
        return Err(Error::Domain("segment_len must be positive".into()));
    }
    if limit == u64::MAX {
        return Err(Error::Capacity("limit must be below u64::MAX".into()));
    }
    if limit < 3 {
        return Ok(Vec::new());
    }
    let base_primes = small_primes(limit.isqrt());
    let hits: Vec<Vec<u64>> = segment_bounds(limit, config.segment_len)
        .par_iter()
        .map(|&(lo, hi)| carmichaels_in_segment(lo, hi, &base_primes))
        .collect();
    hits.into_iter()
        .flatten()
        .map(DepthRecord::of)
        .collect()
}

/// Monte Carlo run of `samples` tuples, chunked across the worker pool.
pub fn simulate_parallel(r: u32, samples: u64, seed: u64, max_z: u32) -> Result<TupleStats> {
    if samples == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    const CHUNK: u64 = 2048;
    let ranges: Vec<(u64, u64)> = (0..samples)
        .step_by(CHUNK as usize)
        .map(|start| (start, (start + CHUNK).min(samples)))
        .collect();
    let partials = ranges
        .into_par_iter()
        .map(|(start, end)| monte_carlo_chunk(r, start..end, seed, max_z))
        .collect::<Result<Vec<TupleStats>>>()?;
    let mut merged = partials[0].clone();
    for part in &partials[1..] {
        merged.merge(part);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use zdeep_core::carmichael::collect_carmichaels;
    use zdeep_core::local_model::monte_carlo;

    #[test]
    fn parallel_enumeration_matches_serial() {
        let cfg = SieveConfig {
            segment_len: 4096,
            ..SieveConfig::default()
        };
        let serial = collect_carmichaels(200_000, &cfg).unwrap();
        let parallel = enumerate_parallel(200_000, &cfg).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn parallel_simulation_matches_serial() {
        let serial = monte_carlo(5, 10_000, 31, 6).unwrap();
        let parallel = simulate_parallel(5, 10_000, 31, 6).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let inside = pool.install(|| simulate_parallel(4, 5_000, 8, 4)).unwrap();
        let outside = simulate_parallel(4, 5_000, 8, 4).unwrap();
        assert_eq!(inside, outside);
    }
}
