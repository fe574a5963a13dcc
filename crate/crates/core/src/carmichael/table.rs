//! Cumulative depth tables: counts of depth-z Carmichael numbers (exact
//! depth >= z) cross-tabulated by number of prime factors.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use super::DepthRecord;

/// Cumulative (z, r) counts. Row `z` counts records with
/// `exact_depth >= z`; rows therefore weakly decrease as `z` grows, in
/// every column and in total.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DepthTable {
    cells: BTreeMap<(u32, u32), u64>,
    totals: BTreeMap<u32, u64>,
    columns: BTreeSet<u32>,
    max_z: u32,
}

impl DepthTable {
    /// Count of records with `exact_depth >= z` and exactly `r` prime
    /// factors.
    pub fn cell(&self, z: u32, r: u32) -> u64 {
        self.cells.get(&(z, r)).copied().unwrap_or(0)
    }

    /// Count of records with `exact_depth >= z` (the All column).
    pub fn total(&self, z: u32) -> u64 {
        self.totals.get(&z).copied().unwrap_or(0)
    }

    /// Distinct prime-factor counts observed, ascending.
    pub fn columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.columns.iter().copied()
    }

    /// Largest row index carried by the table.
    pub fn max_z(&self) -> u32 {
        self.max_z
    }

    pub fn is_empty(&self) -> bool {
        self.total(0) == 0
    }
}

/// Tally `records` into a cumulative table with rows `z = 0..=max_z`.
pub fn build_depth_table(records: &[DepthRecord], max_z: u32) -> DepthTable {
    let mut table = DepthTable {
        max_z,
        ..DepthTable::default()
    };
    for rec in records {
        table.columns.insert(rec.num_prime_factors);
        for z in 0..=rec.exact_depth.min(max_z) {
            *table.cells.entry((z, rec.num_prime_factors)).or_insert(0) += 1;
            *table.totals.entry(z).or_insert(0) += 1;
        }
    }
    table
}

/// One line of the depth-ratio report: the observed fraction of depth-z
/// numbers against the conjectured `2^{-z}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioLine {
    pub z: u32,
    pub count: u64,
    pub observed: f64,
    pub conjectured: f64,
}

/// Observed `C_z/C` ratios for every row, next to `2^{-z}`.
pub fn ratio_report(table: &DepthTable) -> Vec<RatioLine> {
    let all = table.total(0);
    (0..=table.max_z())
        .map(|z| RatioLine {
            z,
            count: table.total(z),
            observed: if all == 0 {
                0.0
            } else {
                table.total(z) as f64 / all as f64
            },
            conjectured: 0.5f64.powi(z as i32),
        })
        .collect()
}
