//! File formats and renderings: depth-record CSV, OEIS b-files, the
//! simulation CSV, and the on-screen depth table.

use std::fmt::Write as _;

use zdeep_core::arith::rational_to_f64;
use zdeep_core::carmichael::DepthTable;
use zdeep_core::local_model::exact_korselt_prob;
use zdeep_core::{DepthRecord, Error, Result, TupleStats};

pub const RECORD_CSV_HEADER: &str =
    "n,factors,num_prime_factors,nu2_n_minus_1,max_nu2_p_minus_1,exact_depth";

/// Depth records as CSV, header first, newline-terminated.
pub fn records_to_csv(records: &[DepthRecord]) -> String {
    let mut out = String::new();
    out.push_str(RECORD_CSV_HEADER);
    out.push('\n');
    for rec in records {
        let factors = rec
            .factors
            .primes()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            out,
            "{},{},{},{},{},{}",
            rec.n,
            factors,
            rec.num_prime_factors,
            rec.nu2_n_minus_1,
            rec.max_nu2_p_minus_1,
            rec.exact_depth
        )
        .expect("string write");
    }
    out
}

/// Parse a depth-record CSV back into records, re-deriving each row from
/// its `n` and verifying the stored columns against it.
pub fn records_from_csv(text: &str) -> Result<Vec<DepthRecord>> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if i == 0 {
            if line.trim() != RECORD_CSV_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 6 columns, got {}", fields.len()),
            });
        }
        let n: u64 = fields[0].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad n {:?}", fields[0]),
        })?;
        let rec = DepthRecord::of(n).map_err(|e| Error::Validation {
            line: line_no,
            message: e.to_string(),
        })?;
        let factors = rec
            .factors
            .primes()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let expected = [
            factors,
            rec.num_prime_factors.to_string(),
            rec.nu2_n_minus_1.to_string(),
            rec.max_nu2_p_minus_1.to_string(),
            rec.exact_depth.to_string(),
        ];
        for (col, (got, want)) in fields[1..].iter().zip(expected.iter()).enumerate() {
            if got.trim() != want {
                return Err(Error::Validation {
                    line: line_no,
                    message: format!("column {}: {got:?} disagrees with {want:?}", col + 2),
                });
            }
        }
        records.push(rec);
    }
    Ok(records)
}

/// The values as an OEIS-style b-file, indices starting at 1.
pub fn values_to_bfile(values: &[u64]) -> String {
    let mut out = String::new();
    for (i, n) in values.iter().enumerate() {
        writeln!(out, "{} {}", i + 1, n).expect("string write");
    }
    out
}

/// Render the cumulative depth table in the familiar layout: one row per
/// depth, one column per prime-factor count, and an All column.
pub fn render_depth_table(table: &DepthTable) -> String {
    let columns: Vec<u32> = table.columns().collect();
    let mut out = String::new();
    out.push_str("   z");
    for r in &columns {
        write!(out, " {r:>7}").expect("string write");
    }
    out.push_str("     All\n");
    for z in 0..=table.max_z() {
        write!(out, "{z:>4}").expect("string write");
        for r in &columns {
            write!(out, " {:>7}", table.cell(z, *r)).expect("string write");
        }
        writeln!(out, " {:>7}", table.total(z)).expect("string write");
    }
    out
}

/// The simulation report CSV: one header line and one data line.
pub fn simulation_to_csv(stats: &TupleStats) -> String {
    let mut header = String::from("r,samples,seed,korselt_count,equal_exponent_count");
    let mut row = format!(
        "{},{},{},{},{}",
        stats.r, stats.samples, stats.seed, stats.korselt_count, stats.equal_exponent_count
    );
    for z in 1..=stats.max_z() {
        write!(header, ",depth_ge_{z}").expect("string write");
        write!(row, ",{}", stats.depth_ge[z as usize]).expect("string write");
    }
    let exact = exact_korselt_prob(stats.r);
    header.push_str(",exact_prob,exact_prob_decimal");
    write!(row, ",{},{:.6}", exact, rational_to_f64(&exact)).expect("string write");
    format!("{header}\n{row}\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use zdeep_core::carmichael::{collect_carmichaels, ingest_oeis_bfile, SieveConfig};

    #[test]
    fn record_csv_round_trips() {
        let records = collect_carmichaels(100_000, &SieveConfig::default()).unwrap();
        let csv = records_to_csv(&records);
        assert!(csv.starts_with(RECORD_CSV_HEADER));
        assert!(csv.ends_with('\n'));
        let parsed = records_from_csv(&csv).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn record_csv_rejects_tampering() {
        let records = collect_carmichaels(1_000, &SieveConfig::default()).unwrap();
        let csv = records_to_csv(&records);
        let tampered = csv.replace(",0\n", ",1\n");
        assert!(records_from_csv(&tampered).is_err());
    }

    #[test]
    fn bfile_round_trips_through_ingestion() {
        let records = collect_carmichaels(100_000, &SieveConfig::default()).unwrap();
        let values: Vec<u64> = records.iter().map(|r| r.n).collect();
        let text = values_to_bfile(&values);
        assert_eq!(ingest_oeis_bfile(&text).unwrap(), values);
    }

    #[test]
    fn table_rendering_is_stable() {
        let records = collect_carmichaels(10_000, &SieveConfig::default()).unwrap();
        let table = zdeep_core::carmichael::build_depth_table(&records, 4);
        let rendered = render_depth_table(&table);
        let expected = concat!(
            "   z       3     All\n",
            "   0       7       7\n",
            "   1       2       2\n",
            "   2       1       1\n",
            "   3       1       1\n",
            "   4       1       1\n",
        );
        assert_eq!(rendered, expected);
    }

    #[test]
    fn simulation_csv_shape() {
        let stats = zdeep_core::local_model::monte_carlo(3, 500, 9, 3).unwrap();
        let csv = simulation_to_csv(&stats);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "r,samples,seed,korselt_count,equal_exponent_count,depth_ge_1,depth_ge_2,depth_ge_3,exact_prob,exact_prob_decimal"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("3,500,9,"));
        assert!(row.ends_with(",3/7,0.428571"));
        assert_eq!(lines.next(), None);
    }
}
