//! OEIS b-file ingestion.
//!
//! The format is one `index value` pair per whitespace-separated line;
//! lines starting with `#` are comments. Indices must be consecutive
//! ascending. Every value is verified to be a Carmichael number.

use alloc::format;
use alloc::vec::Vec;

use crate::arith;
use crate::error::{Error, Result};

use super::is_carmichael;

/// Parse and validate a b-file, returning the sequence values in file
/// order. Parse failures and validation failures carry the 1-based line
/// number.
pub fn ingest_oeis_bfile(text: &str) -> Result<Vec<u64>> {
    let mut values = Vec::new();
    let mut expected_index: Option<u64> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(index_tok), Some(value_tok), None) =
            (tokens.next(), tokens.next(), tokens.next())
        else {
            return Err(Error::Parse {
                line,
                message: format!("expected `index value`, got {trimmed:?}"),
            });
        };
        let index: u64 = index_tok.parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad index {index_tok:?}"),
        })?;
        let value: u64 = value_tok.parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad value {value_tok:?}"),
        })?;
        match expected_index {
            Some(expected) if index != expected => {
                return Err(Error::Parse {
                    line,
                    message: format!("index {index} out of order, expected {expected}"),
                });
            }
            _ => {}
        }
        expected_index = Some(index + 1);
        let carmichael = arith::factorize(value)
            .and_then(|f| is_carmichael(&f))
            .map_err(|e| Error::Validation {
                line,
                message: format!("{value} is not a Carmichael number ({e})"),
            })?;
        if !carmichael {
            return Err(Error::Validation {
                line,
                message: format!("{value} is not a Carmichael number"),
            });
        }
        values.push(value);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_well_formed_file() {
        let text = "# A002997 prefix\n1 561\n2 1105\n3 1729\n\n4 2465\n";
        assert_eq!(ingest_oeis_bfile(text).unwrap(), alloc::vec![561, 1105, 1729, 2465]);
    }

    #[test]
    fn accepts_the_10000th_value() {
        // Validation factors a 1.7e12 entry through the rho path.
        let text = "10000 1713045574801\n";
        assert_eq!(ingest_oeis_bfile(text).unwrap(), alloc::vec![1_713_045_574_801]);
    }

    #[test]
    fn rejects_malformed_lines_with_line_numbers() {
        let err = ingest_oeis_bfile("1 561\n2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = ingest_oeis_bfile("1 561\nx 1105\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = ingest_oeis_bfile("1 561\n2 1105 9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = ingest_oeis_bfile("1 561\n3 1729\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn rejects_non_carmichael_values() {
        let err = ingest_oeis_bfile("# ok\n1 561\n2 1106\n").unwrap_err();
        assert!(matches!(err, Error::Validation { line: 3, .. }), "{err}");
        // Primes are not Carmichael numbers either.
        let err = ingest_oeis_bfile("1 97\n").unwrap_err();
        assert!(matches!(err, Error::Validation { line: 1, .. }), "{err}");
    }
}
