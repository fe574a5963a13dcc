//! Korselt and depth-z Korselt criteria, exact depth, Carmichael
//! enumeration, OEIS b-file ingestion, depth tables, and the
//! `1 + x/(2^z k f(k))` divisor-bound audit.

mod audit;
mod ingest;
mod products;
mod sieve;
mod table;

pub use audit::{divisor_bound_audit, BoundAudit};
pub use ingest::ingest_oeis_bfile;
pub use products::enumerate_products;
pub use sieve::{
    carmichaels_in_segment, collect_carmichaels, enumerate_carmichaels, small_primes, SieveConfig,
};
pub use table::{build_depth_table, ratio_report, DepthTable, RatioLine};

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};
use crate::primality::{self, MRDecomposition};

/// Largest `n` accepted by the exhaustive all-bases oracles.
pub const ALL_BASES_ORACLE_LIMIT: u64 = 1_000_000;

fn require_composite(f: &Factorization) -> Result<()> {
    if f.is_prime() {
        return Err(Error::domain("Korselt criteria apply to composites only"));
    }
    Ok(())
}

/// Korselt's criterion: a composite `n` is a Carmichael number iff it is
/// odd, squarefree, and `(p - 1) | (n - 1)` for every prime `p | n`.
pub fn is_carmichael(f: &Factorization) -> Result<bool> {
    require_composite(f)?;
    let n = f.value();
    Ok(n % 2 == 1 && f.is_squarefree() && f.primes().all(|p| (n - 1) % (p - 1) == 0))
}

/// Depth-z Korselt criterion: odd, squarefree, composite, and
/// `(p - 1) | (n - 1)/2^z` for every prime `p | n`. When `2^z` does not
/// divide `n - 1` the divisibility is unsatisfiable and the answer is
/// `false` rather than an error.
pub fn z_korselt_check(f: &Factorization, z: u32) -> Result<bool> {
    require_composite(f)?;
    let n = f.value();
    if n % 2 == 0 || !f.is_squarefree() {
        return Ok(false);
    }
    if u64::from(z) > u64::from(arith::nu_2(n - 1)) {
        return Ok(false);
    }
    let quotient = (n - 1) >> z;
    Ok(f.primes().all(|p| quotient % (p - 1) == 0))
}

/// Exact depth of a Carmichael number:
/// `nu_2(n - 1) - max_i nu_2(p_i - 1)`, the largest `z` passing
/// [`z_korselt_check`].
pub fn exact_depth(f: &Factorization) -> Result<u32> {
    if !is_carmichael(f)? {
        return Err(Error::domain("exact_depth requires a Carmichael number"));
    }
    let n = f.value();
    let max_nu = f.primes().map(|p| arith::nu_2(p - 1)).max().expect("nonempty");
    Ok(arith::nu_2(n - 1) - max_nu)
}

/// A Carmichael number with its factorization and 2-adic depth data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthRecord {
    pub n: u64,
    pub factors: Factorization,
    pub num_prime_factors: u32,
    pub nu2_n_minus_1: u32,
    pub max_nu2_p_minus_1: u32,
    pub exact_depth: u32,
}

impl DepthRecord {
    /// Build from a factorization, verifying the Carmichael property.
    pub fn new(factors: Factorization) -> Result<Self> {
        if !is_carmichael(&factors)? {
            return Err(Error::domain("not a Carmichael number"));
        }
        let n = factors.value();
        let nu2_n_minus_1 = arith::nu_2(n - 1);
        let max_nu2_p_minus_1 = factors
            .primes()
            .map(|p| arith::nu_2(p - 1))
            .max()
            .expect("nonempty");
        Ok(DepthRecord {
            n,
            num_prime_factors: factors.num_prime_factors(),
            nu2_n_minus_1,
            max_nu2_p_minus_1,
            exact_depth: nu2_n_minus_1 - max_nu2_p_minus_1,
            factors,
        })
    }

    /// Build by factoring `n` directly.
    pub fn of(n: u64) -> Result<Self> {
        DepthRecord::new(arith::factorize(n)?)
    }
}

fn check_oracle_input(n: u64) -> Result<MRDecomposition> {
    if n > ALL_BASES_ORACLE_LIMIT {
        return Err(Error::capacity(alloc::format!(
            "all-bases oracle is limited to n <= {ALL_BASES_ORACLE_LIMIT}"
        )));
    }
    if n < 9 || n % 2 == 0 || primality::is_prime_oracle(n) {
        return Err(Error::domain("all-bases oracle requires an odd composite"));
    }
    MRDecomposition::new(n)
}

/// Brute-force oracle: does `n` fool the depth-z test for every base in
/// `Z_n^*`? Bases 1 and `n - 1` pass unconditionally and are skipped.
pub fn fools_all_bases(n: u64, z: u32) -> Result<bool> {
    let dec = check_oracle_input(n)?;
    let m = z.min(dec.r());
    for a in 2..n - 1 {
        if arith::gcd_u64(a, n) != 1 {
            continue;
        }
        match primality::max_passing_depth(&dec, a) {
            None => return Ok(false),
            Some(k) if m > k => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// Deepest `z` for which [`fools_all_bases`] holds, in a single sweep.
///
/// `None` means some unit base fails even the Fermat test (`z = 0`);
/// `Some(k)` means `fools_all_bases(n, z)` is true exactly for
/// `min(z, nu_2(n-1)) <= k`. For composites `k` is always strictly below
/// `nu_2(n-1)`, so this is simply `z <= k`.
pub fn max_fooled_depth(n: u64) -> Result<Option<u32>> {
    let dec = check_oracle_input(n)?;
    let mut deepest = dec.r();
    for a in 2..n - 1 {
        if arith::gcd_u64(a, n) != 1 {
            continue;
        }
        match primality::max_passing_depth(&dec, a) {
            None => return Ok(None),
            Some(k) => deepest = deepest.min(k),
        }
    }
    Ok(Some(deepest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    #[test]
    fn korselt_examples() {
        assert!(is_carmichael(&factorize(561).unwrap()).unwrap());
        // 4 does not divide 14.
        assert!(!is_carmichael(&factorize(15).unwrap()).unwrap());
        assert!(!is_carmichael(&factorize(9).unwrap()).unwrap());
        assert!(is_carmichael(&factorize(7).unwrap()).is_err());
    }

    #[test]
    fn z_korselt_examples() {
        let f561 = factorize(561).unwrap();
        assert!(z_korselt_check(&f561, 0).unwrap());
        // 16 does not divide 280.
        assert!(!z_korselt_check(&f561, 1).unwrap());
        let f1729 = factorize(1729).unwrap();
        // 6, 12, 18 all divide 108 = 1728/16; 12 does not divide 54.
        assert!(z_korselt_check(&f1729, 4).unwrap());
        assert!(!z_korselt_check(&f1729, 5).unwrap());
        // z beyond nu_2(n-1) is unsatisfiable, not an error.
        assert!(!z_korselt_check(&f1729, 40).unwrap());
        for n in (9u64..2000).step_by(2) {
            let f = factorize(n).unwrap();
            if f.is_prime() {
                continue;
            }
            assert_eq!(
                z_korselt_check(&f, 0).unwrap(),
                is_carmichael(&f).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn exact_depth_examples() {
        assert_eq!(exact_depth(&factorize(561).unwrap()).unwrap(), 0);
        assert_eq!(exact_depth(&factorize(1729).unwrap()).unwrap(), 4);
        assert_eq!(exact_depth(&factorize(2465).unwrap()).unwrap(), 1);
        assert!(exact_depth(&factorize(15).unwrap()).is_err());
    }

    #[test]
    fn exact_depth_is_the_largest_passing_z() {
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911, 41041, 62745] {
            let f = factorize(n).unwrap();
            let depth = exact_depth(&f).unwrap();
            assert!(z_korselt_check(&f, depth).unwrap(), "n = {n}");
            assert!(!z_korselt_check(&f, depth + 1).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn depth_record_fields() {
        let rec = DepthRecord::of(1729).unwrap();
        assert_eq!(rec.n, 1729);
        assert_eq!(rec.num_prime_factors, 3);
        assert_eq!(rec.nu2_n_minus_1, 6);
        assert_eq!(rec.max_nu2_p_minus_1, 2);
        assert_eq!(rec.exact_depth, 4);
        assert!(DepthRecord::of(21).is_err());
    }

    #[test]
    fn fools_all_bases_examples() {
        assert!(fools_all_bases(561, 0).unwrap());
        assert!(!fools_all_bases(561, 1).unwrap());
        assert!(!fools_all_bases(15, 0).unwrap());
        assert!(fools_all_bases(1729, 4).unwrap());
        assert!(!fools_all_bases(1729, 5).unwrap());
        assert!(fools_all_bases(2_000_001, 0).is_err());
        assert!(fools_all_bases(97, 0).is_err());
    }

    #[test]
    fn max_fooled_depth_agrees_with_per_z_oracle() {
        for n in (9u64..4000).step_by(2) {
            if primality::is_prime_oracle(n) {
                continue;
            }
            let deepest = max_fooled_depth(n).unwrap();
            for z in 0..6 {
                let expected = match deepest {
                    None => false,
                    Some(k) => z <= k,
                };
                assert_eq!(fools_all_bases(n, z).unwrap(), expected, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn oracle_matches_z_korselt_on_a_sample() {
        // The full 10^5 sweep is the acceptance suite's job; spot-check the
        // equivalence here on the low range.
        for n in (9u64..3000).step_by(2) {
            if primality::is_prime_oracle(n) {
                continue;
            }
            let f = factorize(n).unwrap();
            for z in 0..4 {
                assert_eq!(
                    fools_all_bases(n, z).unwrap(),
                    z_korselt_check(&f, z).unwrap(),
                    "n={n} z={z}"
                );
            }
        }
    }
}
