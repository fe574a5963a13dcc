//! Exact Carmichael enumeration by prime products.
//!
//! Write a Carmichael number as `n = P * q * s` where `P` is the product of
//! all prime factors except the two largest and `q < s` are the two largest.
//! For a fixed prefix `P` and candidate `q`, the Korselt conditions pin the
//! last prime down hard:
//!
//! - `(s-1) | (n-1)` iff `(s-1) | (P*q - 1)`, because
//!   `n - 1 = P*q*(s-1) + (P*q - 1)`;
//! - `(q-1) | (n-1)` iff `P*s = 1 (mod q-1)`, i.e. `s` lies in a single
//!   residue class mod `q-1` (and `gcd(P, q-1) = 1` is necessary).
//!
//! So `s - 1` runs over the divisors of `P*q - 1` in one residue class, each
//! candidate checked for primality and for the prefix divisibilities
//! `(p_i - 1) | (n - 1)`. Every Carmichael number is produced exactly once
//! because the split into prefix and top two primes is determined by its
//! factorization. Unlike the segmented sieve, the cost scales with the
//! number of (prefix, q) pairs rather than with the limit itself, which is
//! what makes the 10^12 range reachable.

use alloc::vec::Vec;

use crate::arith::{self, gcd_u64};
use crate::error::{Error, Result};

use super::sieve::small_primes;

/// Hard cap: beyond this the (prefix, q) walk is no longer desk-scale.
pub const PRODUCTS_MAX_LIMIT: u64 = 100_000_000_000_000;

/// `a^{-1} mod m` for coprime inputs.
fn mod_inverse(a: u64, m: u64) -> u64 {
    debug_assert!(m > 1 && gcd_u64(a, m) == 1);
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// All divisors of the factored integer, in no particular order.
fn divisors(f: &arith::Factorization) -> Vec<u64> {
    let mut divs = alloc::vec![1u64];
    for &(p, e) in f.factors() {
        let len = divs.len();
        let mut power = 1u64;
        for _ in 0..e {
            power *= p;
            for i in 0..len {
                divs.push(divs[i] * power);
            }
        }
    }
    divs
}

struct Search<'a> {
    limit: u64,
    /// Odd primes up to sqrt(limit / 3), enough for any q.
    primes: &'a [u64],
    found: Vec<u64>,
}

impl Search<'_> {
    /// Close the prefix with the two largest primes `q < s`.
    fn close(&mut self, prefix: &[u64], product: u64, q: u64) -> Result<()> {
        if gcd_u64(product % (q - 1), q - 1) != 1 {
            return Ok(());
        }
        let m = product * q - 1;
        let p_inv = mod_inverse(product % (q - 1), q - 1);
        // s = d + 1 over divisors d of m with d >= q, in the residue class
        // that grants (q-1) | (n-1).
        let want = (p_inv + q - 2) % (q - 1);
        for d in divisors(&arith::factorize(m)?) {
            if d < q || d % (q - 1) != want {
                continue;
            }
            let s = d + 1;
            let n = product as u128 * q as u128 * s as u128;
            if n > self.limit as u128 {
                continue;
            }
            if !arith::is_prime_u64(s) {
                continue;
            }
            let n = n as u64;
            if prefix.iter().all(|&p| (n - 1) % (p - 1) == 0) {
                self.found.push(n);
            }
        }
        Ok(())
    }

    /// Depth-first walk over ascending odd-prime prefixes.
    fn extend(&mut self, prefix: &mut Vec<u64>, product: u64) -> Result<()> {
        let min_next = prefix.last().copied().unwrap_or(2);
        for &p in self.primes {
            if p <= min_next {
                continue;
            }
            // Two more primes above q would push past the limit.
            if product as u128 * p as u128 * p as u128 >= self.limit as u128 {
                break;
            }
            if !prefix.is_empty() {
                self.close(prefix, product, p)?;
            }
            // A Carmichael with this prefix extended by p needs two primes
            // beyond p as well.
            if product as u128 * p as u128 * p as u128 * (p as u128) < self.limit as u128 {
                // No prime factor of n may divide another's p - 1.
                if gcd_u64(product, p - 1) == 1 {
                    prefix.push(p);
                    self.extend(prefix, product * p)?;
                    prefix.pop();
                }
            }
        }
        Ok(())
    }
}

/// Every Carmichael number `<= limit`, ascending, by the prime-products
/// method. Exact and duplicate-free; intended for ranges far beyond sieve
/// scale.
pub fn enumerate_products(limit: u64) -> Result<Vec<u64>> {
    if limit > PRODUCTS_MAX_LIMIT {
        return Err(Error::capacity(alloc::format!(
            "product enumeration is limited to {PRODUCTS_MAX_LIMIT}"
        )));
    }
    if limit < 561 {
        return Ok(Vec::new());
    }
    // q <= sqrt(limit / p1) <= sqrt(limit / 3).
    let primes = small_primes((limit / 3).isqrt());
    let mut search = Search {
        limit,
        primes: &primes,
        found: Vec::new(),
    };
    search.extend(&mut Vec::new(), 1)?;
    search.found.sort_unstable();
    Ok(search.found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carmichael::sieve::{collect_carmichaels, SieveConfig};

    #[test]
    fn mod_inverse_is_an_inverse() {
        for m in 2u64..200 {
            for a in 1..m {
                if gcd_u64(a, m) == 1 {
                    assert_eq!(a * mod_inverse(a, m) % m, 1, "a={a} m={m}");
                }
            }
        }
    }

    #[test]
    fn divisors_are_complete() {
        for n in 2u64..500 {
            let mut divs = divisors(&arith::factorize(n).unwrap());
            divs.sort_unstable();
            let expected: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divs, expected, "n = {n}");
        }
    }

    #[test]
    fn product_method_matches_sieve_to_1e6() {
        let sieved: Vec<u64> = collect_carmichaels(1_000_000, &SieveConfig::default())
            .unwrap()
            .iter()
            .map(|r| r.n)
            .collect();
        assert_eq!(sieved.len(), 43);
        assert_eq!(enumerate_products(1_000_000).unwrap(), sieved);
    }

    #[test]
    fn product_method_small_limits() {
        assert!(enumerate_products(560).unwrap().is_empty());
        assert_eq!(enumerate_products(561).unwrap(), alloc::vec![561]);
        assert_eq!(
            enumerate_products(10_000).unwrap(),
            alloc::vec![561, 1105, 1729, 2465, 2821, 6601, 8911]
        );
        assert!(enumerate_products(PRODUCTS_MAX_LIMIT + 1).is_err());
    }
}
