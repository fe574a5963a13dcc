//! Exact integer and rational primitives: modular arithmetic, Jacobi
//! symbols, p-adic valuations, 64-bit factorization, the Carmichael
//! function, and arbitrary-precision helpers.
//!
//! Everything here is a pure function of its inputs. All modular operations
//! cover the full unsigned 64-bit range by widening to 128 bits.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator. `Ratio::new` normalizes on construction, which keeps
/// equality structural.
pub type ExactRational = Ratio<BigInt>;

/// Shorthand for building an [`ExactRational`] from machine integers.
pub fn rational(numerator: i64, denominator: u64) -> ExactRational {
    Ratio::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// Nearest-f64 view of an exact rational, for reports and tolerances.
pub fn rational_to_f64(value: &ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

/// Largest prime tried during the trial-division stage of [`factorize`].
pub const TRIAL_DIVISION_BOUND: u64 = 100_000;

#[inline]
pub(crate) fn mod_mul(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

#[inline]
pub(crate) fn mod_pow_unchecked(base: u64, mut exponent: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = base % modulus;
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = mod_mul(result, base, modulus);
        }
        base = mod_mul(base, base, modulus);
        exponent >>= 1;
    }
    result
}

/// `base^exponent mod modulus` by square-and-multiply, O(log exponent)
/// multiplications. The modulus must be at least 2.
pub fn mod_pow(base: u64, exponent: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::domain("mod_pow requires modulus >= 2"));
    }
    Ok(mod_pow_unchecked(base, exponent, modulus))
}

/// Jacobi symbol `(a|n)` for odd positive `n`, via binary reciprocity.
/// Returns 0 exactly when `gcd(a, n) > 1`.
pub fn jacobi(a: i64, n: u64) -> Result<i32> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::domain("jacobi requires odd positive n"));
    }
    // Reduce a into [0, n). i128 avoids overflow for a = i64::MIN.
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i32;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        // (2|n) = -1 iff n = 3, 5 (mod 8); applied once per factor of two.
        if twos % 2 == 1 {
            let m = n % 8;
            if m == 3 || m == 5 {
                sign = -sign;
            }
        }
        // Quadratic reciprocity for odd a, n.
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        core::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// p-adic valuation: the largest `e` with `p^e | m`. Requires `m >= 1`
/// (the valuation of 0 is infinite) and `p >= 2`.
pub fn nu_p(m: u64, p: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::domain("nu_p(0, _) is infinite"));
    }
    if p < 2 {
        return Err(Error::domain("nu_p requires p >= 2"));
    }
    if p == 2 {
        return Ok(m.trailing_zeros());
    }
    let mut m = m;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// 2-adic valuation of `m >= 1`; the `p = 2` fast path of [`nu_p`].
#[inline]
pub fn nu_2(m: u64) -> u32 {
    debug_assert!(m > 0);
    m.trailing_zeros()
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u64(a, b) * b
}

/// Deterministic strong-test battery complete for the full u64 range.
///
/// The seven bases are a known minimal set whose combined strong test has
/// no composite survivor below 2^64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    const BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let r = (n - 1).trailing_zeros();
    'bases: for &b in &BASES {
        let b = b % n;
        if b == 0 {
            continue;
        }
        let mut x = mod_pow_unchecked(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Pollard's rho (Brent cycle-finding) on an odd composite with no factor
/// below the trial-division bound. Returns a nontrivial divisor.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n % 2 == 1 && !is_prime_u64(n));
    // Deterministic restarts: bump the increment until a split is found.
    for c in 1u64.. {
        let f = |x: u64| (mod_mul(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("composite input always splits eventually")
}

fn push_prime_power(factors: &mut Vec<(u64, u32)>, p: u64, e: u32) {
    debug_assert!(e > 0);
    factors.push((p, e));
}

fn split_into(factors: &mut Vec<(u64, u32)>, n: u64) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        push_prime_power(factors, n, 1);
        return;
    }
    let d = pollard_rho(n);
    split_into(factors, d);
    split_into(factors, n / d);
}

/// Multiset of `(prime, exponent)` pairs, ascending by prime; the product
/// of `prime^exponent` reconstructs the factored integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Build from raw parts, checking every invariant: primes strictly
    /// ascending and certified prime, exponents positive, product within
    /// u64.
    pub fn from_parts(factors: Vec<(u64, u32)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::domain("factorization of a unit"));
        }
        let mut product: u128 = 1;
        let mut prev = 0u64;
        for &(p, e) in &factors {
            if p <= prev {
                return Err(Error::domain("primes must be strictly ascending"));
            }
            if e == 0 {
                return Err(Error::domain("exponents must be positive"));
            }
            if !is_prime_u64(p) {
                return Err(Error::Domain(alloc::format!("{p} is not prime")));
            }
            for _ in 0..e {
                product *= p as u128;
                if product > u64::MAX as u128 {
                    return Err(Error::capacity("product exceeds 64 bits"));
                }
            }
            prev = p;
        }
        Ok(Factorization { factors })
    }

    /// The factored integer.
    pub fn value(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn num_prime_factors(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Complete factorization of `n >= 2`: trial division by every candidate
/// up to [`TRIAL_DIVISION_BOUND`], then rho splitting with deterministic
/// primality certification of the cofactors.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::domain("factorize requires n >= 2"));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rem = n;
    for p in [2u64, 3, 5] {
        if rem % p == 0 {
            let mut e = 0;
            while rem % p == 0 {
                rem /= p;
                e += 1;
            }
            push_prime_power(&mut factors, p, e);
        }
    }
    // Wheel over residues coprime to 30; divisions by the occasional
    // composite candidate are no-ops since its prime parts are gone.
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut w = 0usize;
    while d <= TRIAL_DIVISION_BOUND && d * d <= rem {
        if rem % d == 0 {
            let mut e = 0;
            while rem % d == 0 {
                rem /= d;
                e += 1;
            }
            push_prime_power(&mut factors, d, e);
        }
        d += WHEEL[w];
        w = (w + 1) & 7;
    }
    if rem > 1 {
        if d * d > rem {
            // No factor up to sqrt(rem): prime by exhaustion.
            push_prime_power(&mut factors, rem, 1);
        } else {
            let start = factors.len();
            split_into(&mut factors, rem);
            factors[start..].sort_unstable();
            // rho can emit the same prime twice (p^2 cofactors); merge runs.
            let mut merged: Vec<(u64, u32)> = Vec::with_capacity(factors.len());
            for &(p, e) in &factors {
                match merged.last_mut() {
                    Some(last) if last.0 == p => last.1 += e,
                    _ => merged.push((p, e)),
                }
            }
            factors = merged;
        }
    }
    debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
    debug_assert_eq!(
        factors.iter().map(|&(p, e)| p.pow(e)).product::<u64>(),
        n
    );
    Ok(Factorization { factors })
}

/// Carmichael function λ(n) from a factorization: the maximal multiplicative
/// order in (Z/nZ)*. λ(2)=1, λ(4)=2, λ(2^e)=2^{e-2} for e >= 3,
/// λ(p^e) = p^{e-1}(p-1) for odd p, combined by lcm.
pub fn carmichael_lambda(f: &Factorization) -> u64 {
    let mut lambda = 1u64;
    for &(p, e) in f.factors() {
        let part = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1u64 << (e - 2),
            }
        } else {
            p.pow(e - 1) * (p - 1)
        };
        lambda = lcm_u64(lambda, part);
    }
    lambda
}

/// `f(k)`: the least common multiple of `p - 1` over the primes dividing
/// `k`; 1 for `k = 1` by convention.
pub fn f_of_k(f: &Factorization) -> u64 {
    f.primes().fold(1u64, |acc, p| lcm_u64(acc, p - 1))
}

/// Binomial coefficient `n choose k` in arbitrary precision; 0 when
/// `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

impl core::fmt::Display for Factorization {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    /// Independent oracle: multiply `base` out `exponent` times.
    fn naive_mod_pow(base: u64, exponent: u64, modulus: u64) -> u64 {
        let mut acc = 1 % modulus;
        for _ in 0..exponent {
            acc = acc * base % modulus;
        }
        acc
    }

    #[test]
    fn mod_pow_spec_examples() {
        // 561 is a Fermat pseudoprime to base 2.
        assert_eq!(mod_pow(2, 560, 561).unwrap(), 1);
        // Frozen from the repeated-multiplication oracle.
        assert_eq!(naive_mod_pow(2, 35, 561), 263);
        assert_eq!(mod_pow(2, 35, 561).unwrap(), 263);
        for a in [1u64, 2, 5, 560, 562] {
            assert_eq!(mod_pow(a, 0, 561).unwrap(), 1);
        }
        assert!(mod_pow(2, 10, 1).is_err());
        assert!(mod_pow(2, 10, 0).is_err());
    }

    #[test]
    fn mod_pow_matches_naive_loop() {
        for modulus in 2..40u64 {
            for base in 0..40u64 {
                for exponent in 0..40u64 {
                    assert_eq!(
                        mod_pow(base, exponent, modulus).unwrap(),
                        naive_mod_pow(base, exponent, modulus),
                        "{base}^{exponent} mod {modulus}"
                    );
                }
            }
        }
    }

    #[test]
    fn mod_pow_full_width() {
        // (2^64 - 59) is prime; Fermat's little theorem at the top of range.
        let p = u64::MAX - 58;
        assert!(is_prime_u64(p));
        assert_eq!(mod_pow(u64::MAX, p - 1, p).unwrap(), 1);
    }

    #[test]
    fn jacobi_spec_examples() {
        for n in (1u64..200).step_by(2) {
            assert_eq!(jacobi(1, n).unwrap(), 1);
        }
        // (2|15) = (2|3)(2|5) = (-1)(-1) = 1.
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(3, 9).unwrap(), 0);
        assert!(jacobi(2, 10).is_err());
        assert!(jacobi(2, 0).is_err());
    }

    #[test]
    fn jacobi_matches_euler_criterion_on_primes() {
        // Independent oracle: a^{(p-1)/2} mod p mapped to {-1, 0, 1}.
        for p in (3u64..1000).filter(|&p| is_prime_u64(p)) {
            for a in 0..p {
                let euler = mod_pow_unchecked(a, (p - 1) / 2, p);
                let expected = if euler == 0 {
                    0
                } else if euler == 1 {
                    1
                } else {
                    assert_eq!(euler, p - 1);
                    -1
                };
                assert_eq!(jacobi(a as i64, p).unwrap(), expected, "({a}|{p})");
            }
        }
    }

    #[test]
    fn jacobi_negative_arguments() {
        // (-1|n) = (-1)^{(n-1)/2}.
        for n in (1u64..500).step_by(2) {
            let expected = if n % 4 == 1 { 1 } else { -1 };
            assert_eq!(jacobi(-1, n).unwrap(), expected);
        }
        assert_eq!(jacobi(i64::MIN, 3).unwrap(), jacobi((i64::MIN).rem_euclid(3), 3).unwrap());
    }

    proptest! {
        #[test]
        fn jacobi_is_multiplicative(a in -1000i64..1000, b in -1000i64..1000, k in 0u64..500) {
            let n = 2 * k + 1;
            let ab = jacobi(a.wrapping_mul(b), n).unwrap();
            prop_assert_eq!(ab, jacobi(a, n).unwrap() * jacobi(b, n).unwrap());
        }

        #[test]
        fn factorize_reconstructs_random_u64(n in 2u64..u64::MAX) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.value(), n);
            for p in f.primes() {
                prop_assert!(is_prime_u64(p));
            }
        }

        #[test]
        fn rational_arithmetic_is_exact(a in -1000i64..1000, b in 1u64..1000, c in -1000i64..1000, d in 1u64..1000) {
            // (a/b + c/d) * (b*d) = a*d + c*b as exact integers.
            let sum = rational(a, b) + rational(c, d);
            let lhs = sum * ExactRational::from_integer(BigInt::from(b as i64 * d as i64));
            prop_assert!(lhs.is_integer());
            prop_assert_eq!(lhs.to_integer(), BigInt::from(a * d as i64 + c * b as i64));
        }
    }

    #[test]
    fn nu_p_examples() {
        assert_eq!(nu_p(560, 2).unwrap(), 4);
        assert_eq!(nu_p(35, 2).unwrap(), 0);
        // Repeated halving oracle: 1728 = 2^6 * 27.
        let mut m = 1728u64;
        let mut e = 0;
        while m % 2 == 0 {
            m /= 2;
            e += 1;
        }
        assert_eq!(e, 6);
        assert_eq!(nu_p(1728, 2).unwrap(), 6);
        assert_eq!(nu_p(1728, 3).unwrap(), 3);
        assert_eq!(nu_2(1728), 6);
        assert!(nu_p(0, 2).is_err());
        assert!(nu_p(8, 1).is_err());
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(561).unwrap();
        assert_eq!(f.factors(), &[(3, 1), (11, 1), (17, 1)]);
        let f = factorize(8).unwrap();
        assert_eq!(f.factors(), &[(2, 3)]);
        let f = factorize(1729).unwrap();
        assert_eq!(f.factors(), &[(7, 1), (13, 1), (19, 1)]);
        assert!(factorize(1).is_err());
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_exhaustive_small_range() {
        // Independent trial-division oracle over [2, 10^5].
        for n in 2u64..=100_000 {
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), n);
            let mut rem = n;
            for &(p, e) in f.factors() {
                assert!(is_prime_u64(p), "{p} listed for {n}");
                for _ in 0..e {
                    assert_eq!(rem % p, 0);
                    rem /= p;
                }
            }
            assert_eq!(rem, 1);
        }
    }

    #[test]
    fn factorize_semiprime_core() {
        // Both factors above the trial-division bound: forces the rho path.
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors(), &[(p, 1), (q, 1)]);
        // Square of a large prime.
        let f = factorize(p * p).unwrap();
        assert_eq!(f.factors(), &[(p, 2)]);
    }

    /// Brute-force maximal multiplicative order in (Z/nZ)*.
    fn max_order(n: u64) -> u64 {
        let mut best = 1;
        for a in 1..n {
            if gcd_u64(a, n) != 1 {
                continue;
            }
            let mut ord = 1u64;
            let mut x = a % n;
            while x != 1 {
                x = x * a % n;
                ord += 1;
            }
            best = best.max(ord);
        }
        best
    }

    #[test]
    fn carmichael_lambda_examples() {
        assert_eq!(carmichael_lambda(&factorize(33).unwrap()), 10);
        assert_eq!(carmichael_lambda(&factorize(15).unwrap()), 4);
        for p in [3u64, 5, 7, 11, 101] {
            assert_eq!(carmichael_lambda(&factorize(p).unwrap()), p - 1);
        }
        assert_eq!(carmichael_lambda(&factorize(2).unwrap()), 1);
        assert_eq!(carmichael_lambda(&factorize(4).unwrap()), 2);
        assert_eq!(carmichael_lambda(&factorize(8).unwrap()), 2);
        assert_eq!(carmichael_lambda(&factorize(16).unwrap()), 4);
    }

    #[test]
    fn carmichael_lambda_matches_brute_force_order() {
        for n in 2u64..2000 {
            let f = factorize(n).unwrap();
            assert_eq!(carmichael_lambda(&f), max_order(n), "lambda({n})");
        }
    }

    #[test]
    fn f_of_k_examples() {
        assert_eq!(f_of_k(&factorize(15).unwrap()), 4);
        // lcm(2, 10, 16) = 80.
        assert_eq!(f_of_k(&factorize(561).unwrap()), 80);
        for p in [3u64, 5, 97] {
            assert_eq!(f_of_k(&factorize(p).unwrap()), p - 1);
        }
    }

    /// Pascal-recurrence oracle.
    fn pascal(n: usize, k: usize) -> BigUint {
        let mut row = alloc::vec![BigUint::one()];
        for _ in 0..n {
            let mut next = alloc::vec![BigUint::one()];
            for i in 1..row.len() {
                next.push(&row[i - 1] + &row[i]);
            }
            next.push(BigUint::one());
            row = next;
        }
        row.get(k).cloned().unwrap_or_else(BigUint::zero)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        for r in 0..20u64 {
            assert_eq!(binomial(r, 0), BigUint::one());
        }
        assert_eq!(binomial(10, 5), pascal(10, 5));
        assert_eq!(binomial(10, 5), BigUint::from(252u32));
        assert_eq!(binomial(3, 7), BigUint::zero());
        for n in 0..=24u64 {
            for k in 0..=n {
                assert_eq!(binomial(n, k), pascal(n as usize, k as usize));
            }
        }
    }

    #[test]
    fn exact_rational_is_normalized() {
        let r = rational(6, 4);
        assert_eq!(r.numer(), &BigInt::from(3));
        assert_eq!(r.denom(), &BigInt::from(2));
        let r = rational(-6, 4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert!(r.denom().is_positive());
        assert_eq!(rational(0, 7), ExactRational::zero());
    }

    #[test]
    fn is_prime_u64_matches_trial_division() {
        let mut sieve = alloc::vec![true; 100_000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..sieve.len() {
            if sieve[i] {
                for j in (i * i..sieve.len()).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &expected) in sieve.iter().enumerate() {
            assert_eq!(is_prime_u64(n as u64), expected, "n = {n}");
        }
    }

    #[test]
    fn factorization_from_parts_validates() {
        assert!(Factorization::from_parts(alloc::vec![(3, 1), (11, 1)]).is_ok());
        assert!(Factorization::from_parts(alloc::vec![(11, 1), (3, 1)]).is_err());
        assert!(Factorization::from_parts(alloc::vec![(4, 1)]).is_err());
        assert!(Factorization::from_parts(alloc::vec![(3, 0)]).is_err());
        assert!(Factorization::from_parts(alloc::vec![]).is_err());
        assert!(Factorization::from_parts(alloc::vec![(2, 64)]).is_err());
    }

    #[test]
    fn factorization_display() {
        assert_eq!(alloc::format!("{}", factorize(561).unwrap()), "3*11*17");
        assert_eq!(alloc::format!("{}", factorize(12).unwrap()), "2^2*3");
    }
}
