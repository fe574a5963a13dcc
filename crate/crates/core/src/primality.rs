//! The depth-limited primality test family: Fermat, Solovay-Strassen,
//! Miller-Rabin, the z-deep Miller-Rabin variant, and the z=1
//! Solovay-Strassen variant, plus a seeded multi-round driver and a
//! deterministic 64-bit oracle.
//!
//! For odd `n` write `n - 1 = 2^r * d` with `d` odd and consider the chain
//! `a^d, a^{2d}, ..., a^{2^r d} (mod n)`. Full Miller-Rabin inspects the
//! whole chain; the z-deep variant inspects only the last `z+1` entries
//! (all of them when the chain is shorter). A window whose first element is
//! 1 is accepted even though its unexamined predecessor might not be `±1`;
//! this is what makes depth 0 coincide with the Fermat test.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, mod_mul, mod_pow_unchecked};
use crate::error::{Error, Result};

/// Verdict of one round of a probabilistic primality test. `Composite` is
/// definitive; `ProbablyPrime` is not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestOutcome {
    Composite,
    ProbablyPrime,
}

impl TestOutcome {
    pub fn passed(self) -> bool {
        self == TestOutcome::ProbablyPrime
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            TestOutcome::ProbablyPrime
        } else {
            TestOutcome::Composite
        }
    }
}

/// Which member of the test family to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestKind {
    Fermat,
    SolovayStrassen,
    MillerRabin,
    /// Depth-limited Miller-Rabin with the fixed window parameter `z`.
    ZDeepMillerRabin(u32),
    /// Checks `a^{(n-1)/2} = ±1`; verdict-identical to depth 1.
    ZOneSolovayVariant,
}

/// `n - 1 = 2^r * d` with `d` odd, for odd `n >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MRDecomposition {
    n: u64,
    r: u32,
    d: u64,
}

impl MRDecomposition {
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 || n % 2 == 0 {
            return Err(Error::domain("decomposition requires odd n >= 3"));
        }
        let r = (n - 1).trailing_zeros();
        Ok(MRDecomposition { n, r, d: (n - 1) >> r })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The 2-adic valuation of `n - 1` (the chain has `r + 1` entries).
    pub fn r(&self) -> u32 {
        self.r
    }

    /// The odd part of `n - 1`.
    pub fn d(&self) -> u64 {
        self.d
    }
}

fn check_base(n: u64, a: u64) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::domain("test requires odd n >= 3"));
    }
    if a < 2 || a > n - 2 {
        return Err(Error::Domain(alloc::format!(
            "base {a} out of range [2, {}]",
            n - 2
        )));
    }
    Ok(())
}

/// Fermat test: probably prime iff `a^{n-1} = 1 (mod n)`.
pub fn fermat_test(n: u64, a: u64) -> Result<TestOutcome> {
    check_base(n, a)?;
    Ok(TestOutcome::from_pass(mod_pow_unchecked(a, n - 1, n) == 1))
}

/// Solovay-Strassen: composite iff `(a|n) = 0` or
/// `a^{(n-1)/2} != (a|n) (mod n)`.
pub fn solovay_strassen(n: u64, a: u64) -> Result<TestOutcome> {
    check_base(n, a)?;
    let symbol = arith::jacobi(a as i64, n)?;
    if symbol == 0 {
        return Ok(TestOutcome::Composite);
    }
    let euler = mod_pow_unchecked(a, (n - 1) / 2, n);
    let matches = (symbol == 1 && euler == 1) || (symbol == -1 && euler == n - 1);
    Ok(TestOutcome::from_pass(matches))
}

/// The squaring chain `[a^d, a^{2d}, ..., a^{2^r d}] mod n`, length `r + 1`.
/// Each element is the square of its predecessor; the last element is
/// `a^{n-1} mod n`.
pub fn mr_sequence(dec: &MRDecomposition, a: u64) -> Vec<u64> {
    let n = dec.n;
    let mut seq = Vec::with_capacity(dec.r as usize + 1);
    let mut x = mod_pow_unchecked(a, dec.d, n);
    seq.push(x);
    for _ in 0..dec.r {
        x = mod_mul(x, x, n);
        seq.push(x);
    }
    seq
}

fn window_pass(n: u64, a: u64, m: u32) -> bool {
    // x starts at a^{(n-1)/2^m}; squaring m times walks the window.
    let mut x = mod_pow_unchecked(a, (n - 1) >> m, n);
    if x == 1 {
        return true;
    }
    for _ in 0..m {
        if x == n - 1 {
            return true;
        }
        x = mod_mul(x, x, n);
    }
    false
}

/// Depth-limited Miller-Rabin: examine only the last `min(z, r) + 1` chain
/// entries. Probably prime iff `a^{(n-1)/2^m} = 1` or `a^{(n-1)/2^i} = -1`
/// for some `i` in `[1, m]`, where `m = min(z, r)`.
pub fn z_deep_miller_rabin(n: u64, a: u64, z: u32) -> Result<TestOutcome> {
    check_base(n, a)?;
    let r = (n - 1).trailing_zeros();
    let m = z.min(r);
    Ok(TestOutcome::from_pass(window_pass(n, a, m)))
}

/// Full-window Miller-Rabin; identical to [`z_deep_miller_rabin`] with
/// `z >= r`.
pub fn miller_rabin(n: u64, a: u64) -> Result<TestOutcome> {
    check_base(n, a)?;
    let r = (n - 1).trailing_zeros();
    Ok(TestOutcome::from_pass(window_pass(n, a, r)))
}

/// The depth-1 Solovay-Strassen relaxation: probably prime iff
/// `a^{(n-1)/2} = ±1 (mod n)`.
pub fn z1_solovay_variant(n: u64, a: u64) -> Result<TestOutcome> {
    check_base(n, a)?;
    let x = mod_pow_unchecked(a, (n - 1) / 2, n);
    Ok(TestOutcome::from_pass(x == 1 || x == n - 1))
}

/// Deepest window the base `a` passes, in one chain walk.
///
/// Returns `None` when `a` fails even the Fermat test (and therefore every
/// depth). Returns `Some(k)` when `a` passes depth `z` exactly for
/// `min(z, r) <= k`; `k = r` means `a` is a strong liar and passes every
/// depth.
pub(crate) fn max_passing_depth(dec: &MRDecomposition, a: u64) -> Option<u32> {
    let n = dec.n;
    let mut x = mod_pow_unchecked(a, dec.d, n);
    if x == 1 {
        return Some(dec.r);
    }
    for j in 1..=dec.r {
        let prev = x;
        x = mod_mul(x, x, n);
        if x == 1 {
            // First 1 in the chain sits at index j; windows that start at
            // or after it pass, and only a -1 just before it rescues the
            // deeper windows.
            return if prev == n - 1 { Some(dec.r) } else { Some(dec.r - j) };
        }
    }
    None
}

/// Multi-round driver: draws `rounds` bases uniformly from `[2, n-2]` with
/// a ChaCha stream seeded by `seed`, stopping at the first composite
/// verdict. Deterministic for a fixed seed. `n < 5` is answered by direct
/// lookup.
pub fn run_test(n: u64, kind: TestKind, rounds: u32, seed: u64) -> Result<TestOutcome> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::domain("run_test requires odd n >= 3"));
    }
    if n < 5 {
        return Ok(TestOutcome::from_pass(is_prime_oracle(n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let a = rng.random_range(2..=n - 2);
        let outcome = match kind {
            TestKind::Fermat => fermat_test(n, a)?,
            TestKind::SolovayStrassen => solovay_strassen(n, a)?,
            TestKind::MillerRabin => miller_rabin(n, a)?,
            TestKind::ZDeepMillerRabin(z) => z_deep_miller_rabin(n, a, z)?,
            TestKind::ZOneSolovayVariant => z1_solovay_variant(n, a)?,
        };
        if outcome == TestOutcome::Composite {
            return Ok(TestOutcome::Composite);
        }
    }
    Ok(TestOutcome::ProbablyPrime)
}

/// Deterministic, exact 64-bit primality via a fixed-base strong-test
/// battery with no composite survivor below 2^64.
pub fn is_prime_oracle(n: u64) -> bool {
    arith::is_prime_u64(n)
}
