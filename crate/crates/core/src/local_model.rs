//! The 2-adic local model for the Korselt criterion at p = 2.
//!
//! Tuples of random odd 2-adic integers stand in for the prime factors of a
//! Carmichael number. A sample's binary digits are revealed lazily, each
//! from its own deterministic substream, so predicates like "is the product
//! 2-Korselt" and "what is the exact depth" are decided without a fixed
//! truncation: bits beyond the current precision are generated on demand
//! and never regenerated (the principle of deferred decisions).
//!
//! The module carries both sides of the comparison: seeded Monte Carlo over
//! such tuples, and the exact rational probability
//! `(1/(2^r-1)) [1 + sum over even s in [2, r) of C(r,s) W(r-s)]` with
//! `W(n) = sum_{j=0..n} (-1)^j C(n,j) / (2^{j+1}-1)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{binomial, ExactRational};
use crate::error::{Error, Result};

/// Bits revealed up front when a sample is created.
pub const DEFAULT_INITIAL_PRECISION: u32 = 40;

/// Hard ceiling on revealed bits; hitting it is astronomically unlikely
/// under fair coins and turns into a capacity error instead of an unbounded
/// loop.
pub const PRECISION_CEILING: u32 = 4096;

/// A random odd 2-adic integer revealed to finite precision.
///
/// The low bit is always 1; every further bit is a fair coin drawn from the
/// sample's own stream. Extending the precision never changes bits already
/// revealed.
#[derive(Debug, Clone)]
pub struct TwoAdicSample {
    bits: BigUint,
    precision: u32,
    stream: ChaCha8Rng,
}

impl TwoAdicSample {
    fn new(stream: ChaCha8Rng, initial_precision: u32) -> Result<Self> {
        let mut sample = TwoAdicSample {
            bits: BigUint::one(),
            precision: 1,
            stream,
        };
        sample.ensure_precision(initial_precision.max(1))?;
        Ok(sample)
    }

    /// Reveal bits (in whole 64-bit words) until at least `target` are
    /// known.
    pub fn ensure_precision(&mut self, target: u32) -> Result<()> {
        if target > PRECISION_CEILING {
            return Err(Error::capacity(alloc::format!(
                "precision {target} exceeds the {PRECISION_CEILING}-bit ceiling"
            )));
        }
        while self.precision < target {
            let word = self.stream.next_u64();
            self.bits |= BigUint::from(word) << self.precision;
            self.precision += 64;
        }
        Ok(())
    }

    /// The revealed low bits; odd and below `2^precision`.
    pub fn low_bits(&self) -> &BigUint {
        &self.bits
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `nu_2(p - 1)`: index of the lowest set bit above bit 0, revealing
    /// more bits while everything above bit 0 is still zero.
    pub fn nu2_pred(&mut self) -> Result<u32> {
        loop {
            let pred = &self.bits - 1u32;
            if !pred.is_zero() {
                return Ok(pred.trailing_zeros().expect("nonzero") as u32);
            }
            let next = self
                .precision
                .checked_add(64)
                .ok_or_else(|| Error::capacity("precision overflow"))?;
            self.ensure_precision(next)?;
        }
    }

    fn bits_mod_2k(&self, k: u32) -> BigUint {
        debug_assert!(self.precision >= k);
        let mask = (BigUint::one() << k) - 1u32;
        &self.bits & &mask
    }
}

/// Draw `r` independent samples from per-sample substreams seeded off
/// `stream`.
pub fn sample_tuple(
    r: u32,
    initial_precision: u32,
    stream: &mut ChaCha8Rng,
) -> Result<Vec<TwoAdicSample>> {
    if r == 0 {
        return Err(Error::domain("tuple length must be at least 1"));
    }
    let mut tuple = Vec::with_capacity(r as usize);
    for _ in 0..r {
        let mut child_seed = [0u8; 32];
        stream.fill_bytes(&mut child_seed);
        tuple.push(TwoAdicSample::new(
            ChaCha8Rng::from_seed(child_seed),
            initial_precision,
        )?);
    }
    Ok(tuple)
}

/// The exponent vector `(nu_2(p_1 - 1), ..., nu_2(p_r - 1))` with its
/// minimum `mu`, maximum `nu`, and the multiplicity `s` of the minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    pub nus: Vec<u32>,
    pub mu: u32,
    pub nu: u32,
    pub s: u32,
}

impl ExponentVector {
    pub fn all_equal(&self) -> bool {
        self.mu == self.nu
    }
}

/// Resolve every sample's exponent, extending precision lazily.
pub fn exponent_vector(tuple: &mut [TwoAdicSample]) -> Result<ExponentVector> {
    if tuple.is_empty() {
        return Err(Error::domain("empty tuple"));
    }
    let mut nus = Vec::with_capacity(tuple.len());
    for sample in tuple.iter_mut() {
        nus.push(sample.nu2_pred()?);
    }
    let mu = *nus.iter().min().expect("nonempty");
    let nu = *nus.iter().max().expect("nonempty");
    let s = nus.iter().filter(|&&v| v == mu).count() as u32;
    Ok(ExponentVector { nus, mu, nu, s })
}

/// Product of the samples modulo `2^k`, extending precision as needed.
fn product_mod_2k(tuple: &mut [TwoAdicSample], k: u32) -> Result<BigUint> {
    let mask = (BigUint::one() << k) - 1u32;
    let mut product = BigUint::one();
    for sample in tuple.iter_mut() {
        sample.ensure_precision(k)?;
        product = (product * sample.bits_mod_2k(k)) & &mask;
    }
    Ok(product)
}

/// `nu_2(product - 1)` exactly, revealing bits until a nonzero bit of
/// `product - 1` appears.
fn resolve_product_nu2(tuple: &mut [TwoAdicSample], start_bits: u32) -> Result<u32> {
    let mut k = start_bits.max(2);
    loop {
        let pred = product_mod_2k(tuple, k)? - 1u32;
        if !pred.is_zero() {
            return Ok(pred.trailing_zeros().expect("nonzero") as u32);
        }
        k = k.checked_mul(2).ok_or_else(|| Error::capacity("precision overflow"))?;
        if k > PRECISION_CEILING {
            return Err(Error::capacity(alloc::format!(
                "product valuation unresolved within {PRECISION_CEILING} bits"
            )));
        }
    }
}

/// Is the tuple 2-Korselt, i.e. `max_i nu_2(p_i - 1) <= nu_2(prod p_i - 1)`?
/// Decided from revealed bits, extending lazily only as far as needed.
pub fn tuple_is_2korselt(tuple: &mut [TwoAdicSample]) -> Result<bool> {
    let ev = exponent_vector(tuple)?;
    // It suffices to know the product mod 2^nu: congruent to 1 exactly when
    // the valuation of (product - 1) reaches nu.
    Ok(product_mod_2k(tuple, ev.nu)?.is_one())
}

/// Exact depth `nu_2(prod p_i - 1) - max_i nu_2(p_i - 1)` of a 2-Korselt
/// tuple. Errs on tuples that are not 2-Korselt.
pub fn tuple_exact_depth(tuple: &mut [TwoAdicSample]) -> Result<u32> {
    let ev = exponent_vector(tuple)?;
    let product_nu = resolve_product_nu2(tuple, ev.nu + 1)?;
    if product_nu < ev.nu {
        return Err(Error::domain("tuple is not 2-Korselt"));
    }
    Ok(product_nu - ev.nu)
}

/// Tallies from a Monte Carlo run over `samples` independent r-tuples.
///
/// `depth_ge[z]` counts 2-Korselt tuples of exact depth at least `z`
/// (`depth_ge[0]` equals `korselt_count`); `depth_ge_unequal` restricts the
/// same tally to tuples whose exponent vector is not constant, the case the
/// geometric halving law applies to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleStats {
    pub r: u32,
    pub samples: u64,
    pub seed: u64,
    pub korselt_count: u64,
    pub equal_exponent_count: u64,
    pub depth_ge: Vec<u64>,
    pub depth_ge_unequal: Vec<u64>,
}

impl TupleStats {
    fn empty(r: u32, seed: u64, max_z: u32) -> Self {
        TupleStats {
            r,
            samples: 0,
            seed,
            korselt_count: 0,
            equal_exponent_count: 0,
            depth_ge: vec![0; max_z as usize + 1],
            depth_ge_unequal: vec![0; max_z as usize + 1],
        }
    }

    pub fn max_z(&self) -> u32 {
        self.depth_ge.len() as u32 - 1
    }

    /// Fold another chunk of the same run into this one. Chunks must come
    /// from the same seed, tuple length, and depth range.
    pub fn merge(&mut self, other: &TupleStats) {
        assert_eq!(self.r, other.r, "merging different tuple lengths");
        assert_eq!(self.seed, other.seed, "merging different seeds");
        assert_eq!(self.depth_ge.len(), other.depth_ge.len());
        self.samples += other.samples;
        self.korselt_count += other.korselt_count;
        self.equal_exponent_count += other.equal_exponent_count;
        for (a, b) in self.depth_ge.iter_mut().zip(&other.depth_ge) {
            *a += b;
        }
        for (a, b) in self.depth_ge_unequal.iter_mut().zip(&other.depth_ge_unequal) {
            *a += b;
        }
    }
}

/// Monte Carlo over the tuple indices in `range`, with each tuple's
/// randomness derived only from `(seed, index)`: disjoint chunks can run
/// anywhere and [`TupleStats::merge`] back into the full run.
pub fn monte_carlo_chunk(
    r: u32,
    range: core::ops::Range<u64>,
    seed: u64,
    max_z: u32,
) -> Result<TupleStats> {
    if r == 0 {
        return Err(Error::domain("tuple length must be at least 1"));
    }
    let mut stats = TupleStats::empty(r, seed, max_z);
    for index in range {
        let mut stream = ChaCha8Rng::seed_from_u64(seed);
        stream.set_stream(index);
        let mut tuple = sample_tuple(r, DEFAULT_INITIAL_PRECISION, &mut stream)?;
        let ev = exponent_vector(&mut tuple)?;
        let korselt = product_mod_2k(&mut tuple, ev.nu)?.is_one();
        stats.samples += 1;
        if ev.all_equal() {
            // Equal exponents force the 2-Korselt property.
            assert!(korselt, "equal-exponent tuple must be 2-Korselt: {ev:?}");
        }
        if !korselt {
            continue;
        }
        stats.korselt_count += 1;
        let depth = resolve_product_nu2(&mut tuple, ev.nu + 1)? - ev.nu;
        if ev.all_equal() {
            stats.equal_exponent_count += 1;
            // The constant-exponent cases have forced depth behavior: odd
            // tuples land exactly at depth 0, even tuples at depth >= 1.
            if r % 2 == 1 {
                assert_eq!(depth, 0, "odd equal-exponent tuple of depth {depth}");
            } else {
                assert!(depth >= 1, "even equal-exponent tuple of depth 0");
            }
        } else {
            // Unless all exponents are equal, the minimum must occur an
            // even number of times.
            assert!(
                ev.s % 2 == 0,
                "2-Korselt tuple with odd minimum multiplicity: {ev:?}"
            );
        }
        for z in 0..=depth.min(max_z) {
            stats.depth_ge[z as usize] += 1;
            if !ev.all_equal() {
                stats.depth_ge_unequal[z as usize] += 1;
            }
        }
    }
    Ok(stats)
}

/// Full Monte Carlo run of `samples` tuples (chunk `0..samples`).
pub fn monte_carlo(r: u32, samples: u64, seed: u64, max_z: u32) -> Result<TupleStats> {
    if samples == 0 {
        return Err(Error::domain("sample count must be at least 1"));
    }
    monte_carlo_chunk(r, 0..samples, seed, max_z)
}

/// `W(n) = sum_{j=0}^{n} (-1)^j C(n,j) / (2^{j+1} - 1)`: the expectation of
/// `2^{1-Z}` for `Z` the maximum of `n` geometric(1/2) variables.
pub fn w_of_n(n: u32) -> ExactRational {
    let mut sum = ExactRational::zero();
    for j in 0..=n {
        let coefficient = BigInt::from(binomial(n as u64, j as u64));
        let denominator = (BigInt::one() << (j + 1)) - 1;
        let term = Ratio::new(coefficient, denominator);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// Exact probability that an r-tuple of random odd 2-adic integers is
/// 2-Korselt:
/// `(1/(2^r-1)) [1 + sum_{2 <= s < r, s even} C(r,s) W(r-s)]`.
pub fn exact_korselt_prob(r: u32) -> ExactRational {
    assert!(r >= 1, "tuple length must be at least 1");
    let mut bracket = ExactRational::one();
    let mut s = 2u32;
    while s < r {
        bracket += Ratio::from_integer(BigInt::from(binomial(r as u64, s as u64)))
            * w_of_n(r - s);
        s += 2;
    }
    bracket / Ratio::from_integer((BigInt::one() << r) - 1)
}

/// Probability that all r exponents are equal: `1/(2^r - 1)`.
pub fn equal_exponent_prob(r: u32) -> ExactRational {
    assert!(r >= 1, "tuple length must be at least 1");
    Ratio::new(BigInt::one(), (BigInt::one() << r) - 1)
}

/// The three exponent-vector regimes of a 2-Korselt tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthCase {
    /// `r` odd, all exponents equal: the product sits at exact depth 0.
    OddEqual,
    /// `r` even, all exponents equal: depth at least 1 is forced.
    EvenEqual,
    /// Exponents not all equal.
    Unequal,
}

/// `Pr[depth >= z | 2-Korselt]` within a regime, for `z >= 1`: 0 for
/// [`DepthCase::OddEqual`], `1/2^{z-1}` for [`DepthCase::EvenEqual`],
/// `1/2^z` for [`DepthCase::Unequal`].
pub fn conditional_depth_prob(r: u32, z: u32, case: DepthCase) -> Result<ExactRational> {
    if z == 0 {
        return Err(Error::domain("conditional depth law requires z >= 1"));
    }
    match case {
        DepthCase::OddEqual => {
            if r % 2 == 0 {
                return Err(Error::domain("OddEqual requires odd r"));
            }
            Ok(ExactRational::zero())
        }
        DepthCase::EvenEqual => {
            if r % 2 == 1 {
                return Err(Error::domain("EvenEqual requires even r"));
            }
            Ok(Ratio::new(BigInt::one(), BigInt::one() << (z - 1)))
        }
        DepthCase::Unequal => Ok(Ratio::new(BigInt::one(), BigInt::one() << z)),
    }
}

/// `r * exact_korselt_prob(r)`, for inspecting the Theta(1/r) behavior.
pub fn scaled_prob(r: u32) -> Result<ExactRational> {
    if r < 3 {
        return Err(Error::domain("scaled probability is defined for r >= 3"));
    }
    Ok(exact_korselt_prob(r) * Ratio::from_integer(BigInt::from(r)))
}
