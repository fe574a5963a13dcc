//! Depth-limited ("z-deep") variants of the Miller-Rabin primality test and
//! the Carmichael-number theory that goes with them.
//!
//! The z-deep Miller-Rabin test examines only the last `z+1` entries of the
//! squaring chain `a^d, a^{2d}, ..., a^{2^r d}` (where `n-1 = 2^r d`, `d`
//! odd); `z = 0` is the Fermat test and `z >= r` is full Miller-Rabin. A
//! composite that fools the z-deep test for every unit base is a z-deep
//! Carmichael number, characterized by a strengthened Korselt divisibility:
//! `(p-1) | (n-1)/2^z` for every prime `p | n`.
//!
//! The crate provides:
//!
//! - [`primality`]: the Fermat, Solovay-Strassen, Miller-Rabin, z-deep and
//!   z=1 test family, a seeded multi-round driver, and a deterministic
//!   64-bit primality oracle.
//! - [`carmichael`]: Korselt and z-Korselt checks, exact depth, Carmichael
//!   enumeration (segmented smallest-prime-factor sieve and an exact
//!   prime-product method), OEIS b-file ingestion, depth tables, and the
//!   `1 + x/(2^z k f(k))` divisor-bound audit.
//! - [`local_model`]: the 2-adic local model — lazily revealed random odd
//!   2-adic integers, 2-Korselt testing of tuples, seeded Monte Carlo, and
//!   exact rational 2-Korselt probabilities.
//! - [`stats`]: the Poisson / Erdos-Kac prime-factor-count prediction.
//! - [`arith`]: the exact integer and rational primitives underneath.
//!
//! The crate is `no_std`-compatible (`alloc` required); the `std` feature
//! (default) only forwards to the dependencies. All randomized paths take
//! explicit seeds and derive per-index substreams, so results do not depend
//! on thread count or call batching.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arith;
pub mod carmichael;
pub mod error;
pub mod local_model;
pub mod primality;
pub mod stats;

pub use arith::{ExactRational, Factorization};
pub use carmichael::{DepthRecord, DepthTable};
pub use error::{Error, Result};
pub use local_model::{TupleStats, TwoAdicSample};
pub use primality::{TestKind, TestOutcome};
