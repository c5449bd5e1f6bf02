//! Verifier-guided sampling on finite discrete measures under chi-square
//! coverage constraints.
//!
//! The crate models a generate-and-verify loop as a transport problem: a
//! proposal measure over a finite response universe, a verifier set whose
//! mass the sampler tries to concentrate on, and a coverage budget bounding
//! how far any induced policy may tilt away from the proposal. It provides
//!
//! * [`measures`] — universes, verifier sets, ROC accounting and the greedy
//!   construction of verifiers with target operating characteristics;
//! * [`transport`] — the coverage-constrained optimal policy, chi-square
//!   divergence, optimal transport cost and regime classification;
//! * [`theory`] — closed-form predictions (complexity, sub-optimality,
//!   admissible batch sizes, induced density ratios) for every sampler;
//! * [`samplers`] — executable accept-if-correct, sequential rejection
//!   sampling, sequential maximal coupling, best-of-N and batched rejection
//!   sampling, plus exact induced-distribution oracles;
//! * [`montecarlo`] — a seeded episode harness comparing empirical estimates
//!   against the closed forms;
//! * [`rng`] — the counter-based generator that keys every uniform variate
//!   by `(master seed, episode, draw index)`.

pub mod error;
pub mod measures;
pub mod montecarlo;
pub mod rng;
pub mod samplers;
pub mod theory;
pub mod transport;

pub use error::{Error, Result};
pub use measures::{ResponseUniverse, RocProfile, VerifierSet};
pub use transport::{CoverageBudget, Regime, RegimeTag, TiltedPolicy};
