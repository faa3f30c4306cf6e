//! Numerical laboratory for edge-reinforced random walks (ERRW) on finite graphs.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: graphs, trajectories, count vectors, spanning-tree polynomial,
//!   subset statistics.
//! - [`specfun`]: log-gamma, digamma, trigamma, the Gamma-KL primitive `Λ`,
//!   binomial inverse moments.
//! - [`magic`]: the magic-formula mixing measure: normalizer, densities in both
//!   gauges, posterior conjugacy, exact path probabilities, environment KL,
//!   normalized field and its inverse.
//! - [`walkers`]: ERRW and quenched Markov-chain simulators, entropy rates,
//!   spectral gaps.
//! - [`envsampler`]: exact star sampling and simplex MCMC for environments.
//! - [`infoquant`]: entropy rates, mutual information, trajectory KL, the
//!   posterior gap and its bounds, n-star rates, tail constants.
//!
//! Everything probabilistic is carried in log-domain. Vectors indexed by edge
//! follow the canonical edge order of [`graph::Graph`].

#![forbid(unsafe_code)]

pub mod envsampler;
pub mod error;
pub mod graph;
pub mod infoquant;
pub mod magic;
pub mod numerics;
pub mod specfun;
pub mod walkers;

pub use error::{Error, Result};
