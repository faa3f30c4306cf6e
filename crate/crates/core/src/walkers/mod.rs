//! Simulators for edge-reinforced random walk and for the reversible Markov
//! chain in a fixed environment, plus the quenched-chain analytics: entropy
//! rates, exact path entropies, spectral gaps, conductance and exact
//! edge-count laws.

mod errw;
mod quenched;

pub use errw::{simulate_errw, simulate_errw_counts, simulate_errw_with, ErrwRun};
pub use quenched::{
    conductance, edge_count_distribution, entropy_rate_edge_form, min_edge_mass, quenched_chain, quenched_entropy_rate,
    quenched_path_entropy, simulate_quenched, simulate_quenched_with, spectral_gap, QuenchedChain,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Address of a reproducible random stream: the pair `(seed, stream)` fully
/// determines every draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }

    /// The same seed on another stream.
    pub fn with_stream(&self, stream: u64) -> Self {
        Self { stream, ..*self }
    }

    /// Seed for trial `i` of a family: streams are offset by the trial index.
    pub fn trial(&self, i: u64) -> Self {
        self.with_stream(self.stream.wrapping_add(i))
    }
}
