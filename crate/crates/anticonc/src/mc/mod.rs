//! Monte Carlo ground truth: Haar sampling, sampled noisy RMPS overlaps,
//! exact small brickwall simulation and the empirical estimators.

mod brickwall;
mod estimators;
mod haar;
mod rmps_sample;

pub use brickwall::{simulate_brickwall_exact, BrickwallOutcome};
pub use estimators::{
    empirical_moments, empirical_xeb, jackknife_mean, ks_critical_value, ks_statistic, pop_histogram, Binning, Histogram, MomentEstimate,
};
pub use haar::{haar_isometry, sample_haar_global, sample_haar_state, sample_haar_unitary};
pub use rmps_sample::{
    probe_noise_check, sample_rmps_overlaps, staircase_amplitudes, LadderMethod, OverlapSample, SampleOptions, Staircase,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A reproducible random stream: identical (seed, stream) pairs give
/// identical draws and distinct stream ids give independent sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomStream {
    pub seed: u64,
    pub stream: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Independent child stream for task `index`.
    pub fn child(&self, index: u64) -> Self {
        // Mix the parent stream into the seed so children of different
        // parents never collide.
        let mixed = self.seed ^ self.stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        Self { seed: mixed, stream: index }
    }
}
