use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type NoiseRng = ChaCha8Rng;

/// Source of the environment's stochastic inputs.
///
/// Every step gets its own ChaCha stream keyed by the step index, so the
/// draws seen at step `k` depend only on `(seed, k)` and never on how many
/// draws earlier steps consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnvNoise {
    seed: u64,
}

impl EnvNoise {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn step_rng(&self, step: u64) -> NoiseRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(step);
        rng
    }
}
