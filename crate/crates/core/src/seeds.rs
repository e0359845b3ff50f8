//! Per-episode generator derivation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Generator type used for every stochastic routine.
pub type EpisodeRng = ChaCha8Rng;

fn digest(master_seed: u64, index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update(index.to_le_bytes());
    h.finalize().into()
}

/// 64-bit tag of the episode generator, used in diagnostics.
pub fn episode_seed(master_seed: u64, index: u64) -> u64 {
    let d = digest(master_seed, index);
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

/// Generator for episode `index` of a run with `master_seed`.
pub fn episode_rng(master_seed: u64, index: u64) -> EpisodeRng {
    ChaCha8Rng::from_seed(digest(master_seed, index))
}

/// A master seed for an auxiliary stream (calibration runs, instance
/// generation) that does not collide with the episode streams.
pub fn derive_master(master_seed: u64, stream: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update(stream.as_bytes());
    let d: [u8; 32] = h.finalize().into();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}
