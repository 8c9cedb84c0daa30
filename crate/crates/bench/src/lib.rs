//! Shared inputs for the criterion benches under `benches/`.

use itmlab::SamplingSpec;

/// A reproducible geometric itinerary of length `n`.
pub fn itinerary(n: usize, seed: u64) -> Vec<u64> {
    SamplingSpec::geometric(0.5, 20, seed).sample(0, n)
}
