// SPDX-License-Identifier: Apache-2.0

//! The project-wide pseudo random generator.
//!
//! All seeded components draw from ChaCha8 so that outputs are reproducible
//! across platforms. Each randomized component draws from its own domain, so
//! reusing one seed for, say, a generator and an edge scorer does not
//! correlate their outputs. Work that is split into chunks derives one
//! independent stream per chunk, which keeps results independent of the
//! worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type NkRng = ChaCha8Rng;

pub(crate) const BETWEENNESS: u64 = 1;
pub(crate) const ELECTRICAL: u64 = 2;
pub(crate) const PLM: u64 = 3;
pub(crate) const PLP: u64 = 4;
pub(crate) const EDGE_SCORES: u64 = 5;
pub(crate) const CLOSENESS: u64 = 6;

/// Generator for the graph generators and other seed-only uses.
pub fn rng(seed: u64) -> NkRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for `seed` within one component's `domain`.
pub fn keyed(seed: u64, domain: u64) -> NkRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    key[16] = 1;
    ChaCha8Rng::from_seed(key)
}

/// Independent stream `index` of `keyed(seed, domain)`.
pub fn stream(seed: u64, domain: u64, index: u64) -> NkRng {
    let mut r = keyed(seed, domain);
    r.set_stream(index.wrapping_add(1));
    r
}
