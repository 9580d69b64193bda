use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent generator for sub-task `stream` of a run seeded with `seed`.
///
/// ChaCha's stream id splits the key space by counter, so sub-streams do not
/// depend on how many draws sibling tasks made.
pub fn split_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child seed; used when a whole run must be re-seeded (retries, trials).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) mod streams {
    pub const GENERATOR: u64 = 1;
    pub const ORDERING: u64 = 2;
    pub const DYNAMIC: u64 = 3;
    pub const VERTEX_SAMPLE: u64 = 10;
    pub const EDGE_SAMPLE: u64 = 11;
    /// Level `i` of the goodness-test estimator uses `LEVEL_BASE + i`.
    pub const LEVEL_BASE: u64 = 1000;
}
