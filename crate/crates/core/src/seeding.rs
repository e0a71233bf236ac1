//! Deterministic seed derivation for independent RNG streams.

/// Mixes a root seed with a salt (fold index, noise round, ...) into a new
/// seed, splitmix64-style. Same inputs, same output, on every platform.
pub fn mix(root: u64, salt: u64) -> u64 {
    let mut z = root ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
