//! Benchmark fixtures.

use douglas_core::RegionSpec;

/// Regions of growing size, named for benchmark ids.
pub fn fixtures() -> Vec<(&'static str, RegionSpec)> {
    vec![
        ("aztec-4", RegionSpec::new(4, vec![8])),
        ("douglas-2", RegionSpec::new(4, vec![1, 2, 2, 2, 1])),
        ("d7-4254", RegionSpec::new(7, vec![4, 2, 5, 4])),
        ("aztec-8", RegionSpec::new(8, vec![16])),
    ]
}

/// The Aztec diamond of order `n` as a region.
pub fn aztec(n: u32) -> RegionSpec {
    RegionSpec::new(n, vec![2 * n])
}
