//! Fixtures shared by the benchmarks.

use ksat_core::distributions::{sample_p, sample_r, PlantedInstance};
use ksat_core::{Formula, RandomStream};

/// A planted instance drawn from a fixed stream.
pub fn planted(n: usize, k: usize, m: usize, seed: u64) -> PlantedInstance {
    sample_p(n, k, m, &mut RandomStream::new(seed, 0).rng()).expect("valid shape")
}

/// A uniform random formula drawn from a fixed stream.
pub fn random(n: usize, k: usize, m: usize, seed: u64) -> Formula {
    sample_r(n, k, m, &mut RandomStream::new(seed, 0).rng()).expect("valid shape")
}
