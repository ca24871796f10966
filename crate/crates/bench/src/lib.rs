//! Seeded workloads shared by the benchmarks.

use pcroc::data::PairCounts;
use pcroc::fit::LinkFunction;
use pcroc::metricsim::{evenly_spaced, round_robin, sample_season, season_rng};

/// A round-robin season of `m` teams with strengths on `[-1, 1]` and `n` games per pair.
pub fn season(m: usize, n: u64, seed: u64) -> PairCounts {
    let mut rng = season_rng(seed, 0, m as u64, n);
    sample_season(&evenly_spaced(m, -1.0, 1.0), &round_robin(m, n), LinkFunction::Logistic, &mut rng)
}
