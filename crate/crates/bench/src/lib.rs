//! Fixed inputs shared by the benchmarks.

use nowhere_core::rat::ratio;
use nowhere_core::Rat;

/// Points with periodic, absorbed and long-transient orbits.
pub fn sample_points() -> Vec<Rat> {
    vec![ratio(1, 7), ratio(7, 10), ratio(123, 1001), ratio(-2, 7), ratio(314159, 1000000)]
}
