#![allow(dead_code)]

pub mod oracle;

use deploygrip_core::film::StationInput;
use deploygrip_core::units::mm;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Random admissible stations spread over the three contact states.
pub fn random_stations(count: usize, seed: u64) -> Vec<StationInput> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let t = mm(rng.random_range(1.2..2.2));
            let delta = t / 2.0 * rng.random_range(0.05..0.9);
            let l1p = rng.random_range((delta.max(t / 2.0) * 1.1)..mm(12.0));
            let base = StationInput { l1: l1p, l1p, t, delta, radius: mm(rng.random_range(14.0..20.0)) };
            let o = oracle::solve(&base);
            let l1 = match i % 3 {
                0 => rng.random_range(l1p..o.l_ns),
                1 => rng.random_range(o.l_ns..o.l_sd),
                _ => rng.random_range(o.l_sd..(o.l_sd + mm(10.0))),
            };
            StationInput { l1, ..base }
        })
        .collect()
}
