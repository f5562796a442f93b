//! Seeded random digraphs.
//!
//! The generator is ChaCha8 (`rand_chacha`) seeded with `seed_from_u64`.
//! Ordered pairs `(u, v)`, `u != v`, are visited with `u` then `v`
//! ascending; each draws one `u64`, keeps its top 53 bits as a uniform
//! `x` in `[0, 1)` and includes the arc iff `x < p`.

use dmlst_core::{Arc, DiGraph};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn generate_random(n: usize, p: f64, seed: u64) -> DiGraph {
    assert!((0.0..=1.0).contains(&p), "probability {p} outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DiGraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let x = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if x < p {
                g.add_arc(Arc::new(u, v)).expect("fresh arc");
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        assert_eq!(generate_random(6, 0.0, 3).arc_count(), 0);
        assert_eq!(generate_random(6, 1.0, 3).arc_count(), 30);
    }

    #[test]
    fn seeded() {
        assert_eq!(generate_random(9, 0.4, 17), generate_random(9, 0.4, 17));
        assert_ne!(generate_random(9, 0.4, 17), generate_random(9, 0.4, 18));
    }
}
