//! Helpers for the benchmark suite: deterministic designs of exact sizes,
//! so timings compare like with like across runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modspec_core::SystemDesign;

/// A design with exactly `structors` x `functionals` vertices and each edge
/// present with `edge_probability`, drawn from a fixed seed. A draw with no
/// edges at all is rerolled, so the result is always analysable.
pub fn exact_design(
    structors: usize,
    functionals: usize,
    edge_probability: f64,
    seed: u64,
) -> SystemDesign {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut edges = Vec::new();
        for s in 0..structors {
            for f in 0..functionals {
                if rng.random_bool(edge_probability) {
                    edges.push((s, f));
                }
            }
        }
        if !edges.is_empty() {
            return SystemDesign::synthetic(structors, functionals, &edges);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_design_is_reproducible_and_exactly_sized() {
        let a = exact_design(6, 5, 0.3, 17);
        let b = exact_design(6, 5, 0.3, 17);
        assert_eq!(a, b);
        assert_eq!(a.structors().len(), 6);
        assert_eq!(a.functionals().len(), 5);
        assert!(!a.edges().is_empty());
    }
}
