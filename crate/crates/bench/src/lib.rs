//! Pole families shared by the benchmarks.

use tmapprox::{Pole, PoleSequence};

/// `a_k = i k` for `k = 1..=n`.
pub fn imaginary(n: usize) -> PoleSequence {
    PoleSequence::new((1..=n).map(|k| Pole::new(0.0, k as f64)).collect()).expect("valid poles")
}

/// Poles spread around the imaginary axis with growing height.
pub fn tilted(n: usize) -> PoleSequence {
    PoleSequence::new(
        (1..=n)
            .map(|k| Pole::new(1.5 * (k as f64).cos(), 0.5 + 0.25 * k as f64))
            .collect(),
    )
    .expect("valid poles")
}
