//! Inputs shared by the criterion benches.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdinv_core::exactlin::IntMatrix;

/// Dense matrix with entries in `-bound..=bound`, reproducible from `seed`.
pub fn random_matrix(seed: u64, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntMatrix::from_entries(rows, cols, entries).expect("entry count matches shape")
}
