//! Fixtures shared by the criterion benches.

use sullivan_core::{Rational, RationalMatrix};

/// Deterministic `rows x cols` integer matrix with roughly `density` percent nonzeros.
pub fn pseudo_random_matrix(rows: usize, cols: usize, density: u64, seed: u64) -> RationalMatrix {
    let mut state = seed;
    let mut m = RationalMatrix::new(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let r = state >> 33;
            if r % 100 < density {
                let v = (r / 100 % 7) as i64 - 3;
                m.set(i, j, Rational::from_integer(v.into()));
            }
        }
    }
    m
}
